//! SVG figures: rectangle tilings of gradings and ray fans of diagrams.

use std::fmt::Write;

use gcsd_core::grading::Grading;
use gcsd_core::scattering::{ScatteringDiagram, WallKind};

const UNIT: f64 = 40.0;
const MARGIN: f64 = 30.0;

fn header(out: &mut String, width: f64, height: f64) {
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}">"#,
        w = width,
        h = height
    )
    .unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
}

/// Draws the maximal Dyck path with a blue rectangle above each positively
/// graded horizontal edge and a red rectangle left of each positively graded
/// vertical edge. A rectangle's other side is the size of the edge's local
/// shadow. Edge values are printed next to the edges.
pub fn tiling(g: &Grading) -> String {
    let p = g.path();
    let (m, n) = (p.m() as f64, p.n() as f64);
    // (x, y, w, h) in lattice units, lower-left corner first.
    let mut rects = Vec::new();
    for e in p.edges() {
        if g.values()[e.position] == 0 {
            continue;
        }
        let size = g.local_shadow(e).map(|s| s.len()).unwrap_or(0) as f64;
        let (ax, ay) = (e.anchor.0 as f64, e.anchor.1 as f64);
        if e.is_horizontal() {
            rects.push((ax, ay, 1.0, size, "#3b6fd8"));
        } else {
            rects.push((ax - size, ay - 1.0, size, 1.0, "#d83b3b"));
        }
    }
    let x0 = rects.iter().map(|r| r.0).fold(0.0, f64::min);
    let y1 = rects.iter().map(|r| r.1 + r.3).fold(n, f64::max);
    let width = (m - x0) * UNIT + 2.0 * MARGIN;
    let height = y1 * UNIT + 2.0 * MARGIN;
    let px = |x: f64| MARGIN + (x - x0) * UNIT;
    let py = |y: f64| height - MARGIN - y * UNIT;
    let mut out = String::new();
    header(&mut out, width, height);
    writeln!(
        out,
        r#"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="gray" stroke-dasharray="4 4"/>"#,
        px(0.0),
        py(0.0),
        px(m),
        py(n)
    )
    .unwrap();
    for (x, y, w, h, fill) in rects {
        writeln!(
            out,
            r#"<rect x="{:.1}" y="{:.1}" width="{:.1}" height="{:.1}" fill="{fill}" fill-opacity="0.25" stroke="{fill}"/>"#,
            px(x),
            py(y + h),
            w * UNIT,
            h * UNIT
        )
        .unwrap();
    }
    let pts: Vec<String> = p
        .vertices()
        .iter()
        .map(|&(x, y)| format!("{:.1},{:.1}", px(x as f64), py(y as f64)))
        .collect();
    writeln!(
        out,
        r#"<polyline points="{}" fill="none" stroke="black" stroke-width="2"/>"#,
        pts.join(" ")
    )
    .unwrap();
    for e in p.edges() {
        let v = g.values()[e.position];
        let (ax, ay) = (e.anchor.0 as f64, e.anchor.1 as f64);
        let (x, y) = if e.is_horizontal() {
            (px(ax + 0.5), py(ay) + 14.0)
        } else {
            (px(ax) + 6.0, py(ay - 0.5) + 4.0)
        };
        writeln!(
            out,
            r#"<text x="{x:.1}" y="{y:.1}" font-family="sans-serif" font-size="11">{}={}</text>"#,
            e.label(),
            v
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}

/// Draws every wall on its support: lines through the origin, rays from the
/// origin. Labels carry the direction and the number of nonzero coefficients.
pub fn fan(d: &ScatteringDiagram) -> String {
    let size = 480.0;
    let c = size / 2.0;
    let r = size / 2.0 - MARGIN;
    let mut out = String::new();
    header(&mut out, size, size);
    for w in d.walls() {
        let (a, b) = w.direction();
        let len = ((a * a + b * b) as f64).sqrt();
        let (ux, uy) = (a as f64 / len, b as f64 / len);
        let terms = w
            .function
            .coeffs()
            .iter()
            .skip(1)
            .filter(|c| !c.is_zero())
            .count();
        let (colour, from, to) = match w.kind {
            WallKind::Line => ("black", 1.0, -1.0),
            WallKind::Ray => ("#3b6fd8", 0.0, -1.0),
        };
        writeln!(
            out,
            r#"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="{colour}" stroke-width="{}"/>"#,
            c + from * r * ux,
            c - from * r * uy,
            c + to * r * ux,
            c - to * r * uy,
            1.0 + (terms as f64).min(4.0) * 0.5
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="10">({a},{b}) [{terms}]</text>"#,
            c - (r + 4.0) * ux - 12.0,
            c + (r + 4.0) * uy + 4.0
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}
