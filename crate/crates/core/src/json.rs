//! Deterministic JSON encodings. Integers and fractions are decimal strings;
//! terms follow the canonical monomial order; walls are sorted by slope.

use serde_json::{json, Value};

use crate::coeffring::{BivariateSeries, Polynomial, Ring};
use crate::grading::Grading;
use crate::gw::GwTable;
use crate::scattering::{ComparisonReport, ScatteringDiagram, Wall, WallFunction};
use crate::thetagreedy::{BrokenLine, ClusterVariable, Point, PointedLaurent};

/// Version of every document produced here.
pub const SCHEMA_VERSION: u32 = 1;

/// Wraps a payload with the schema version and a document kind.
pub fn document(kind: &str, body: Value) -> Value {
    json!({ "schema_version": SCHEMA_VERSION, "kind": kind, "data": body })
}

/// `[{"monomial": "p[1,1]^2*s", "coefficient": "3"}, ...]`.
pub fn poly<R: Ring>(p: &Polynomial<R>) -> Value {
    Value::Array(
        p.terms()
            .map(|(m, c)| json!({ "monomial": m.to_string(), "coefficient": c.to_string() }))
            .collect(),
    )
}

/// `[{"x": a, "y": b, "coefficient": poly}, ...]` in exponent order.
pub fn series<R: Ring>(s: &BivariateSeries<R>) -> Value {
    Value::Array(
        s.terms()
            .map(|(e, c)| json!({ "x": e.0, "y": e.1, "coefficient": poly(c) }))
            .collect(),
    )
}

pub fn wall_function(f: &WallFunction) -> Value {
    let coeffs: Vec<Value> = f
        .coeffs()
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| json!({ "k": k, "value": poly(c) }))
        .collect();
    json!({
        "direction": [f.direction().0, f.direction().1],
        "order": f.order(),
        "coefficients": coeffs,
    })
}

pub fn wall(w: &Wall) -> Value {
    let mut v = wall_function(&w.function);
    v["kind"] = json!(w.kind.as_str());
    v
}

/// Lines and rays on a common support stay separate entries.
pub fn diagram(d: &ScatteringDiagram) -> Value {
    json!({
        "order": d.order(),
        "walls": d.walls().iter().map(wall).collect::<Vec<_>>(),
    })
}

pub fn comparison(r: &ComparisonReport) -> Value {
    let opt = |f: &Option<WallFunction>| f.as_ref().map(wall_function).unwrap_or(Value::Null);
    json!({
        "order": r.order,
        "rays_compared": r.rays_compared,
        "equal": r.is_equal(),
        "discrepancies": r.discrepancies.iter().map(|d| json!({
            "direction": [d.direction.0, d.direction.1],
            "tight": opt(&d.tight),
            "oracle": opt(&d.oracle),
        })).collect::<Vec<_>>(),
    })
}

pub fn grading(g: &Grading) -> Value {
    json!({
        "m": g.path().m(),
        "n": g.path().n(),
        "word": g.path().word(),
        "values": g.values(),
        "weight": poly(&g.weight()),
    })
}

pub fn point(p: &Point) -> Value {
    json!([p.0.to_string(), p.1.to_string()])
}

pub fn broken_line(l: &BrokenLine) -> Value {
    json!({
        "segments": l.segments.iter().map(|(e, c)| json!({
            "exponent": [e.0, e.1],
            "coefficient": poly(c),
        })).collect::<Vec<_>>(),
        "bends": l.bends.iter().map(|b| json!({
            "support": [b.support.0, b.support.1],
            "wall": [b.wall.0, b.wall.1],
            "multiplicity": b.multiplicity,
            "point": point(&b.point),
        })).collect::<Vec<_>>(),
        "endpoint": point(&l.endpoint),
        "weight": poly(l.weight()),
    })
}

pub fn pointed(p: &PointedLaurent) -> Value {
    json!({
        "point": [p.point().0, p.point().1],
        "terms": series(p.value()),
    })
}

pub fn cluster_variable(c: &ClusterVariable) -> Value {
    json!({
        "k": c.k,
        "pre_variable": series(&c.pre),
        "normalized": pointed(&c.normalized),
        "leading_exponents": [c.leading_exponents.0, c.leading_exponents.1],
    })
}

pub fn gw_table(t: &GwTable) -> Value {
    json!({
        "l1": t.l1,
        "l2": t.l2,
        "direction": [t.direction.0, t.direction.1],
        "order": t.order,
        "rows": t.rows.iter().map(|(k, n)| json!({ "k": k, "n": n.to_string() })).collect::<Vec<_>>(),
    })
}

/// `k,N_k` rows with a header line.
pub fn gw_csv(t: &GwTable) -> String {
    let mut out = String::from("k,N_k\n");
    for (k, n) in &t.rows {
        out.push_str(&format!("{k},{n}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::p_var;
    use crate::data::InitialData;

    #[test]
    fn big_integers_are_strings() {
        let p = p_var(1, 1).scale(&"123456789012345678901234567890".parse().unwrap());
        assert_eq!(
            poly(&p),
            json!([{ "monomial": "p[1,1]", "coefficient": "123456789012345678901234567890" }])
        );
    }

    #[test]
    fn diagram_is_slope_sorted() {
        let d = ScatteringDiagram::two_line(&InitialData::symbolic(3, 1), 9)
            .unwrap()
            .ks_complete()
            .unwrap();
        let v = document("diagram", diagram(&d));
        assert_eq!(v["schema_version"], 1);
        let dirs: Vec<Value> = v["data"]["walls"]
            .as_array()
            .unwrap()
            .iter()
            .map(|w| w["direction"].clone())
            .collect();
        assert_eq!(
            dirs,
            vec![
                json!([1, 0]),
                json!([3, 1]),
                json!([2, 1]),
                json!([3, 2]),
                json!([1, 1]),
                json!([0, 1])
            ]
        );
        assert_eq!(v.to_string(), document("diagram", diagram(&d)).to_string());
    }

    #[test]
    fn gw_rows() {
        let t = crate::gw::gw_extract(1, 1, 1, 1, 4).unwrap();
        assert_eq!(gw_csv(&t), "k,N_k\n1,1\n2,-1/4\n");
        assert_eq!(gw_table(&t)["rows"][1]["n"], "-1/4");
    }
}
