use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Signed;
use rayon::prelude::*;

use crate::coeffring::{BivariateSeries, CoeffPolynomial, Exponent};
use crate::error::{Error, Result};
use crate::scattering::{ScatteringDiagram, WallFunction};

use super::laurent::PointedLaurent;

/// A point of the plane with exact rational coordinates.
pub type Point = (BigRational, BigRational);

pub fn point(x: (i64, i64), y: (i64, i64)) -> Point {
    (
        BigRational::new(x.0.into(), x.1.into()),
        BigRational::new(y.0.into(), y.1.into()),
    )
}

/// A bend of a broken line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bend {
    /// Direction of the half-line of the wall where the bend happens.
    pub support: Exponent,
    /// Monomial direction of the wall function.
    pub wall: Exponent,
    pub multiplicity: u32,
    pub point: Point,
}

/// A broken line: exponents and coefficients on each linear domain, the
/// bends between them, and the endpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrokenLine {
    pub segments: Vec<(Exponent, CoeffPolynomial)>,
    pub bends: Vec<Bend>,
    pub endpoint: Point,
}

impl BrokenLine {
    pub fn initial_exponent(&self) -> Exponent {
        self.segments[0].0
    }

    pub fn final_exponent(&self) -> Exponent {
        self.segments.last().expect("nonempty").0
    }

    pub fn weight(&self) -> &CoeffPolynomial {
        &self.segments.last().expect("nonempty").1
    }

    pub fn exponents(&self) -> Vec<Exponent> {
        self.segments.iter().map(|s| s.0).collect()
    }

    pub fn coefficients(&self) -> Vec<CoeffPolynomial> {
        self.segments.iter().map(|s| s.1.clone()).collect()
    }

    /// Total bend multiplicity at walls whose function lives in `x^w`.
    pub fn multiplicity_at(&self, w: Exponent) -> u32 {
        self.bends
            .iter()
            .filter(|b| b.wall == w)
            .map(|b| b.multiplicity)
            .sum()
    }
}

/// Walls sharing a half-line, with their functions multiplied together.
struct HalfWall {
    support: Exponent,
    wall: Exponent,
    coeffs: Vec<CoeffPolynomial>,
}

fn cross(a: (i128, i128), b: (i128, i128)) -> i128 {
    a.0 * b.1 - a.1 * b.0
}

fn wide(e: Exponent) -> (i128, i128) {
    (e.0 as i128, e.1 as i128)
}

fn halves(d: &ScatteringDiagram) -> Vec<HalfWall> {
    let mut by_support: BTreeMap<Exponent, HalfWall> = BTreeMap::new();
    let mut add = |u: Exponent, f: &WallFunction| {
        let len = f.max_power() as usize;
        let h = by_support.entry(u).or_insert_with(|| HalfWall {
            support: u,
            wall: f.direction(),
            coeffs: vec![CoeffPolynomial::one()],
        });
        h.coeffs = crate::scattering::uni_mul(&h.coeffs, f.coeffs(), len.max(h.coeffs.len() - 1));
        while h.coeffs.len() > 1 && h.coeffs.last().is_some_and(CoeffPolynomial::is_zero) {
            h.coeffs.pop();
        }
    };
    for f in d.lines() {
        let w = f.direction();
        add(w, f);
        add((-w.0, -w.1), f);
    }
    for f in d.rays().values() {
        let w = f.direction();
        add((-w.0, -w.1), f);
    }
    by_support
        .into_values()
        .filter(|h| h.coeffs.len() > 1)
        .collect()
}

/// Integer vector with the direction of a rational point.
fn direction_of(q: &Point) -> (i128, i128) {
    let l = q.0.denom().lcm(q.1.denom());
    let x = q.0.numer() * (&l / q.0.denom());
    let y = q.1.numer() * (&l / q.1.denom());
    let g = x.gcd(&y);
    let to =
        |v: BigInt| -> i128 { i128::try_from(v / &g).expect("endpoint direction fits in i128") };
    (to(x), to(y))
}

struct Tracer<'a> {
    halves: &'a [HalfWall],
    q: &'a Point,
    qdir: (i128, i128),
    powers: Mutex<HashMap<(usize, u64, usize), Vec<CoeffPolynomial>>>,
}

/// Search state for one final exponent.
struct Target {
    exponent: Exponent,
    sigma: i128,
    momentum: BigRational,
}

impl<'a> Tracer<'a> {
    fn in_sweep(&self, sigma: i128, from: (i128, i128), to: (i128, i128), u: (i128, i128)) -> bool {
        sigma * cross(from, u) > 0 && sigma * cross(u, to) > 0
    }

    fn power(&self, h: usize, k: u64, len: usize) -> Vec<CoeffPolynomial> {
        if let Some(v) = self.powers.lock().expect("cache").get(&(h, k, len)) {
            return v.clone();
        }
        let f = &self.halves[h].coeffs;
        let mut out = vec![CoeffPolynomial::one()];
        let mut base = f.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                out = crate::scattering::uni_mul(&out, &base, len);
            }
            e >>= 1;
            if e > 0 {
                base = crate::scattering::uni_mul(&base, &base, len);
            }
        }
        self.powers
            .lock()
            .expect("cache")
            .insert((h, k, len), out.clone());
        out
    }

    fn bend_point(&self, t: &Target, u: Exponent, m: Exponent) -> Point {
        let s = &t.momentum
            / BigRational::from_integer(cross(wide(u), (-(m.0 as i128), -(m.1 as i128))).into());
        (
            &s * BigRational::from_integer(u.0.into()),
            &s * BigRational::from_integer(u.1.into()),
        )
    }

    fn explore(
        &self,
        t: &Target,
        from: (i128, i128),
        segments: &mut Vec<(Exponent, CoeffPolynomial)>,
        bends: &mut Vec<Bend>,
        out: &mut Vec<BrokenLine>,
    ) {
        let (m, c) = segments.last().cloned().expect("nonempty");
        let to = (-(m.0 as i128), -(m.1 as i128));
        if m == t.exponent {
            if self.in_sweep(t.sigma, from, to, self.qdir) {
                out.push(BrokenLine {
                    segments: segments.clone(),
                    bends: bends.clone(),
                    endpoint: self.q.clone(),
                });
            }
            return;
        }
        let mut ahead: Vec<usize> = (0..self.halves.len())
            .filter(|&i| self.in_sweep(t.sigma, from, to, wide(self.halves[i].support)))
            .collect();
        ahead.sort_by(|&i, &j| {
            let s = t.sigma * cross(wide(self.halves[i].support), wide(self.halves[j].support));
            0.cmp(&s)
        });
        for i in ahead {
            let h = &self.halves[i];
            let w = h.wall;
            let k = cross(wide(w), wide(m)).unsigned_abs() as u64;
            if k == 0 {
                continue;
            }
            let room = |gap: i64, step: i64| if step == 0 { i64::MAX } else { gap / step };
            let len = room(t.exponent.0 - m.0, w.0).min(room(t.exponent.1 - m.1, w.1));
            if len <= 0 {
                continue;
            }
            let len = (len as usize).min(h.coeffs.len().saturating_sub(1) * k as usize);
            let pw = self.power(i, k, len);
            for (j, coef) in pw.iter().enumerate().skip(1) {
                if coef.is_zero() {
                    continue;
                }
                let j64 = j as i64;
                let next = (m.0 + j64 * w.0, m.1 + j64 * w.1);
                bends.push(Bend {
                    support: h.support,
                    wall: w,
                    multiplicity: j as u32,
                    point: self.bend_point(t, h.support, m),
                });
                segments.push((next, &c * coef));
                self.explore(t, wide(h.support), segments, bends, out);
                segments.pop();
                bends.pop();
            }
        }
    }
}

/// Options for [`enumerate_broken_lines`].
#[derive(Clone, Debug, Default)]
pub struct BrokenLineQuery {
    /// Restrict to broken lines with this final exponent.
    pub final_exponent: Option<Exponent>,
}

fn validate_endpoint(halves: &[HalfWall], q: &Point) -> Result<(i128, i128)> {
    if !q.0.is_positive() || !q.1.is_positive() {
        return Err(Error::Precondition(
            "the endpoint must lie in the open first quadrant".into(),
        ));
    }
    let qdir = direction_of(q);
    if let Some(h) = halves.iter().find(|h| {
        let u = wide(h.support);
        cross(qdir, u) == 0 && qdir.0 * u.0 + qdir.1 * u.1 > 0
    }) {
        return Err(Error::NotGeneric(format!(
            "endpoint lies on the wall through ({}, {})",
            h.support.0, h.support.1
        )));
    }
    Ok(qdir)
}

/// All broken lines for `m0` ending at `q` whose final exponent differs from
/// `m0` by an exponent of order at most the diagram's order.
pub fn enumerate_broken_lines(
    d: &ScatteringDiagram,
    m0: Exponent,
    q: &Point,
    query: &BrokenLineQuery,
) -> Result<Vec<BrokenLine>> {
    let hs = halves(d);
    let qdir = validate_endpoint(&hs, q)?;
    if m0 == (0, 0) {
        return Ok(vec![BrokenLine {
            segments: vec![((0, 0), CoeffPolynomial::one())],
            bends: vec![],
            endpoint: q.clone(),
        }]);
    }
    let order = d.order() as i64;
    let targets: Vec<Exponent> = match query.final_exponent {
        Some(e) => vec![e],
        None => (0..=order)
            .flat_map(|s| (0..=s).map(move |a| (m0.0 + a, m0.1 + s - a)))
            .filter(|&e| e != (0, 0))
            .collect(),
    };
    let tracer = Tracer {
        halves: &hs,
        q,
        qdir,
        powers: Mutex::new(HashMap::new()),
    };
    let found = targets
        .par_iter()
        .map(|&e| {
            let l = cross(qdir, (-(e.0 as i128), -(e.1 as i128)));
            if l == 0 {
                return Err(Error::NotGeneric(format!(
                    "endpoint is parallel to the exponent ({}, {})",
                    e.0, e.1
                )));
            }
            let d = (e.0 - m0.0, e.1 - m0.1);
            if d.0 < 0 || d.1 < 0 || d.0 + d.1 > order {
                return Ok(vec![]);
            }
            let momentum = &q.0 * BigRational::from_integer((-e.1).into())
                - &q.1 * BigRational::from_integer((-e.0).into());
            let t = Target {
                exponent: e,
                sigma: l.signum(),
                momentum,
            };
            let mut out = Vec::new();
            tracer.explore(
                &t,
                wide(m0),
                &mut vec![(m0, CoeffPolynomial::one())],
                &mut vec![],
                &mut out,
            );
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(found.into_iter().flatten().collect())
}

/// Sum of the final monomials of all broken lines for `m0` ending at `q`.
pub fn theta_function(d: &ScatteringDiagram, m0: Exponent, q: &Point) -> Result<PointedLaurent> {
    let lines = enumerate_broken_lines(d, m0, q, &BrokenLineQuery::default())?;
    let mut sum = BivariateSeries::zero(None);
    for l in &lines {
        sum.add_term(l.final_exponent(), l.weight().clone());
    }
    PointedLaurent::new(m0, sum)
}

/// A generic endpoint in the first quadrant: `(1, r)` with
/// `r = slope + offset / (den p)` for a large prime `p`.
pub fn generic_endpoint(slope: (i64, i64), offset: i64) -> Point {
    const P: i64 = 1_000_003;
    let (num, den) = slope;
    let r = BigRational::new((num * P + offset).into(), (den * P).into());
    (BigRational::from_integer(1.into()), r)
}

/// Default generic endpoint near the diagonal.
pub fn default_endpoint() -> Point {
    generic_endpoint((1, 1), 1)
}
