use std::collections::hash_map::Entry;
use std::collections::HashMap;

use crate::coeffring::{BivariateSeries, CoeffPolynomial, Exponent};
use crate::error::{Error, Result};

use super::wallfn::WallFunction;

/// Primitive normal `n` to the wall with `n . v < 0` for travel direction `v`.
pub fn crossing_normal(direction: Exponent, v: Exponent) -> Result<Exponent> {
    let n = (-direction.1, direction.0);
    let s = n.0 * v.0 + n.1 * v.1;
    match s.signum() {
        -1 => Ok(n),
        1 => Ok((-n.0, -n.1)),
        _ => Err(Error::Precondition(format!(
            "travel direction ({}, {}) is parallel to the wall ({}, {})",
            v.0, v.1, direction.0, direction.1
        ))),
    }
}

/// Multiplies a series by a univariate series `sum_j c_j z^j`, `z = x^w`.
fn mul_univariate(s: &BivariateSeries, coeffs: &[CoeffPolynomial], w: Exponent) -> BivariateSeries {
    if coeffs.len() == 1 && coeffs[0].is_one() {
        return s.clone();
    }
    let mut out = BivariateSeries::zero(s.order());
    for (e, c) in s.terms() {
        for (j, d) in coeffs.iter().enumerate() {
            if d.is_zero() {
                continue;
            }
            let j = j as i64;
            let ee = (e.0 + j * w.0, e.1 + j * w.1);
            if !out.keeps(ee) {
                break;
            }
            out.add_term(ee, c * d);
        }
    }
    out
}

/// Truncation length in `z` for a series of the given order.
fn power_len(order: Option<u32>, f: &WallFunction) -> usize {
    let w = f.direction();
    let cap = order.unwrap_or(f.order()).min(f.order());
    (cap as i64 / (w.0 + w.1)) as usize
}

/// Monomial-wise image `x^m -> x^m f^{n . m}`.
pub(crate) fn apply_monomialwise(
    f: &WallFunction,
    n: Exponent,
    s: &BivariateSeries,
    cache: &mut HashMap<i64, Vec<CoeffPolynomial>>,
) -> BivariateSeries {
    let w = f.direction();
    let len = power_len(s.order(), f);
    let mut out = BivariateSeries::zero(s.order());
    for (e, c) in s.terms() {
        let k = n.0 * e.0 + n.1 * e.1;
        if k == 0 {
            out.add_term(*e, c.clone());
            continue;
        }
        let pw = cache.entry(k).or_insert_with(|| f.power_coeffs_to(k, len));
        for (j, d) in pw.iter().enumerate() {
            if d.is_zero() {
                continue;
            }
            let j = j as i64;
            let ee = (e.0 + j * w.0, e.1 + j * w.1);
            if !out.keeps(ee) {
                break;
            }
            out.add_term(ee, c * d);
        }
    }
    out
}

/// Wall-crossing image of `s` when travelling in direction `v` across the wall of `f`.
pub fn apply_crossing(
    f: &WallFunction,
    v: Exponent,
    s: &BivariateSeries,
) -> Result<BivariateSeries> {
    let n = crossing_normal(f.direction(), v)?;
    Ok(apply_monomialwise(f, n, s, &mut HashMap::new()))
}

/// Automorphism `x -> x u_x`, `y -> y u_y` modulo the order-`K` ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallAutomorphism {
    order: u32,
    ux: BivariateSeries,
    uy: BivariateSeries,
}

impl WallAutomorphism {
    pub fn identity(order: u32) -> WallAutomorphism {
        WallAutomorphism {
            order,
            ux: BivariateSeries::one(Some(order)),
            uy: BivariateSeries::one(Some(order)),
        }
    }

    /// A single crossing of the wall of `f` with primitive normal `n`.
    pub fn crossing(f: &WallFunction, n: Exponent, order: u32) -> WallAutomorphism {
        WallAutomorphism::identity(order).then_crossing(f, n)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// `u_x`, the unit with image of `x` equal to `x u_x`.
    pub fn unit_x(&self) -> &BivariateSeries {
        &self.ux
    }

    pub fn unit_y(&self) -> &BivariateSeries {
        &self.uy
    }

    /// `x u_x`, truncated at order `K + 1`.
    pub fn image_x(&self) -> BivariateSeries {
        self.ux.truncate(Some(self.order + 1)).shift((1, 0))
    }

    /// `y u_y`, truncated at order `K + 1`.
    pub fn image_y(&self) -> BivariateSeries {
        self.uy.truncate(Some(self.order + 1)).shift((0, 1))
    }

    pub fn is_identity(&self) -> bool {
        self.ux.is_one() && self.uy.is_one()
    }

    /// `theta o self`, where `theta` crosses the wall of `f` with normal `n`.
    pub fn then_crossing(&self, f: &WallFunction, n: Exponent) -> WallAutomorphism {
        let mut cache = HashMap::new();
        let len = power_len(Some(self.order), f);
        let prefactor = |k: i64, cache: &mut HashMap<i64, Vec<CoeffPolynomial>>| {
            cache
                .entry(k)
                .or_insert_with(|| f.power_coeffs_to(k, len))
                .clone()
        };
        let tx = apply_monomialwise(f, n, &self.ux, &mut cache);
        let ty = apply_monomialwise(f, n, &self.uy, &mut cache);
        let ux = mul_univariate(&tx, &prefactor(n.0, &mut cache), f.direction());
        let uy = mul_univariate(&ty, &prefactor(n.1, &mut cache), f.direction());
        WallAutomorphism {
            order: self.order,
            ux,
            uy,
        }
    }

    /// Image of an arbitrary series: `x^a y^b -> x^a y^b u_x^a u_y^b`.
    pub fn apply(&self, s: &BivariateSeries) -> Result<BivariateSeries> {
        let order = Some(self.order);
        let ux = self.ux.truncate(order);
        let uy = self.uy.truncate(order);
        let mut px: HashMap<i64, BivariateSeries> = HashMap::new();
        let mut py: HashMap<i64, BivariateSeries> = HashMap::new();
        let mut out = BivariateSeries::zero(order);
        for (e, c) in s.terms() {
            if let Entry::Vacant(v) = px.entry(e.0) {
                v.insert(ux.powi(e.0)?);
            }
            if let Entry::Vacant(v) = py.entry(e.1) {
                v.insert(uy.powi(e.1)?);
            }
            let unit = px[&e.0].mul(&py[&e.1])?;
            let term = BivariateSeries::monomial(order, *e, c.clone());
            out = out.add(&term.mul(&unit)?)?;
        }
        Ok(out)
    }

    /// `other o self`.
    pub fn then(&self, other: &WallAutomorphism) -> Result<WallAutomorphism> {
        if self.order != other.order {
            return Err(Error::OrderMismatch {
                lhs: Some(self.order),
                rhs: Some(other.order),
            });
        }
        // other(x u_x) = x other.u_x other(u_x).
        Ok(WallAutomorphism {
            order: self.order,
            ux: other.ux.mul(&other.apply(&self.ux)?)?,
            uy: other.uy.mul(&other.apply(&self.uy)?)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::p_var;

    fn line_x() -> WallFunction {
        WallFunction::new(
            (1, 0),
            4,
            vec![CoeffPolynomial::one(), p_var(1, 1), p_var(1, 2)],
        )
        .unwrap()
    }

    fn series(order: u32, terms: &[(Exponent, CoeffPolynomial)]) -> BivariateSeries {
        BivariateSeries::from_terms(Some(order), terms.iter().cloned())
    }

    #[test]
    fn crossing_x_axis_on_y() {
        let f = line_x();
        let y = series(4, &[((0, 1), CoeffPolynomial::one())]);
        let up = apply_crossing(&f, (0, 1), &y).unwrap();
        let down = apply_crossing(&f, (0, -1), &y).unwrap();
        assert_eq!(down, f.to_series().shift((0, 1)).truncate(Some(4)));
        let inv = f.to_series().inverse().unwrap().shift((0, 1));
        assert_eq!(up, inv);
    }

    #[test]
    fn orthogonal_exponent_is_fixed() {
        let f = line_x();
        let x = series(4, &[((1, 0), p_var(2, 1))]);
        assert_eq!(apply_crossing(&f, (0, 1), &x).unwrap(), x);
    }

    #[test]
    fn recrossing_is_identity() {
        let f = WallFunction::new((1, 1), 6, vec![CoeffPolynomial::one(), p_var(1, 1)]).unwrap();
        let s = series(
            6,
            &[
                ((0, 0), CoeffPolynomial::one()),
                ((1, 0), p_var(2, 1)),
                ((0, 2), p_var(1, 2)),
                ((2, 1), p_var(2, 2)),
            ],
        );
        let once = apply_crossing(&f, (1, -1), &s).unwrap();
        let back = apply_crossing(&f, (-1, 1), &once).unwrap();
        assert_eq!(back, s);
        assert!(apply_crossing(&f, (2, 2), &s).is_err());
        let a = WallAutomorphism::crossing(&f, (1, -1), 6);
        let b = WallAutomorphism::crossing(&f, (-1, 1), 6);
        assert!(a.then(&b).unwrap().is_identity());
        assert!(a.then_crossing(&f, (-1, 1)).is_identity());
    }
}
