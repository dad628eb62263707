//! Invariants read off from the logarithm of binomially specialized ray functions.

use num_rational::BigRational;
use num_traits::Zero;

use crate::coeffring::{binomial_assignment, Monomial, Var};
use crate::data::InitialData;
use crate::error::{Error, Result};
use crate::scattering::{wall_function_tight, WallFunction};

/// `N_k` for `k = 1..` along one ray.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GwTable {
    pub l1: u32,
    pub l2: u32,
    pub direction: (i64, i64),
    pub order: u32,
    /// `(k, N_k)`.
    pub rows: Vec<(u32, BigRational)>,
}

/// Reads `N_k = [s^{ka} t^{kb} x^{ka} y^{kb}] log f / k` from a ray function
/// whose coefficients are polynomials in `s`, `t`.
pub fn gw_from_wall(l1: u32, l2: u32, f: &WallFunction) -> Result<GwTable> {
    let (a, b) = f.direction();
    let log = f.to_series().log()?;
    let kmax = f.max_power();
    let mut rows = Vec::new();
    for k in 1..=kmax {
        let ki = k as i64;
        let c = log.coefficient((ki * a, ki * b));
        let want = Monomial::from_factors([(Var::S, (ki * a) as i32), (Var::T, (ki * b) as i32)]);
        let value = c.coefficient(&want);
        if c.terms().any(|(m, _)| *m != want) {
            return Err(Error::Inconsistent(format!(
                "log coefficient {} at k = {} is not a multiple of s^{} t^{}",
                c,
                k,
                ki * a,
                ki * b
            )));
        }
        let n = if value.is_zero() {
            value
        } else {
            value / BigRational::from_integer(k.into())
        };
        rows.push((k, n));
    }
    Ok(GwTable {
        l1,
        l2,
        direction: (a, b),
        order: f.order(),
        rows,
    })
}

/// Builds the ray function for `P_1 = (1 + s x)^{l1}`, `P_2 = (1 + t y)^{l2}`
/// from tight gradings and extracts the invariants.
pub fn gw_extract(l1: u32, l2: u32, a: i64, b: i64, order: u32) -> Result<GwTable> {
    let f = wall_function_tight(a, b, &InitialData::binomial(l1, l2), order, 1)?;
    gw_from_wall(l1, l2, &f)
}

/// Same, specializing the symbolic ray function after the fact.
pub fn gw_extract_via_symbolic(l1: u32, l2: u32, a: i64, b: i64, order: u32) -> Result<GwTable> {
    let f = wall_function_tight(a, b, &InitialData::symbolic(l1, l2), order, 1)?;
    let assignment = binomial_assignment(l1, l2);
    let g = f.try_map(|c| c.specialize(&assignment))?;
    gw_from_wall(l1, l2, &g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn pentagon_invariants() {
        let t = gw_extract(1, 1, 1, 1, 6).unwrap();
        assert_eq!(t.rows[0], (1, q(1, 1)));
        assert_eq!(t.rows[1], (2, q(-1, 4)));
        assert_eq!(t.rows[2], (3, q(1, 9)));
        assert_eq!(t, gw_extract_via_symbolic(1, 1, 1, 1, 6).unwrap());
    }

    #[test]
    fn trivial_side_gives_zero() {
        let t = gw_extract(2, 0, 1, 1, 6).unwrap();
        assert!(t.rows.iter().all(|(_, n)| n.is_zero()));
    }

    #[test]
    fn matches_symbolic_route() {
        for (l1, l2, a, b) in [(2, 2, 1, 1), (3, 1, 2, 1), (2, 3, 1, 2)] {
            assert_eq!(
                gw_extract(l1, l2, a, b, 9).unwrap(),
                gw_extract_via_symbolic(l1, l2, a, b, 9).unwrap()
            );
        }
    }

    #[test]
    fn rejects_boundary() {
        assert!(gw_extract(1, 1, 1, 0, 6).is_err());
    }
}
