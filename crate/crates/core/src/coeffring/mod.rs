//! Exact coefficient arithmetic: polynomials in the `p_{i,j}`, truncated
//! bivariate series, specialization and formal logarithm.

mod poly;
mod ring;
mod series;
mod var;

pub use poly::{p_var, CoeffPolynomial, Monomial, Polynomial, QPolynomial};
pub use ring::Ring;
pub use series::{adic_order, BivariateSeries, Exponent};
pub use var::Var;

use std::collections::BTreeMap;

use num_bigint::BigInt;

/// Binomial coefficient `C(n, k)` as a big integer.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Assignment `p_{1,j} -> C(l1, j) s^j`, `p_{2,j} -> C(l2, j) t^j`.
pub fn binomial_assignment(l1: u32, l2: u32) -> BTreeMap<Var, CoeffPolynomial> {
    let mut out = BTreeMap::new();
    for (side, l, param) in [(1u8, l1, Var::S), (2u8, l2, Var::T)] {
        let pv = CoeffPolynomial::var(param);
        for j in 1..=l {
            out.insert(
                Var::p(side, j),
                pv.pow(j).scale(&binomial(l as u64, j as u64)),
            );
        }
    }
    out
}
