use std::fmt;

use num_integer::Integer;

use crate::coeffring::{BivariateSeries, CoeffPolynomial, Exponent};
use crate::error::{Error, Result};

/// Product of univariate series, keeping powers up to `len`.
pub(crate) fn uni_mul(
    a: &[CoeffPolynomial],
    b: &[CoeffPolynomial],
    len: usize,
) -> Vec<CoeffPolynomial> {
    let mut out = vec![CoeffPolynomial::zero(); len + 1];
    for (i, ai) in a.iter().enumerate().take(len + 1) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(len + 1 - i) {
            if !bj.is_zero() {
                out[i + j] += &(ai * bj);
            }
        }
    }
    out
}

/// Inverse of a univariate series with constant term 1.
pub(crate) fn uni_inverse(a: &[CoeffPolynomial], len: usize) -> Vec<CoeffPolynomial> {
    let mut out = vec![CoeffPolynomial::zero(); len + 1];
    out[0] = CoeffPolynomial::one();
    for k in 1..=len {
        let mut acc = CoeffPolynomial::zero();
        for j in 1..=k.min(a.len().saturating_sub(1)) {
            if !a[j].is_zero() && !out[k - j].is_zero() {
                acc += &(&a[j] * &out[k - j]);
            }
        }
        out[k] = -acc;
    }
    out
}

/// `primitive((a, b))`, with the gcd.
pub fn primitive(e: Exponent) -> (Exponent, i64) {
    let g = e.0.gcd(&e.1);
    if g == 0 {
        (e, 0)
    } else {
        ((e.0 / g, e.1 / g), g)
    }
}

/// A wall-function `1 + sum_k c_k z^k` in the single monomial `z = x^a y^b`,
/// truncated at m-adic order `K` (so `k (a + b) <= K`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallFunction {
    direction: Exponent,
    order: u32,
    coeffs: Vec<CoeffPolynomial>,
}

impl WallFunction {
    /// `direction` must be a primitive vector with nonnegative entries.
    pub fn new(
        direction: Exponent,
        order: u32,
        coeffs: Vec<CoeffPolynomial>,
    ) -> Result<WallFunction> {
        let (prim, g) = primitive(direction);
        if g != 1 || direction.0 < 0 || direction.1 < 0 {
            return Err(Error::InvalidDirection(direction.0, direction.1));
        }
        debug_assert_eq!(prim, direction);
        let first = coeffs.first().cloned().unwrap_or_else(CoeffPolynomial::one);
        if !first.is_one() {
            return Err(Error::ConstantTermNotOne(first.to_string()));
        }
        let mut w = WallFunction {
            direction,
            order,
            coeffs,
        };
        w.normalize();
        Ok(w)
    }

    pub fn one(direction: Exponent, order: u32) -> Result<WallFunction> {
        WallFunction::new(direction, order, vec![CoeffPolynomial::one()])
    }

    fn normalize(&mut self) {
        let len = self.max_power() as usize;
        if self.coeffs.is_empty() {
            self.coeffs.push(CoeffPolynomial::one());
        }
        self.coeffs.truncate(len + 1);
        while self.coeffs.len() > 1 && self.coeffs.last().is_some_and(CoeffPolynomial::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn direction(&self) -> Exponent {
        self.direction
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Largest `k` with `k (a + b) <= K`.
    pub fn max_power(&self) -> u32 {
        let w = (self.direction.0 + self.direction.1) as u32;
        self.order / w
    }

    /// Coefficient of `z^k`.
    pub fn coeff(&self, k: u32) -> CoeffPolynomial {
        self.coeffs.get(k as usize).cloned().unwrap_or_default()
    }

    /// `c_0 ..= c_last` with trailing zeros removed.
    pub fn coeffs(&self) -> &[CoeffPolynomial] {
        &self.coeffs
    }

    pub fn is_trivial(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Adds `c z^k`; `k > 0`.
    pub fn add_to_coeff(&mut self, k: u32, c: &CoeffPolynomial) {
        assert!(k > 0, "the constant term of a wall-function is fixed");
        if k > self.max_power() {
            return;
        }
        if self.coeffs.len() <= k as usize {
            self.coeffs.resize(k as usize + 1, CoeffPolynomial::zero());
        }
        self.coeffs[k as usize] += c;
        self.normalize();
    }

    /// `f^e` as a coefficient vector in `z`, truncated at [`WallFunction::max_power`].
    pub fn power_coeffs(&self, e: i64) -> Vec<CoeffPolynomial> {
        self.power_coeffs_to(e, self.max_power() as usize)
    }

    /// `f^e` truncated at `z^len`. Powers beyond [`WallFunction::max_power`]
    /// only see the stored coefficients.
    pub fn power_coeffs_to(&self, e: i64, len: usize) -> Vec<CoeffPolynomial> {
        let base = if e >= 0 {
            self.coeffs.clone()
        } else {
            uni_inverse(&self.coeffs, len)
        };
        let mut out = vec![CoeffPolynomial::one()];
        let mut base = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                out = uni_mul(&out, &base, len);
            }
            k >>= 1;
            if k > 0 {
                base = uni_mul(&base, &base, len);
            }
        }
        out
    }

    /// As a bivariate series in `x, y`.
    pub fn to_series(&self) -> BivariateSeries {
        BivariateSeries::from_terms(
            Some(self.order),
            self.coeffs.iter().enumerate().map(|(k, c)| {
                let k = k as i64;
                ((k * self.direction.0, k * self.direction.1), c.clone())
            }),
        )
    }

    /// Truncates to a smaller order.
    pub fn with_order(&self, order: u32) -> WallFunction {
        let mut w = WallFunction {
            direction: self.direction,
            order,
            coeffs: self.coeffs.clone(),
        };
        w.normalize();
        w
    }

    /// Applies a coefficient map to every `c_k`, `k >= 1`.
    pub fn try_map(
        &self,
        f: impl Fn(&CoeffPolynomial) -> Result<CoeffPolynomial>,
    ) -> Result<WallFunction> {
        let mut coeffs = vec![CoeffPolynomial::one()];
        for c in &self.coeffs[1..] {
            coeffs.push(f(c)?);
        }
        WallFunction::new(self.direction, self.order, coeffs)
    }

    /// Every coefficient lies in `N[p_{i,j}]`.
    pub fn is_positive(&self) -> bool {
        self.coeffs.iter().all(CoeffPolynomial::is_natural)
    }
}

impl fmt::Display for WallFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_series())
    }
}
