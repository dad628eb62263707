use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::poly::Polynomial;
use super::ring::Ring;
use crate::error::{Error, Result};

/// Exponent of `x^a y^b`.
pub type Exponent = (i64, i64);

/// Truncated bivariate Laurent series in `x, y` with polynomial coefficients.
///
/// With `order = Some(K)` every term `x^a y^b` with `a, b >= 0` and `a + b > K`
/// is discarded. Terms with a negative exponent are never truncated. With
/// `order = None` the value is an exact Laurent polynomial.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BivariateSeries<R: Ring = BigInt> {
    order: Option<u32>,
    terms: BTreeMap<Exponent, Polynomial<R>>,
}

/// m-adic order of an exponent, `None` when it has a negative component.
pub fn adic_order(e: Exponent) -> Option<i64> {
    (e.0 >= 0 && e.1 >= 0).then_some(e.0 + e.1)
}

impl<R: Ring> BivariateSeries<R> {
    pub fn zero(order: Option<u32>) -> Self {
        BivariateSeries {
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(order: Option<u32>) -> Self {
        BivariateSeries::monomial(order, (0, 0), Polynomial::one())
    }

    pub fn monomial(order: Option<u32>, e: Exponent, c: Polynomial<R>) -> Self {
        let mut s = BivariateSeries::zero(order);
        s.add_term(e, c);
        s
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponent, Polynomial<R>)>>(
        order: Option<u32>,
        iter: I,
    ) -> Self {
        let mut s = BivariateSeries::zero(order);
        for (e, c) in iter {
            s.add_term(e, c);
        }
        s
    }

    pub fn order(&self) -> Option<u32> {
        self.order
    }

    pub fn keeps(&self, e: Exponent) -> bool {
        match (self.order, adic_order(e)) {
            (Some(k), Some(d)) => d <= k as i64,
            _ => true,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&(0, 0)).is_some_and(Polynomial::is_one)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Polynomial<R>)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: Exponent) -> Polynomial<R> {
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    pub fn coefficient_ref(&self, e: Exponent) -> Option<&Polynomial<R>> {
        self.terms.get(&e)
    }

    pub fn constant_term(&self) -> Polynomial<R> {
        self.coefficient((0, 0))
    }

    pub fn add_term(&mut self, e: Exponent, c: Polynomial<R>) {
        if c.is_zero() || !self.keeps(e) {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Re-truncates at a (smaller) order bound.
    pub fn truncate(&self, order: Option<u32>) -> Self {
        BivariateSeries::from_terms(order, self.terms.iter().map(|(e, c)| (*e, c.clone())))
    }

    /// Terms of m-adic order exactly `k`.
    pub fn terms_of_order(&self, k: i64) -> Vec<(Exponent, &Polynomial<R>)> {
        self.terms
            .iter()
            .filter(|(e, _)| adic_order(**e) == Some(k))
            .map(|(e, c)| (*e, c))
            .collect()
    }

    /// Smallest m-adic order of a nonconstant term.
    pub fn min_positive_order(&self) -> Option<i64> {
        self.terms
            .keys()
            .filter_map(|&e| adic_order(e))
            .filter(|&d| d > 0)
            .min()
    }

    fn check_orders(&self, other: &Self) -> Result<()> {
        if self.order != other.order {
            return Err(Error::OrderMismatch {
                lhs: self.order,
                rhs: other.order,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_orders(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_orders(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, -c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        BivariateSeries {
            order: self.order,
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Polynomial<R>) -> Self {
        BivariateSeries::from_terms(self.order, self.terms.iter().map(|(e, v)| (*e, v * c)))
    }

    /// Multiplies by `x^e`, truncating afterwards.
    pub fn shift(&self, e: Exponent) -> Self {
        BivariateSeries::from_terms(
            self.order,
            self.terms
                .iter()
                .map(|(f, c)| ((f.0 + e.0, f.1 + e.1), c.clone())),
        )
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_orders(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let mut out = BivariateSeries::zero(self.order);
        if self.is_one() {
            return other.truncate(self.order);
        }
        if other.is_one() {
            return self.clone();
        }
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = (ea.0 + eb.0, ea.1 + eb.1);
                if out.keeps(e) {
                    out.add_term(e, ca * cb);
                }
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut result = BivariateSeries::one(self.order);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul_unchecked(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        result
    }

    /// Requires a truncated series with nonnegative exponents and constant term 1.
    fn unit_part(&self) -> Result<Self> {
        if self.order.is_none() {
            return Err(Error::Precondition(
                "series inverse and log need an order bound".into(),
            ));
        }
        if !self.terms.keys().all(|&e| adic_order(e).is_some()) {
            return Err(Error::Precondition(
                "series inverse and log need nonnegative exponents".into(),
            ));
        }
        if !self.constant_term().is_one() {
            return Err(Error::ConstantTermNotOne(self.constant_term().to_string()));
        }
        let mut u = self.clone();
        u.terms.remove(&(0, 0));
        Ok(u)
    }

    /// Inverse of a series with constant term 1.
    pub fn inverse(&self) -> Result<Self> {
        let u = self.unit_part()?;
        let k = self.order.unwrap_or(0);
        let neg_u = u.neg();
        let mut result = BivariateSeries::one(self.order);
        let mut power = BivariateSeries::one(self.order);
        for _ in 0..k {
            power = power.mul_unchecked(&neg_u);
            if power.is_zero() {
                break;
            }
            result = result.add(&power)?;
        }
        Ok(result)
    }

    /// Integer power, negative exponents through [`BivariateSeries::inverse`].
    pub fn powi(&self, k: i64) -> Result<Self> {
        if k >= 0 {
            Ok(self.pow(k as u32))
        } else {
            Ok(self.inverse()?.pow((-k) as u32))
        }
    }

    pub fn map_coeffs<S: Ring, F: Fn(&Polynomial<R>) -> Polynomial<S>>(
        &self,
        f: F,
    ) -> BivariateSeries<S> {
        BivariateSeries::from_terms(self.order, self.terms.iter().map(|(e, c)| (*e, f(c))))
    }

    pub fn try_map_coeffs<S: Ring, F: Fn(&Polynomial<R>) -> Result<Polynomial<S>>>(
        &self,
        f: F,
    ) -> Result<BivariateSeries<S>> {
        let mut out = BivariateSeries::zero(self.order);
        for (e, c) in &self.terms {
            out.add_term(*e, f(c)?);
        }
        Ok(out)
    }
}

impl BivariateSeries<BigInt> {
    pub fn to_rational(&self) -> BivariateSeries<BigRational> {
        self.map_coeffs(|c| c.to_rational())
    }

    /// Formal logarithm; the constant term must be 1.
    pub fn log(&self) -> Result<BivariateSeries<BigRational>> {
        self.to_rational().log()
    }
}

impl BivariateSeries<BigRational> {
    /// Formal logarithm `sum_{r>=1} (-1)^{r+1} u^r / r` where `self = 1 + u`.
    pub fn log(&self) -> Result<BivariateSeries<BigRational>> {
        let u = self.unit_part()?;
        let k = self.order.unwrap_or(0);
        let mut result = BivariateSeries::zero(self.order);
        let mut power = BivariateSeries::one(self.order);
        for r in 1..=k as i64 {
            power = power.mul_unchecked(&u);
            if power.is_zero() {
                break;
            }
            let sign = if r % 2 == 1 { 1 } else { -1 };
            let factor = Polynomial::constant(BigRational::new(sign.into(), r.into()));
            result = result.add(&power.scale(&factor))?;
        }
        Ok(result)
    }
}

fn fmt_exponent(f: &mut fmt::Formatter<'_>, e: Exponent) -> fmt::Result {
    let mut parts = Vec::new();
    for (name, k) in [("x", e.0), ("y", e.1)] {
        match k {
            0 => {}
            1 => parts.push(name.to_string()),
            _ => parts.push(format!("{name}^{k}")),
        }
    }
    f.write_str(&parts.join("*"))
}

impl<R: Ring> fmt::Display for BivariateSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut entries: Vec<_> = self.terms.iter().collect();
        entries.sort_by_key(|(e, _)| (e.0 + e.1, e.0, e.1));
        for (i, (&e, c)) in entries.into_iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if e == (0, 0) {
                write!(f, "({c})")?;
            } else if c.is_one() {
                fmt_exponent(f, e)?;
            } else {
                write!(f, "({c})*")?;
                fmt_exponent(f, e)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::poly::{p_var, CoeffPolynomial};
    use crate::coeffring::var::Var;

    fn mono(k: u32, e: Exponent) -> BivariateSeries {
        BivariateSeries::monomial(Some(k), e, CoeffPolynomial::one())
    }

    #[test]
    fn square_truncated() {
        let s = BivariateSeries::one(Some(2)).add(&mono(2, (1, 1))).unwrap();
        let sq = s.mul(&s).unwrap();
        let want = BivariateSeries::one(Some(2))
            .add(&mono(2, (1, 1)).scale(&CoeffPolynomial::from_i64(2)))
            .unwrap();
        assert_eq!(sq, want);
    }

    #[test]
    fn identity_and_expansion() {
        let s = BivariateSeries::one(Some(2)).add(&mono(2, (1, 1))).unwrap();
        assert_eq!(s.mul(&BivariateSeries::one(Some(2))).unwrap(), s);
        let a = BivariateSeries::from_terms(
            Some(2),
            [((0, 0), CoeffPolynomial::one()), ((1, 0), p_var(1, 1))],
        );
        let b = BivariateSeries::from_terms(
            Some(2),
            [((0, 0), CoeffPolynomial::one()), ((0, 1), p_var(2, 1))],
        );
        let prod = a.mul(&b).unwrap();
        assert_eq!(prod.len(), 4);
        assert_eq!(prod.coefficient((1, 1)), &p_var(1, 1) * &p_var(2, 1));
    }

    #[test]
    fn mismatched_orders() {
        assert!(matches!(
            mono(2, (1, 0)).mul(&mono(3, (0, 1))),
            Err(Error::OrderMismatch { .. })
        ));
    }

    #[test]
    fn log_of_one_plus_u() {
        let st = &CoeffPolynomial::var(Var::S) * &CoeffPolynomial::var(Var::T);
        let s = BivariateSeries::from_terms(
            Some(6),
            [((0, 0), CoeffPolynomial::one()), ((1, 1), st.clone())],
        );
        let log = s.log().unwrap();
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        let st_q = st.to_rational();
        assert_eq!(log.coefficient((1, 1)), st_q);
        assert_eq!(log.coefficient((2, 2)), st_q.pow(2).scale(&q(-1, 2)));
        assert_eq!(log.coefficient((3, 3)), st_q.pow(3).scale(&q(1, 3)));
        assert_eq!(log.len(), 3);
        assert!(BivariateSeries::<BigInt>::one(Some(4))
            .log()
            .unwrap()
            .is_zero());
    }

    #[test]
    fn log_rejects_bad_constant() {
        let s = BivariateSeries::monomial(Some(3), (0, 0), CoeffPolynomial::from_i64(2));
        assert!(matches!(s.log(), Err(Error::ConstantTermNotOne(_))));
    }

    #[test]
    fn inverse_roundtrip() {
        let s = BivariateSeries::from_terms(
            Some(5),
            [
                ((0, 0), CoeffPolynomial::one()),
                ((1, 0), p_var(1, 1)),
                ((0, 2), p_var(2, 2)),
            ],
        );
        let inv = s.inverse().unwrap();
        assert!(s.mul(&inv).unwrap().is_one());
    }
}
