use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::ring::Ring;
use super::var::Var;
use crate::error::{Error, Result};

/// A Laurent monomial in the coefficient variables.
///
/// Ordered first by weighted degree, then lexicographically on the sorted
/// factor list, which makes the order compatible with multiplication.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Monomial {
    degree: i64,
    factors: Vec<(Var, i32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: Var) -> Self {
        Monomial::var_pow(v, 1)
    }

    pub fn var_pow(v: Var, e: i32) -> Self {
        if e == 0 {
            return Monomial::one();
        }
        Monomial {
            degree: v.weight() * e as i64,
            factors: vec![(v, e)],
        }
    }

    /// Builds a monomial from arbitrary (possibly repeated) factors.
    pub fn from_factors<I: IntoIterator<Item = (Var, i32)>>(factors: I) -> Self {
        let mut acc: BTreeMap<Var, i32> = BTreeMap::new();
        for (v, e) in factors {
            *acc.entry(v).or_insert(0) += e;
        }
        let factors: Vec<(Var, i32)> = acc.into_iter().filter(|&(_, e)| e != 0).collect();
        let degree = factors.iter().map(|&(v, e)| v.weight() * e as i64).sum();
        Monomial { degree, factors }
    }

    pub fn factors(&self) -> &[(Var, i32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// Weighted degree `sum j * exponent(p_{i,j})`.
    pub fn degree(&self) -> i64 {
        self.degree
    }

    /// Weighted degree restricted to the variables of one side.
    pub fn side_degree(&self, side: u8) -> i64 {
        self.factors
            .iter()
            .filter(|(v, _)| v.side() == Some(side))
            .map(|&(v, e)| v.weight() * e as i64)
            .sum()
    }

    pub fn exponent(&self, v: Var) -> i32 {
        self.factors
            .iter()
            .find(|(w, _)| *w == v)
            .map_or(0, |&(_, e)| e)
    }

    pub fn has_negative_exponent(&self) -> bool {
        self.factors.iter().any(|&(_, e)| e < 0)
    }

    pub fn inverse(&self) -> Self {
        Monomial {
            degree: -self.degree,
            factors: self.factors.iter().map(|&(v, e)| (v, -e)).collect(),
        }
    }

    pub fn pow(&self, k: i32) -> Self {
        if k == 0 {
            return Monomial::one();
        }
        Monomial {
            degree: self.degree * k as i64,
            factors: self.factors.iter().map(|&(v, e)| (v, e * k)).collect(),
        }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        if other.factors.is_empty() {
            return self.clone();
        }
        if self.factors.is_empty() {
            return other.clone();
        }
        let mut out = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() && j < other.factors.len() {
            let (a, ea) = self.factors[i];
            let (b, eb) = other.factors[j];
            match a.cmp(&b) {
                std::cmp::Ordering::Less => {
                    out.push((a, ea));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((b, eb));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    if ea + eb != 0 {
                        out.push((a, ea + eb));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.factors[i..]);
        out.extend_from_slice(&other.factors[j..]);
        Monomial {
            degree: self.degree + other.degree,
            factors: out,
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (i, (v, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse Laurent polynomial in the coefficient variables over `R`.
///
/// Zero coefficients are never stored, so equality is structural.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial<R: Ring> {
    terms: BTreeMap<Monomial, R>,
}

/// Integral coefficient polynomial, the workhorse of the engine.
pub type CoeffPolynomial = Polynomial<BigInt>;
/// Rational coefficient polynomial (formal logarithms only).
pub type QPolynomial = Polynomial<BigRational>;

impl<R: Ring> Default for Polynomial<R> {
    fn default() -> Self {
        Polynomial::zero()
    }
}

impl<R: Ring> Polynomial<R> {
    pub fn zero() -> Self {
        Polynomial {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Polynomial::constant(R::one())
    }

    pub fn constant(c: R) -> Self {
        Polynomial::term(Monomial::one(), c)
    }

    pub fn from_i64(c: i64) -> Self {
        Polynomial::constant(R::from_i64(c))
    }

    pub fn var(v: Var) -> Self {
        Polynomial::term(Monomial::var(v), R::one())
    }

    pub fn term(m: Monomial, c: R) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, R)>>(iter: I) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical (ascending) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &R)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> R {
        self.terms.get(m).cloned().unwrap_or_else(R::zero)
    }

    pub fn constant_term(&self) -> R {
        self.coefficient(&Monomial::one())
    }

    /// Leading term in the canonical order.
    pub fn leading_term(&self) -> Option<(&Monomial, &R)> {
        self.terms.iter().next_back()
    }

    /// Returns the single term if the polynomial is a monomial times a scalar.
    pub fn as_single_term(&self) -> Option<(&Monomial, &R)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: R) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Adds `c * m * other` to `self`.
    pub fn add_scaled(&mut self, other: &Polynomial<R>, m: &Monomial, c: &R) {
        for (om, oc) in &other.terms {
            self.add_term(om.mul(m), oc.clone() * c.clone());
        }
    }

    pub fn scale(&self, c: &R) -> Self {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v.clone() * c.clone()))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.mul(m), v.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut result = Polynomial::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Multiplicative inverse, available only for a unit times a monomial.
    pub fn try_inverse(&self) -> Option<Self> {
        let (m, c) = self.as_single_term()?;
        Some(Polynomial::term(m.inverse(), c.try_inverse()?))
    }

    /// True if every term is homogeneous of the given weighted degree.
    pub fn is_homogeneous(&self, degree: i64) -> bool {
        self.terms.keys().all(|m| m.degree() == degree)
    }

    /// Weighted degrees of the side-1 and side-2 variables, if all terms agree.
    pub fn side_degrees(&self) -> Option<(i64, i64)> {
        let mut it = self
            .terms
            .keys()
            .map(|m| (m.side_degree(1), m.side_degree(2)));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn variables(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self
            .terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|&(v, _)| v))
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn has_negative_exponent(&self) -> bool {
        self.terms.keys().any(Monomial::has_negative_exponent)
    }

    /// Membership in `N[p_{i,j}]`: natural coefficients, no inverted variables.
    pub fn is_natural(&self) -> bool {
        self.terms
            .iter()
            .all(|(m, c)| c.is_natural() && !m.has_negative_exponent())
    }

    /// Natural coefficients, allowing negative exponents.
    pub fn has_natural_coefficients(&self) -> bool {
        self.terms.values().all(Ring::is_natural)
    }

    pub fn map_coeffs<S: Ring, F: Fn(&R) -> S>(&self, f: F) -> Polynomial<S> {
        Polynomial::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Divides every coefficient by an integer; `None` if not exact.
    pub fn div_exact_int(&self, d: i64) -> Option<Self> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            terms.insert(m.clone(), c.div_exact_int(d)?);
        }
        Some(Polynomial { terms })
    }

    /// Ring homomorphism sending each variable to its image.
    ///
    /// Every variable occurring in `self` must be assigned. Negative exponents
    /// require the image to be invertible.
    pub fn specialize(&self, assignment: &BTreeMap<Var, Polynomial<R>>) -> Result<Self> {
        self.substitute_impl(assignment, true)
    }

    /// Like [`Polynomial::specialize`] but leaves unassigned variables alone.
    pub fn substitute(&self, assignment: &BTreeMap<Var, Polynomial<R>>) -> Result<Self> {
        self.substitute_impl(assignment, false)
    }

    fn substitute_impl(
        &self,
        assignment: &BTreeMap<Var, Polynomial<R>>,
        strict: bool,
    ) -> Result<Self> {
        let mut cache: HashMap<(Var, i32), Polynomial<R>> = HashMap::new();
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut acc = Polynomial::constant(c.clone());
            let mut kept: Vec<(Var, i32)> = Vec::new();
            for &(v, e) in m.factors() {
                let Some(image) = assignment.get(&v) else {
                    if strict {
                        return Err(Error::MissingAssignment(v.to_string()));
                    }
                    kept.push((v, e));
                    continue;
                };
                let power = match cache.get(&(v, e)) {
                    Some(p) => p.clone(),
                    None => {
                        let p = if e >= 0 {
                            image.pow(e as u32)
                        } else {
                            image
                                .try_inverse()
                                .ok_or_else(|| Error::NotInvertible(format!("image of {v}")))?
                                .pow((-e) as u32)
                        };
                        cache.insert((v, e), p.clone());
                        p
                    }
                };
                acc = &acc * &power;
            }
            if !kept.is_empty() {
                acc = acc.mul_monomial(&Monomial::from_factors(kept));
            }
            out += &acc;
        }
        Ok(out)
    }

    /// Exact division, failing loudly when `other` does not divide `self`.
    pub fn exact_div(&self, other: &Polynomial<R>) -> Result<Self> {
        let (lm, lc) = other
            .leading_term()
            .ok_or_else(|| Error::NotDivisible("division by zero polynomial".into()))?;
        let lm_inv = lm.inverse();
        let min_degree = match (self.terms.keys().next(), other.terms.keys().next()) {
            (Some(a), Some(b)) => a.degree() - b.degree(),
            _ => return Ok(Polynomial::zero()),
        };
        let mut rem = self.clone();
        let mut quot = Polynomial::zero();
        // Per-variable exponent ranges of the quotient (Newton polytopes add).
        let (a_lo, a_hi) = self.exponent_ranges();
        let (b_lo, b_hi) = other.exponent_ranges();
        let mut vars: Vec<Var> = a_lo.keys().chain(b_lo.keys()).copied().collect();
        vars.sort();
        vars.dedup();
        let range = |v: &Var| {
            let get = |m: &BTreeMap<Var, i32>| m.get(v).copied().unwrap_or(0);
            (get(&a_lo) - get(&b_lo), get(&a_hi) - get(&b_hi))
        };
        let bounds: Vec<(Var, (i32, i32))> = vars.iter().map(|v| (*v, range(v))).collect();
        while let Some((rm, rc)) = rem.leading_term() {
            let qm = rm.mul(&lm_inv);
            let in_box = bounds.iter().all(|(v, (lo, hi))| {
                let e = qm.exponent(*v);
                *lo <= e && e <= *hi
            }) && qm.factors().iter().all(|(v, _)| vars.contains(v));
            if qm.degree() < min_degree || !in_box {
                return Err(Error::NotDivisible(format!("{self} by {other}")));
            }
            let qc = rc
                .div_exact(lc)
                .ok_or_else(|| Error::NotDivisible(format!("{self} by {other}")))?;
            let neg = -qc.clone();
            rem.add_scaled(other, &qm, &neg);
            quot.add_term(qm, qc);
        }
        Ok(quot)
    }
}

impl<R: Ring> Polynomial<R> {
    /// Minimum and maximum exponent of each occurring variable (absent counts as 0).
    fn exponent_ranges(&self) -> (BTreeMap<Var, i32>, BTreeMap<Var, i32>) {
        let vars = self.variables();
        let mut lo = BTreeMap::new();
        let mut hi = BTreeMap::new();
        for v in vars {
            let exps = self.terms.keys().map(|m| m.exponent(v));
            lo.insert(v, exps.clone().min().unwrap_or(0));
            hi.insert(v, exps.max().unwrap_or(0));
        }
        (lo, hi)
    }
}

impl CoeffPolynomial {
    pub fn to_rational(&self) -> QPolynomial {
        self.map_coeffs(|c| BigRational::from_integer(c.clone()))
    }
}

impl<R: Ring> fmt::Display for Polynomial<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let cs = c.to_string();
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, cs),
            };
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else if neg {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if m.is_one() {
                f.write_str(&mag)?;
            } else if mag == "1" {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

impl<R: Ring> AddAssign<&Polynomial<R>> for Polynomial<R> {
    fn add_assign(&mut self, rhs: &Polynomial<R>) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl<R: Ring> SubAssign<&Polynomial<R>> for Polynomial<R> {
    fn sub_assign(&mut self, rhs: &Polynomial<R>) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl<R: Ring> Add for &Polynomial<R> {
    type Output = Polynomial<R>;
    fn add(self, rhs: &Polynomial<R>) -> Polynomial<R> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<R: Ring> Sub for &Polynomial<R> {
    type Output = Polynomial<R>;
    fn sub(self, rhs: &Polynomial<R>) -> Polynomial<R> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<R: Ring> Mul for &Polynomial<R> {
    type Output = Polynomial<R>;
    fn mul(self, rhs: &Polynomial<R>) -> Polynomial<R> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        if rhs.is_one() {
            return self.clone();
        }
        if self.is_one() {
            return rhs.clone();
        }
        let mut out = Polynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<R: Ring> Neg for &Polynomial<R> {
    type Output = Polynomial<R>;
    fn neg(self) -> Polynomial<R> {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl<R: Ring> $tr for Polynomial<R> {
            type Output = Polynomial<R>;
            fn $method(self, rhs: Polynomial<R>) -> Polynomial<R> {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<R: Ring> Neg for Polynomial<R> {
    type Output = Polynomial<R>;
    fn neg(self) -> Polynomial<R> {
        -&self
    }
}

impl<R: Ring> Zero for Polynomial<R> {
    fn zero() -> Self {
        Polynomial::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<R: Ring> One for Polynomial<R> {
    fn one() -> Self {
        Polynomial::one()
    }
}

/// `p_{side,degree}` as a polynomial, with `p_{i,0} = 1`.
pub fn p_var(side: u8, degree: u32) -> CoeffPolynomial {
    if degree == 0 {
        CoeffPolynomial::one()
    } else {
        CoeffPolynomial::var(Var::p(side, degree))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(i: u8, j: u32) -> CoeffPolynomial {
        p_var(i, j)
    }

    #[test]
    fn additive_identity() {
        let a = &p(1, 2) * &p(2, 1);
        assert_eq!(&a + &CoeffPolynomial::zero(), a);
    }

    #[test]
    fn free_multiplication() {
        let prod = &p(1, 1) * &p(1, 3);
        let (m, c) = prod.as_single_term().unwrap();
        assert!(c.is_one());
        assert_eq!(m.exponent(Var::p(1, 1)), 1);
        assert_eq!(m.exponent(Var::p(1, 3)), 1);
        assert_eq!(m.degree(), 4);
    }

    #[test]
    fn difference_of_squares() {
        let one = CoeffPolynomial::one();
        let lhs = &(&one + &p(1, 1)) * &(&one - &p(1, 1));
        let rhs = &one - &p(1, 1).pow(2);
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.to_string(), "1 - p[1,1]^2");
    }

    #[test]
    fn specialize_binomial_substitution() {
        let poly = &p(1, 2) * &p(2, 1);
        let mut assign = BTreeMap::new();
        let s = CoeffPolynomial::var(Var::S);
        let t = CoeffPolynomial::var(Var::T);
        assign.insert(Var::p(1, 2), s.pow(2).scale(&BigInt::from(3)));
        assign.insert(Var::p(2, 1), t.clone());
        let got = poly.specialize(&assign).unwrap();
        assert_eq!(got, &s.pow(2).scale(&BigInt::from(3)) * &t);
    }

    #[test]
    fn specialize_to_one() {
        let poly = &p(1, 3).pow(2) * &p(2, 1).pow(3);
        let mut assign = BTreeMap::new();
        assign.insert(Var::p(1, 3), CoeffPolynomial::one());
        assign.insert(Var::p(2, 1), CoeffPolynomial::one());
        assert!(poly.specialize(&assign).unwrap().is_one());
    }

    #[test]
    fn specialize_identity_and_missing() {
        let poly = &(&p(1, 1) * &p(2, 2)) + &CoeffPolynomial::from_i64(5);
        let mut id = BTreeMap::new();
        for v in poly.variables() {
            id.insert(v, CoeffPolynomial::var(v));
        }
        assert_eq!(poly.specialize(&id).unwrap(), poly);
        let mut partial = BTreeMap::new();
        partial.insert(Var::p(1, 1), CoeffPolynomial::one());
        assert!(matches!(
            poly.specialize(&partial),
            Err(Error::MissingAssignment(_))
        ));
        assert_eq!(
            poly.substitute(&partial).unwrap(),
            &p(2, 2) + &CoeffPolynomial::from_i64(5)
        );
    }

    #[test]
    fn exact_division_and_failure() {
        let a = &(&p(1, 1) + &p(2, 1)) * &(&p(1, 2) - &CoeffPolynomial::from_i64(3));
        let q = a.exact_div(&(&p(1, 1) + &p(2, 1))).unwrap();
        assert_eq!(q, &p(1, 2) - &CoeffPolynomial::from_i64(3));
        assert!(p(1, 1).exact_div(&(&p(1, 1) + &p(2, 1))).is_err());
        let inv = p(1, 3).try_inverse().unwrap();
        assert!(inv.has_negative_exponent());
        assert!((&inv * &p(1, 3)).is_one());
    }

    #[test]
    fn weighted_degrees() {
        let m = &p(1, 1) * &(&p(1, 3) * &p(2, 1).pow(2));
        assert_eq!(m.side_degrees(), Some((4, 2)));
        assert!(m.is_homogeneous(6));
    }
}
