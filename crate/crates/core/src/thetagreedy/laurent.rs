use std::fmt;

use crate::coeffring::{BivariateSeries, CoeffPolynomial, Exponent};
use crate::error::{Error, Result};

/// Exact Laurent polynomial in `x_1 = x`, `x_2 = y` with coefficients in the
/// coefficient ring (inverted `p_{i,j}` allowed).
pub type Laurent = BivariateSeries;

/// `c x_1^{e_1} x_2^{e_2}` as an exact Laurent polynomial.
pub fn laurent_monomial(e: Exponent, c: CoeffPolynomial) -> Laurent {
    BivariateSeries::monomial(None, e, c)
}

/// Per-coordinate minimum and maximum exponents.
fn exponent_box(s: &Laurent) -> Option<(Exponent, Exponent)> {
    let mut it = s.terms().map(|(e, _)| *e);
    let first = it.next()?;
    Some(it.fold((first, first), |(lo, hi), e| {
        (
            (lo.0.min(e.0), lo.1.min(e.1)),
            (hi.0.max(e.0), hi.1.max(e.1)),
        )
    }))
}

/// Exact quotient `num / den` of Laurent polynomials.
pub fn laurent_div(num: &Laurent, den: &Laurent) -> Result<Laurent> {
    let (&le, lc) = den
        .terms()
        .last()
        .ok_or_else(|| Error::NotDivisible("division by zero".into()))?;
    let Some((nlo, nhi)) = exponent_box(num) else {
        return Ok(Laurent::zero(None));
    };
    let (dlo, dhi) = exponent_box(den).expect("nonzero divisor");
    let (qlo, qhi) = (
        (nlo.0 - dlo.0, nlo.1 - dlo.1),
        (nhi.0 - dhi.0, nhi.1 - dhi.1),
    );
    let fail = || Error::NotDivisible(format!("{} by {}", num, den));
    let mut rem = num.truncate(None);
    let mut quot = Laurent::zero(None);
    while let Some((&re, rc)) = rem.terms().last() {
        let qe = (re.0 - le.0, re.1 - le.1);
        if qe.0 < qlo.0 || qe.0 > qhi.0 || qe.1 < qlo.1 || qe.1 > qhi.1 {
            return Err(fail());
        }
        let qc = rc.exact_div(lc).map_err(|_| fail())?;
        let q = laurent_monomial(qe, qc);
        rem = rem.sub(&q.mul(den)?)?;
        quot = quot.add(&q)?;
    }
    Ok(quot)
}

/// A Laurent polynomial with a distinguished monomial of coefficient 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedLaurent {
    point: Exponent,
    value: Laurent,
}

impl PointedLaurent {
    pub fn new(point: Exponent, value: Laurent) -> Result<PointedLaurent> {
        if value.order().is_some() {
            return Err(Error::Precondition(
                "pointed elements are exact Laurent polynomials".into(),
            ));
        }
        let c = value.coefficient(point);
        if !c.is_one() {
            return Err(Error::Normalization(format!(
                "coefficient {} at ({}, {}) is not 1",
                c, point.0, point.1
            )));
        }
        Ok(PointedLaurent { point, value })
    }

    pub fn point(&self) -> Exponent {
        self.point
    }

    pub fn value(&self) -> &Laurent {
        &self.value
    }

    pub fn into_value(self) -> Laurent {
        self.value
    }

    /// True if every other exponent is componentwise at least the point.
    pub fn is_minimally_pointed(&self) -> bool {
        self.value
            .terms()
            .all(|(e, _)| e.0 >= self.point.0 && e.1 >= self.point.1)
    }
}

impl fmt::Display for PointedLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::p_var;

    #[test]
    fn divides_exactly() {
        let a = Laurent::from_terms(
            None,
            [((-1, 0), p_var(1, 1)), ((0, 2), CoeffPolynomial::one())],
        );
        let b = Laurent::from_terms(
            None,
            [((1, 1), CoeffPolynomial::one()), ((0, -1), p_var(2, 1))],
        );
        let prod = a.mul(&b).unwrap();
        assert_eq!(laurent_div(&prod, &b).unwrap(), a);
        assert_eq!(laurent_div(&prod, &a).unwrap(), b);
        assert!(laurent_div(&a, &b).is_err());
    }

    #[test]
    fn pointed_needs_unit_coefficient() {
        let a = Laurent::from_terms(None, [((-1, 0), p_var(1, 1))]);
        assert!(PointedLaurent::new((-1, 0), a).is_err());
    }
}
