//! Initial wall-function data `P_1(x)` and `P_2(y)`.

use std::collections::{BTreeMap, BTreeSet};

use crate::coeffring::{binomial, p_var, CoeffPolynomial, Var};
use crate::error::{Error, Result};
use crate::grading::{GradingBounds, ValueSet};

/// Coefficients of one initial function `1 + c_1 z + c_2 z^2 + ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SideFunction {
    /// Finitely many coefficients, `coeffs[0] == 1`.
    Polynomial(Vec<CoeffPolynomial>),
    /// The formal power series `1 + sum_j p_{side,j} z^j`.
    OpenSymbolic { side: u8 },
}

impl SideFunction {
    /// `1 + p_{side,1} z + ... + p_{side,l} z^l`.
    pub fn symbolic(side: u8, l: u32) -> SideFunction {
        SideFunction::Polynomial((0..=l).map(|j| p_var(side, j)).collect())
    }

    pub fn open(side: u8) -> SideFunction {
        SideFunction::OpenSymbolic { side }
    }

    /// `1 + z^l`.
    pub fn cluster(l: u32) -> SideFunction {
        let mut c = vec![CoeffPolynomial::zero(); l as usize + 1];
        c[0] = CoeffPolynomial::one();
        c[l as usize] += &CoeffPolynomial::one();
        SideFunction::Polynomial(c)
    }

    /// `(1 + param z)^l`.
    pub fn binomial(l: u32, param: Var) -> SideFunction {
        let pv = CoeffPolynomial::var(param);
        SideFunction::Polynomial(
            (0..=l)
                .map(|j| pv.pow(j).scale(&binomial(l as u64, j as u64)))
                .collect(),
        )
    }

    /// Validates `coeffs[0] == 1` and strips trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<CoeffPolynomial>) -> Result<SideFunction> {
        let c0 = coeffs.first().cloned().unwrap_or_default();
        if !c0.is_one() {
            return Err(Error::ConstantTermNotOne(c0.to_string()));
        }
        while coeffs.len() > 1 && coeffs.last().is_some_and(CoeffPolynomial::is_zero) {
            coeffs.pop();
        }
        Ok(SideFunction::Polynomial(coeffs))
    }

    pub fn coeff(&self, j: u32) -> CoeffPolynomial {
        match self {
            SideFunction::Polynomial(c) => c.get(j as usize).cloned().unwrap_or_default(),
            SideFunction::OpenSymbolic { side } => p_var(*side, j),
        }
    }

    /// Degree of a polynomial function, `None` for the open series.
    pub fn degree(&self) -> Option<u32> {
        match self {
            SideFunction::Polynomial(c) => Some(c.len().saturating_sub(1) as u32),
            SideFunction::OpenSymbolic { .. } => None,
        }
    }

    /// Leading coefficient of a polynomial function.
    pub fn leading_coeff(&self) -> Option<CoeffPolynomial> {
        self.degree().map(|d| self.coeff(d))
    }

    /// Grading values with a nonzero coefficient.
    pub fn value_set(&self) -> ValueSet {
        match self {
            SideFunction::Polynomial(c) => {
                let nonzero: BTreeSet<u32> = c
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(j, _)| j as u32)
                    .collect();
                let l = c.len() as u32 - 1;
                if nonzero.len() == c.len() {
                    ValueSet::UpTo(l)
                } else {
                    ValueSet::Only(nonzero)
                }
            }
            SideFunction::OpenSymbolic { .. } => ValueSet::Unbounded,
        }
    }

    /// Coefficients `c_0..=c_max` as a vector.
    pub fn coeffs_up_to(&self, max: u32) -> Vec<CoeffPolynomial> {
        (0..=max).map(|j| self.coeff(j)).collect()
    }

    pub fn specialize(&self, assignment: &BTreeMap<Var, CoeffPolynomial>) -> Result<SideFunction> {
        match self {
            SideFunction::Polynomial(c) => SideFunction::from_coeffs(
                c.iter()
                    .map(|p| p.substitute(assignment))
                    .collect::<Result<Vec<_>>>()?,
            ),
            SideFunction::OpenSymbolic { .. } => Err(Error::Precondition(
                "cannot specialize an open power series".into(),
            )),
        }
    }
}

/// Pair of initial functions: `P_1` on the x-axis, `P_2` on the y-axis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InitialData {
    pub p1: SideFunction,
    pub p2: SideFunction,
}

impl InitialData {
    pub fn new(p1: SideFunction, p2: SideFunction) -> InitialData {
        InitialData { p1, p2 }
    }

    /// Fully symbolic polynomials of degrees `(l1, l2)`.
    pub fn symbolic(l1: u32, l2: u32) -> InitialData {
        InitialData::new(SideFunction::symbolic(1, l1), SideFunction::symbolic(2, l2))
    }

    /// Open symbolic power series on both sides.
    pub fn open() -> InitialData {
        InitialData::new(SideFunction::open(1), SideFunction::open(2))
    }

    /// `P_1 = 1 + x^l1`, `P_2 = 1 + y^l2`.
    pub fn cluster(l1: u32, l2: u32) -> InitialData {
        InitialData::new(SideFunction::cluster(l1), SideFunction::cluster(l2))
    }

    /// `P_1 = (1 + s x)^l1`, `P_2 = (1 + t y)^l2`.
    pub fn binomial(l1: u32, l2: u32) -> InitialData {
        InitialData::new(
            SideFunction::binomial(l1, Var::S),
            SideFunction::binomial(l2, Var::T),
        )
    }

    pub fn side(&self, side: u8) -> &SideFunction {
        if side == 1 {
            &self.p1
        } else {
            &self.p2
        }
    }

    /// Vertical values follow `P_1`, horizontal values follow `P_2`.
    pub fn bounds(&self) -> GradingBounds {
        GradingBounds {
            vertical: self.p1.value_set(),
            horizontal: self.p2.value_set(),
        }
    }

    pub fn specialize(&self, assignment: &BTreeMap<Var, CoeffPolynomial>) -> Result<InitialData> {
        Ok(InitialData::new(
            self.p1.specialize(assignment)?,
            self.p2.specialize(assignment)?,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_sets() {
        assert_eq!(SideFunction::symbolic(1, 3).value_set(), ValueSet::UpTo(3));
        assert_eq!(
            SideFunction::cluster(3).value_set(),
            ValueSet::Only([0, 3].into_iter().collect())
        );
        assert_eq!(SideFunction::open(2).value_set(), ValueSet::Unbounded);
    }

    #[test]
    fn rejects_bad_constant() {
        assert!(SideFunction::from_coeffs(vec![CoeffPolynomial::from_i64(2)]).is_err());
    }

    #[test]
    fn binomial_coefficients() {
        let f = SideFunction::binomial(3, Var::S);
        let s = CoeffPolynomial::var(Var::S);
        assert_eq!(f.coeff(2), s.pow(2).scale(&3.into()));
        assert_eq!(f.degree(), Some(3));
    }
}
