use std::collections::{BTreeMap, HashMap};

use num_traits::One;

use crate::coeffring::{CoeffPolynomial, Exponent, Monomial, Var};
use crate::data::{InitialData, SideFunction};
use crate::error::{Error, Result};
use crate::grading::{compatible_weight_sum, CompatibleRequest};

use super::laurent::{laurent_div, laurent_monomial, Laurent, PointedLaurent};

/// `x[a_1, a_2]`: the generating function of compatible gradings on the
/// maximal Dyck path of size `([a_1]_+, [a_2]_+)`, shifted by `x^{-a}`.
pub fn greedy_element(a1: i64, a2: i64, data: &InitialData) -> Result<PointedLaurent> {
    let req = CompatibleRequest::new(a1.max(0) as usize, a2.max(0) as usize, data.bounds());
    let sums = compatible_weight_sum(&req, data)?;
    let mut out = Laurent::zero(None);
    for ((vert, hor), w) in sums {
        out.add_term((vert as i64 - a1, hor as i64 - a2), w);
    }
    PointedLaurent::new((-a1, -a2), out)
}

/// A seed for the rank-2 recursion: polynomial initial data with invertible
/// leading coefficients.
#[derive(Clone, Debug)]
pub struct ClusterSeed {
    data: InitialData,
    polys: [Vec<CoeffPolynomial>; 4],
    leading: [CoeffPolynomial; 2],
}

fn polynomial_coeffs(f: &SideFunction) -> Result<Vec<CoeffPolynomial>> {
    match f {
        SideFunction::Polynomial(c) => Ok(c.clone()),
        SideFunction::OpenSymbolic { .. } => Err(Error::Precondition(
            "the cluster recursion needs polynomial initial functions".into(),
        )),
    }
}

/// `z^l P(1/z) / p_l`.
fn reversed(c: &[CoeffPolynomial]) -> Result<Vec<CoeffPolynomial>> {
    let lead = c.last().expect("nonempty");
    let inv = lead
        .try_inverse()
        .ok_or_else(|| Error::NotInvertible(lead.to_string()))?;
    Ok(c.iter().rev().map(|x| x * &inv).collect())
}

impl ClusterSeed {
    pub fn new(data: InitialData) -> Result<ClusterSeed> {
        let p1 = polynomial_coeffs(&data.p1)?;
        let p2 = polynomial_coeffs(&data.p2)?;
        if p1.len() < 2 || p2.len() < 2 {
            return Err(Error::Precondition(
                "initial polynomials must be nonconstant".into(),
            ));
        }
        let b1 = reversed(&p1)?;
        let b2 = reversed(&p2)?;
        let leading = [p1.last().unwrap().clone(), p2.last().unwrap().clone()];
        Ok(ClusterSeed {
            data,
            polys: [b2, p1, p2, b1],
            leading,
        })
    }

    pub fn symbolic(l1: u32, l2: u32) -> Result<ClusterSeed> {
        ClusterSeed::new(InitialData::symbolic(l1, l2))
    }

    pub fn data(&self) -> &InitialData {
        &self.data
    }

    /// Exchange polynomial used for `x_{k+1} x_{k-1}`.
    pub fn exchange_polynomial(&self, k: i64) -> &[CoeffPolynomial] {
        &self.polys[k.rem_euclid(4) as usize]
    }

    fn evaluate(&self, k: i64, x: &Laurent) -> Result<Laurent> {
        let c = self.exchange_polynomial(k);
        let mut acc = Laurent::zero(None);
        for coef in c.iter().rev() {
            acc = acc.mul(x)?;
            acc.add_term((0, 0), coef.clone());
        }
        Ok(acc)
    }

    /// Pre-variables `x_k` for `lo <= k <= hi` (the range always includes 1 and 2).
    pub fn pre_variables(&self, lo: i64, hi: i64) -> Result<BTreeMap<i64, Laurent>> {
        let mut xs = BTreeMap::new();
        xs.insert(1, laurent_monomial((1, 0), CoeffPolynomial::one()));
        xs.insert(2, laurent_monomial((0, 1), CoeffPolynomial::one()));
        for k in 2..hi {
            let next = laurent_div(&self.evaluate(k, &xs[&k])?, &xs[&(k - 1)])?;
            xs.insert(k + 1, next);
        }
        for k in (lo + 1..=1).rev() {
            let prev = laurent_div(&self.evaluate(k, &xs[&k])?, &xs[&(k + 1)])?;
            xs.insert(k - 1, prev);
        }
        Ok(xs
            .into_iter()
            .filter(|(k, _)| (lo..=hi).contains(k))
            .collect())
    }

    pub fn pre_variable(&self, k: i64) -> Result<Laurent> {
        let mut xs = self.pre_variables(k.min(1), k.max(2))?;
        Ok(xs.remove(&k).expect("computed"))
    }

    /// `X_k = p_{1,l_1}^{a} p_{2,l_2}^{b} x_k` with lowest-degree coefficient 1.
    pub fn cluster_variable(&self, k: i64) -> Result<ClusterVariable> {
        let pre = self.pre_variable(k)?;
        self.normalize(k, pre)
    }

    pub fn normalize(&self, k: i64, pre: Laurent) -> Result<ClusterVariable> {
        let low = pre
            .terms()
            .map(|(e, _)| e.0 + e.1)
            .min()
            .ok_or_else(|| Error::Normalization(format!("x_{} is zero", k)))?;
        let lows: Vec<(Exponent, &CoeffPolynomial)> = pre
            .terms()
            .filter(|(e, _)| e.0 + e.1 == low)
            .map(|(e, c)| (*e, c))
            .collect();
        if lows.len() != 1 {
            return Err(Error::Normalization(format!(
                "x_{} has {} lowest-degree terms",
                k,
                lows.len()
            )));
        }
        let (point, c) = lows[0];
        let (scale, exps) = self.leading_monomial_exponents(c).ok_or_else(|| {
            Error::Normalization(format!(
                "lowest coefficient {} of x_{} is not a monomial in the leading coefficients",
                c, k
            ))
        })?;
        let normalized = pre.scale(&scale);
        Ok(ClusterVariable {
            k,
            pre,
            normalized: PointedLaurent::new(point, normalized)?,
            leading_exponents: exps,
        })
    }

    /// For `c = p_{1,l_1}^{-a} p_{2,l_2}^{-b}` (up to specialization) returns
    /// `(c^{-1}, (a, b))`.
    fn leading_monomial_exponents(
        &self,
        c: &CoeffPolynomial,
    ) -> Option<(CoeffPolynomial, (i32, i32))> {
        let inv = c.try_inverse()?;
        let (m, coef) = inv.as_single_term()?;
        if !coef.is_one() {
            return None;
        }
        let mut exps = (0, 0);
        let mut rest: Vec<(Var, i32)> = Vec::new();
        for &(v, e) in m.factors() {
            let l1 = self.leading[0].as_single_term().map(|(lm, _)| lm.clone());
            let l2 = self.leading[1].as_single_term().map(|(lm, _)| lm.clone());
            let vm = Monomial::var(v);
            if l1.as_ref() == Some(&vm) {
                exps.0 += e;
            } else if l2.as_ref() == Some(&vm) {
                exps.1 += e;
            } else {
                rest.push((v, e));
            }
        }
        if !rest.is_empty() {
            return None;
        }
        Some((inv, exps))
    }
}

/// A pre-variable together with its normalization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterVariable {
    pub k: i64,
    pub pre: Laurent,
    pub normalized: PointedLaurent,
    /// `(a_k, b_k)` with `X_k = p_{1,l_1}^{a_k} p_{2,l_2}^{b_k} x_k`.
    pub leading_exponents: (i32, i32),
}

/// Greedy elements computed on demand.
pub struct GreedyBasis<'a> {
    data: &'a InitialData,
    cache: HashMap<(i64, i64), PointedLaurent>,
}

impl<'a> GreedyBasis<'a> {
    pub fn new(data: &'a InitialData) -> GreedyBasis<'a> {
        GreedyBasis {
            data,
            cache: HashMap::new(),
        }
    }

    pub fn element(&mut self, a1: i64, a2: i64) -> Result<&PointedLaurent> {
        if !self.cache.contains_key(&(a1, a2)) {
            let g = greedy_element(a1, a2, self.data)?;
            self.cache.insert((a1, a2), g);
        }
        Ok(&self.cache[&(a1, a2)])
    }

    /// Coefficients of `z` in the greedy basis, keyed by `(a_1, a_2)`.
    pub fn expand(&mut self, z: &Laurent) -> Result<BTreeMap<(i64, i64), CoeffPolynomial>> {
        let mut rest = z.truncate(None);
        let mut out = BTreeMap::new();
        let Some((lo, hi)) =
            rest.terms()
                .map(|(e, _)| *e)
                .fold(None, |acc: Option<(Exponent, Exponent)>, e| {
                    Some(match acc {
                        None => (e, e),
                        Some((lo, hi)) => (
                            (lo.0.min(e.0), lo.1.min(e.1)),
                            (hi.0.max(e.0), hi.1.max(e.1)),
                        ),
                    })
                })
        else {
            return Ok(out);
        };
        let limit = 4 * (((hi.0 - lo.0 + 1) * (hi.1 - lo.1 + 1)) as usize) + 16;
        for _ in 0..limit {
            let Some((e, c)) = rest
                .terms()
                .min_by_key(|(e, _)| (e.0 + e.1, e.0))
                .map(|(e, c)| (*e, c.clone()))
            else {
                return Ok(out);
            };
            if e.0 < lo.0 || e.1 < lo.1 || e.0 > hi.0 || e.1 > hi.1 {
                break;
            }
            let g = self.element(-e.0, -e.1)?.value().scale(&c);
            rest = rest.sub(&g)?;
            *out.entry((-e.0, -e.1))
                .or_insert_with(CoeffPolynomial::zero) += &c;
        }
        Err(Error::ExpansionDiverged(limit))
    }
}

/// Greedy-basis coefficients of `z`.
pub fn expand_in_greedy_basis(
    z: &Laurent,
    data: &InitialData,
) -> Result<BTreeMap<(i64, i64), CoeffPolynomial>> {
    GreedyBasis::new(data).expand(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::p_var;
    use crate::scattering::ScatteringDiagram;
    use crate::thetagreedy::{default_endpoint, generic_endpoint, theta_function};

    #[test]
    fn negative_indices_give_monomials() {
        let g = greedy_element(-2, -3, &InitialData::symbolic(2, 2)).unwrap();
        assert_eq!(g.value(), &laurent_monomial((2, 3), CoeffPolynomial::one()));
    }

    #[test]
    fn first_greedy_elements_are_cluster_variables() {
        let seed = ClusterSeed::symbolic(2, 2).unwrap();
        let data = seed.data().clone();
        let x3 = seed.cluster_variable(3).unwrap();
        let x0 = seed.cluster_variable(0).unwrap();
        assert_eq!(greedy_element(1, 0, &data).unwrap(), x3.normalized);
        assert_eq!(greedy_element(0, 1, &data).unwrap(), x0.normalized);
        let mut want = laurent_monomial((-1, 0), CoeffPolynomial::one());
        want.add_term((-1, 1), p_var(2, 1));
        want.add_term((-1, 2), p_var(2, 2));
        assert_eq!(x3.pre, want);
    }

    #[test]
    fn pre_variables_are_positive_laurent() {
        let seed = ClusterSeed::symbolic(3, 1).unwrap();
        for (k, x) in seed.pre_variables(-4, 6).unwrap() {
            assert!(
                x.terms().all(|(_, c)| c.has_natural_coefficients()),
                "x_{k}"
            );
            let n = seed.normalize(k, x).unwrap();
            assert!(
                n.normalized.value().terms().all(|(_, c)| c.is_natural()),
                "X_{k}"
            );
        }
    }

    #[test]
    fn theta_matches_greedy() {
        let data = InitialData::symbolic(2, 2);
        let d = ScatteringDiagram::two_line(&data, 8)
            .unwrap()
            .ks_complete()
            .unwrap();
        for a in [(1, 0), (0, 1), (1, 1), (2, 1), (-1, 2)] {
            let g = greedy_element(a.0, a.1, &data).unwrap();
            for q in [default_endpoint(), generic_endpoint((1, 3), 1)] {
                assert_eq!(theta_function(&d, (-a.0, -a.1), &q).unwrap(), g, "{a:?}");
            }
        }
    }

    #[test]
    fn greedy_element_expands_to_itself() {
        let data = InitialData::symbolic(2, 2);
        let g = greedy_element(1, 1, &data).unwrap();
        let e = expand_in_greedy_basis(g.value(), &data).unwrap();
        assert_eq!(e.len(), 1);
        assert!(e[&(1, 1)].is_one());
    }

    #[test]
    fn open_data_is_not_a_seed() {
        assert!(ClusterSeed::new(InitialData::open()).is_err());
    }
}
