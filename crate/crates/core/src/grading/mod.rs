//! Gradings on maximal Dyck paths: compatibility, shadows, tightness,
//! the `M_eps` normal form and weighted enumeration.

mod search;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_integer::Integer;

use crate::coeffring::{p_var, CoeffPolynomial};
use crate::data::InitialData;
use crate::dyck::{DyckPath, Edge};
use crate::error::{Error, Result};

pub use search::{
    compatible_weight_sum, enumerate_compatible_gradings, enumerate_tight_gradings,
    tight_weight_sum, CompatibleRequest, OutsideShadow, ValueHistogram,
};

/// Allowed values of a grading on one orientation of edges. Zero is always allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ValueSet {
    UpTo(u32),
    Unbounded,
    Only(BTreeSet<u32>),
}

impl ValueSet {
    pub fn contains(&self, v: u32) -> bool {
        match self {
            ValueSet::UpTo(l) => v <= *l,
            ValueSet::Unbounded => true,
            ValueSet::Only(s) => v == 0 || s.contains(&v),
        }
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self, ValueSet::Unbounded)
    }

    /// Allowed values not exceeding `cap`, ascending.
    pub fn values_up_to(&self, cap: u32) -> Vec<u32> {
        match self {
            ValueSet::UpTo(l) => (0..=cap.min(*l)).collect(),
            ValueSet::Unbounded => (0..=cap).collect(),
            ValueSet::Only(s) => {
                let mut out: Vec<u32> = std::iter::once(0)
                    .chain(s.iter().copied().filter(|&v| v != 0 && v <= cap))
                    .collect();
                out.dedup();
                out
            }
        }
    }

    /// Largest allowed value, if finite.
    pub fn max_value(&self) -> Option<u32> {
        match self {
            ValueSet::UpTo(l) => Some(*l),
            ValueSet::Unbounded => None,
            ValueSet::Only(s) => Some(s.iter().copied().max().unwrap_or(0)),
        }
    }
}

/// Bounds on grading values: vertical values follow `P_1`, horizontal values follow `P_2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradingBounds {
    pub vertical: ValueSet,
    pub horizontal: ValueSet,
}

impl GradingBounds {
    /// Vertical values at most `l1`, horizontal values at most `l2`.
    pub fn new(l1: u32, l2: u32) -> GradingBounds {
        GradingBounds {
            vertical: ValueSet::UpTo(l1),
            horizontal: ValueSet::UpTo(l2),
        }
    }

    pub fn unbounded() -> GradingBounds {
        GradingBounds {
            vertical: ValueSet::Unbounded,
            horizontal: ValueSet::Unbounded,
        }
    }

    pub fn only(vertical: &[u32], horizontal: &[u32]) -> GradingBounds {
        GradingBounds {
            vertical: ValueSet::Only(vertical.iter().copied().collect()),
            horizontal: ValueSet::Only(horizontal.iter().copied().collect()),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.vertical.is_finite() && self.horizontal.is_finite()
    }
}

/// Parameters of a tight-grading problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TightParams {
    pub beta1: u64,
    pub beta2: u64,
    pub epsilon: i8,
    pub m: usize,
    pub n: usize,
}

impl TightParams {
    /// Uses the lexicographically smallest domain from [`m_epsilon`].
    pub fn new(beta1: u64, beta2: u64, epsilon: i8) -> Result<TightParams> {
        let (m, n) = m_epsilon(beta1, beta2, epsilon)?;
        Ok(TightParams {
            beta1,
            beta2,
            epsilon,
            m,
            n,
        })
    }

    /// Explicit domain, validated against the defining constraints.
    pub fn with_domain(
        beta1: u64,
        beta2: u64,
        epsilon: i8,
        m: usize,
        n: usize,
    ) -> Result<TightParams> {
        let p = TightParams {
            beta1,
            beta2,
            epsilon,
            m,
            n,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.beta1 == 0 || self.beta2 == 0 {
            return Err(Error::Precondition("beta must be positive".into()));
        }
        if self.epsilon != 1 && self.epsilon != -1 {
            return Err(Error::Precondition("epsilon must be +1 or -1".into()));
        }
        let g = self.beta1.gcd(&self.beta2) as i128;
        let lhs = self.beta1 as i128 * self.n as i128 - self.beta2 as i128 * self.m as i128;
        if (self.m as u64) < self.beta1
            || (self.n as u64) < self.beta2
            || lhs != self.epsilon as i128 * g
        {
            return Err(Error::Precondition(format!(
                "({}, {}) is not a valid domain for beta = ({}, {}), epsilon = {}",
                self.m, self.n, self.beta1, self.beta2, self.epsilon
            )));
        }
        Ok(())
    }

    /// Valid domains in increasing order, starting from the minimal one.
    pub fn domains(beta1: u64, beta2: u64, epsilon: i8, count: usize) -> Result<Vec<TightParams>> {
        let base = TightParams::new(beta1, beta2, epsilon)?;
        let g = beta1.gcd(&beta2) as usize;
        let (sm, sn) = (beta1 as usize / g, beta2 as usize / g);
        Ok((0..count)
            .map(|t| TightParams {
                m: base.m + t * sm,
                n: base.n + t * sn,
                ..base
            })
            .collect())
    }
}

/// Lexicographically smallest `(m, n)` with `m >= beta1`, `n >= beta2` and
/// `beta1 n - beta2 m = epsilon gcd(beta1, beta2)`.
pub fn m_epsilon(beta1: u64, beta2: u64, epsilon: i8) -> Result<(usize, usize)> {
    if beta1 == 0 || beta2 == 0 {
        return Err(Error::Precondition("beta must be positive".into()));
    }
    if epsilon != 1 && epsilon != -1 {
        return Err(Error::Precondition("epsilon must be +1 or -1".into()));
    }
    let g = beta1.gcd(&beta2) as i128;
    let (a, b) = (beta1 as i128 / g, beta2 as i128 / g);
    // a n - b m = eps; from a x + b y = 1 take n0 = eps x, m0 = -eps y.
    let egcd = a.extended_gcd(&b);
    let eps = epsilon as i128;
    let (n0, m0) = (eps * egcd.x, -eps * egcd.y);
    let ceil_div = |num: i128, den: i128| Integer::div_ceil(&num, &den);
    let t = ceil_div(beta1 as i128 - m0, a).max(ceil_div(beta2 as i128 - n0, b));
    let (m, n) = (m0 + t * a, n0 + t * b);
    debug_assert_eq!(a * n - b * m, eps);
    Ok((m as usize, n as usize))
}

/// Determines whether a horizontal edge at position `iu` and a vertical edge
/// at position `jv` satisfy the balancing condition on the cyclic walk from
/// `iu` to `jv` (both included).
pub(crate) fn pair_compatible(path: &DyckPath, values: &[u32], iu: usize, jv: usize) -> bool {
    if values[iu] == 0 || values[jv] == 0 {
        return true;
    }
    let len = path.len();
    let walk_len = if jv >= iu {
        jv - iu + 1
    } else {
        len - iu + jv + 1
    };
    let at = |k: usize| (iu + k) % len;
    let edges = path.edges();
    // Prefix walk[0..k]: #vertical - weight(horizontal) == 0.
    let mut acc: i64 = 0;
    for k in 1..walk_len {
        let e = &edges[at(k - 1)];
        acc += if e.is_vertical() {
            1
        } else {
            -(values[e.position] as i64)
        };
        if acc == 0 {
            return true;
        }
    }
    // Suffix walk[k..]: #horizontal - weight(vertical) == 0.
    let mut acc: i64 = 0;
    for k in (1..walk_len).rev() {
        let e = &edges[at(k)];
        acc += if e.is_horizontal() {
            1
        } else {
            -(values[e.position] as i64)
        };
        if acc == 0 {
            return true;
        }
    }
    false
}

pub(crate) fn values_compatible(path: &DyckPath, values: &[u32]) -> bool {
    let hs: Vec<usize> = path
        .horizontal_positions()
        .iter()
        .copied()
        .filter(|&p| values[p] > 0)
        .collect();
    path.vertical_positions()
        .iter()
        .filter(|&&p| values[p] > 0)
        .all(|&jv| hs.iter().all(|&iu| pair_compatible(path, values, iu, jv)))
}

/// Local shadow of the vertical edge at `jv`, as positions of horizontal edges.
pub(crate) fn local_shadow_vertical(path: &DyckPath, values: &[u32], jv: usize) -> Vec<usize> {
    let len = path.len();
    let edges = path.edges();
    let (mut hor, mut weight) = (0i64, 0i64);
    for k in 1..=len {
        let e = &edges[(jv + len + 1 - k) % len];
        if e.is_horizontal() {
            hor += 1;
            if hor == weight {
                return (0..k)
                    .map(|t| (jv + len - t) % len)
                    .filter(|&p| edges[p].is_horizontal())
                    .collect::<BTreeSet<_>>()
                    .into_iter()
                    .collect();
            }
        } else {
            weight += values[e.position] as i64;
        }
    }
    path.horizontal_positions().to_vec()
}

/// Local shadow of the horizontal edge at `iu`, as positions of vertical edges.
pub(crate) fn local_shadow_horizontal(path: &DyckPath, values: &[u32], iu: usize) -> Vec<usize> {
    let len = path.len();
    let edges = path.edges();
    let (mut vert, mut weight) = (0i64, 0i64);
    for k in 1..=len {
        let e = &edges[(iu + k - 1) % len];
        if e.is_vertical() {
            vert += 1;
            if vert == weight {
                return (0..k)
                    .map(|t| (iu + t) % len)
                    .filter(|&p| edges[p].is_vertical())
                    .collect::<BTreeSet<_>>()
                    .into_iter()
                    .collect();
            }
        } else {
            weight += values[e.position] as i64;
        }
    }
    path.vertical_positions().to_vec()
}

/// `sh(S_1)` (side 1, vertical positions) or `sh(S_2)` (side 2, horizontal positions).
pub(crate) fn shadow_positions(path: &DyckPath, values: &[u32], side: u8) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    if side == 1 {
        for &p in path.horizontal_positions() {
            if values[p] > 0 {
                out.extend(local_shadow_horizontal(path, values, p));
            }
        }
    } else {
        for &p in path.vertical_positions() {
            if values[p] > 0 {
                out.extend(local_shadow_vertical(path, values, p));
            }
        }
    }
    out
}

/// Whether the epsilon-directed shadow containment holds.
pub(crate) fn shadow_condition(path: &DyckPath, values: &[u32], epsilon: i8) -> bool {
    if epsilon == 1 {
        let sh = shadow_positions(path, values, 2);
        path.horizontal_positions()
            .iter()
            .all(|p| values[*p] == 0 || sh.contains(p))
    } else {
        let sh = shadow_positions(path, values, 1);
        path.vertical_positions()
            .iter()
            .all(|p| values[*p] == 0 || sh.contains(p))
    }
}

/// Weight of the positively graded edges lying outside a shadow.
pub(crate) fn outside_shadow_weight(path: &DyckPath, values: &[u32], which: OutsideShadow) -> u64 {
    match which {
        OutsideShadow::HorizontalOutsideSh2 => {
            let sh = shadow_positions(path, values, 2);
            path.horizontal_positions()
                .iter()
                .filter(|p| !sh.contains(p))
                .map(|&p| values[p] as u64)
                .sum()
        }
        OutsideShadow::VerticalOutsideSh1 => {
            let sh = shadow_positions(path, values, 1);
            path.vertical_positions()
                .iter()
                .filter(|p| !sh.contains(p))
                .map(|&p| values[p] as u64)
                .sum()
        }
    }
}

/// A grading: one nonnegative value per edge of a maximal Dyck path.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Grading {
    path: Arc<DyckPath>,
    values: Vec<u32>,
    horizontal_total: u64,
    vertical_total: u64,
}

impl Grading {
    /// Values are given per edge in path order.
    pub fn new(path: Arc<DyckPath>, values: Vec<u32>) -> Result<Grading> {
        if values.len() != path.len() {
            return Err(Error::Precondition(format!(
                "expected {} values, found {}",
                path.len(),
                values.len()
            )));
        }
        let horizontal_total = path
            .horizontal_positions()
            .iter()
            .map(|&p| values[p] as u64)
            .sum();
        let vertical_total = path
            .vertical_positions()
            .iter()
            .map(|&p| values[p] as u64)
            .sum();
        Ok(Grading {
            path,
            values,
            horizontal_total,
            vertical_total,
        })
    }

    pub fn zero(path: Arc<DyckPath>) -> Grading {
        let len = path.len();
        Grading::new(path, vec![0; len]).expect("length matches")
    }

    /// Builds a grading from `(i, value)` pairs for `u_i` and `(j, value)` for `v_j`.
    pub fn from_labels(
        path: Arc<DyckPath>,
        horizontal: &[(usize, u32)],
        vertical: &[(usize, u32)],
    ) -> Result<Grading> {
        let mut values = vec![0; path.len()];
        for &(i, val) in horizontal {
            if i == 0 || i > path.m() {
                return Err(Error::EdgeNotOnPath);
            }
            values[path.u(i).position] = val;
        }
        for &(j, val) in vertical {
            if j == 0 || j > path.n() {
                return Err(Error::EdgeNotOnPath);
            }
            values[path.v(j).position] = val;
        }
        Grading::new(path, values)
    }

    pub fn path(&self) -> &DyckPath {
        &self.path
    }

    pub fn shared_path(&self) -> Arc<DyckPath> {
        self.path.clone()
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn value(&self, e: &Edge) -> u32 {
        self.values[e.position]
    }

    /// Values of `u_1..u_m`.
    pub fn horizontal_values(&self) -> Vec<u32> {
        self.path
            .horizontal_positions()
            .iter()
            .map(|&p| self.values[p])
            .collect()
    }

    /// Values of `v_1..v_n`.
    pub fn vertical_values(&self) -> Vec<u32> {
        self.path
            .vertical_positions()
            .iter()
            .map(|&p| self.values[p])
            .collect()
    }

    /// `omega(E_1)`.
    pub fn horizontal_total(&self) -> u64 {
        self.horizontal_total
    }

    /// `omega(E_2)`.
    pub fn vertical_total(&self) -> u64 {
        self.vertical_total
    }

    pub fn is_compatible(&self) -> bool {
        values_compatible(&self.path, &self.values)
    }

    /// Local shadow of a positively graded edge.
    pub fn local_shadow(&self, e: &Edge) -> Result<Vec<Edge>> {
        if self.path.edges().get(e.position) != Some(e) {
            return Err(Error::EdgeNotOnPath);
        }
        if self.values[e.position] == 0 {
            return Err(Error::Precondition(
                "local shadow requires a positive value".into(),
            ));
        }
        let positions = if e.is_vertical() {
            local_shadow_vertical(&self.path, &self.values, e.position)
        } else {
            local_shadow_horizontal(&self.path, &self.values, e.position)
        };
        Ok(positions.into_iter().map(|p| *self.path.edge(p)).collect())
    }

    /// `sh(S_1)` for side 1 (vertical edges), `sh(S_2)` for side 2 (horizontal edges).
    pub fn shadow(&self, side: u8) -> Vec<Edge> {
        shadow_positions(&self.path, &self.values, side)
            .into_iter()
            .map(|p| *self.path.edge(p))
            .collect()
    }

    /// `S_1` (side 1, horizontal) or `S_2` (side 2, vertical): positively graded edges.
    pub fn support(&self, side: u8) -> Vec<Edge> {
        self.path
            .edges()
            .iter()
            .filter(|e| self.values[e.position] > 0 && (e.is_horizontal() == (side == 1)))
            .copied()
            .collect()
    }

    pub fn outside_shadow_weight(&self, which: OutsideShadow) -> u64 {
        outside_shadow_weight(&self.path, &self.values, which)
    }

    pub fn is_tight(&self, params: &TightParams) -> Result<bool> {
        params.validate()?;
        if self.path.m() != params.m || self.path.n() != params.n {
            return Err(Error::Precondition(
                "grading does not live on the domain of the parameters".into(),
            ));
        }
        Ok(self.horizontal_total == params.beta2
            && self.vertical_total == params.beta1
            && self.is_compatible()
            && shadow_condition(&self.path, &self.values, params.epsilon))
    }

    /// `prod p_{2, omega(u_i)} prod p_{1, omega(v_j)}`.
    pub fn weight(&self) -> CoeffPolynomial {
        let mut acc = CoeffPolynomial::one();
        for e in self.path.edges() {
            let side = if e.is_horizontal() { 2 } else { 1 };
            acc = &acc * &p_var(side, self.values[e.position]);
        }
        acc
    }

    /// Weight under explicit initial functions (horizontal edges use `P_2`).
    pub fn weight_with(&self, data: &InitialData) -> CoeffPolynomial {
        let mut acc = CoeffPolynomial::one();
        for e in self.path.edges() {
            let f = if e.is_horizontal() {
                &data.p2
            } else {
                &data.p1
            };
            let v = self.values[e.position];
            if v > 0 {
                acc = &acc * &f.coeff(v);
            }
            if acc.is_zero() {
                break;
            }
        }
        acc
    }

    /// Labelled nonzero values, e.g. `u1=2 v3=3`.
    pub fn describe(&self) -> String {
        self.path
            .edges()
            .iter()
            .filter(|e| self.values[e.position] > 0)
            .map(|e| format!("{}={}", e.label(), self.values[e.position]))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Weight `prod c_j^{count_j}` of every grading with the given value histogram.
pub(crate) fn histogram_weight(
    hist: &ValueHistogram,
    data: &InitialData,
    cache: &mut BTreeMap<(u8, u32, u32), CoeffPolynomial>,
) -> CoeffPolynomial {
    let mut acc = CoeffPolynomial::one();
    for (side, counts) in [(2u8, &hist.horizontal), (1u8, &hist.vertical)] {
        for (j, &c) in counts.iter().enumerate() {
            if j == 0 || c == 0 {
                continue;
            }
            let key = (side, j as u32, c);
            let term = cache
                .entry(key)
                .or_insert_with(|| data.side(side).coeff(j as u32).pow(c))
                .clone();
            acc = &acc * &term;
            if acc.is_zero() {
                return acc;
            }
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(es: &[Edge]) -> String {
        es.iter().map(Edge::label).collect::<Vec<_>>().join(",")
    }

    fn omega(m: usize) -> Grading {
        Grading::from_labels(
            Arc::new(DyckPath::maximal(m, 4)),
            &[(1, 2), (2, 2)],
            &[(3, 3), (4, 3)],
        )
        .unwrap()
    }

    #[test]
    fn compatibility_examples() {
        assert!(!omega(6).is_compatible());
        assert!(omega(7).is_compatible());
        assert!(omega(8).is_compatible());
        for (m, n) in [(0, 0), (3, 1), (7, 4), (5, 5)] {
            assert!(Grading::zero(Arc::new(DyckPath::maximal(m, n))).is_compatible());
        }
    }

    #[test]
    fn shadow_examples() {
        let g = omega(7);
        let p = g.path().clone();
        assert_eq!(labels(&g.local_shadow(p.v(3)).unwrap()), "u4,u5,u6");
        assert_eq!(
            labels(&g.local_shadow(p.v(4)).unwrap()),
            "u2,u3,u4,u5,u6,u7"
        );
        assert_eq!(labels(&g.shadow(2)), "u2,u3,u4,u5,u6,u7");
        assert_eq!(labels(&g.shadow(1)), "v1,v2,v3,v4");
        let z = Grading::zero(Arc::new(DyckPath::maximal(7, 4)));
        assert!(z.shadow(2).is_empty());
        assert!(z.local_shadow(p.v(1)).is_err());
    }

    #[test]
    fn m_epsilon_examples() {
        for k in 1..6 {
            assert_eq!(
                m_epsilon(2 * k, k, -1).unwrap(),
                (2 * k as usize + 1, k as usize)
            );
        }
        assert_eq!(m_epsilon(12, 8, -1).unwrap(), (14, 9));
        assert_eq!(m_epsilon(1, 1, 1).unwrap(), (1, 2));
    }

    #[test]
    fn m_epsilon_is_minimal() {
        for b1 in 1..8u64 {
            for b2 in 1..8u64 {
                for eps in [-1i8, 1] {
                    let (m, n) = m_epsilon(b1, b2, eps).unwrap();
                    let g = b1.gcd(&b2) as i64;
                    let mut best = None;
                    'outer: for mm in b1 as i64..60 {
                        for nn in b2 as i64..60 {
                            if b1 as i64 * nn - b2 as i64 * mm == eps as i64 * g {
                                best = Some((mm as usize, nn as usize));
                                break 'outer;
                            }
                        }
                    }
                    assert_eq!(Some((m, n)), best, "beta = ({b1},{b2}) eps = {eps}");
                }
            }
        }
    }

    #[test]
    fn tight_examples() {
        let g =
            Grading::from_labels(Arc::new(DyckPath::maximal(3, 1)), &[(1, 1)], &[(1, 2)]).unwrap();
        let params = TightParams::with_domain(2, 1, -1, 3, 1).unwrap();
        assert!(g.is_tight(&params).unwrap());
        assert_eq!(g.weight(), &p_var(1, 2) * &p_var(2, 1));

        let g = Grading::from_labels(
            Arc::new(DyckPath::maximal(5, 2)),
            &[(1, 1), (2, 1)],
            &[(1, 1), (2, 3)],
        )
        .unwrap();
        let params = TightParams::with_domain(4, 2, -1, 5, 2).unwrap();
        assert!(g.is_tight(&params).unwrap());
        assert_eq!(
            g.weight(),
            &(&p_var(1, 1) * &p_var(1, 3)) * &p_var(2, 1).pow(2)
        );

        let g = Grading::from_labels(
            Arc::new(DyckPath::maximal(7, 3)),
            &[(1, 1), (2, 1), (3, 1)],
            &[(2, 3), (3, 3)],
        )
        .unwrap();
        let params = TightParams::with_domain(6, 3, -1, 7, 3).unwrap();
        assert!(g.is_tight(&params).unwrap());
        assert_eq!(g.weight(), &p_var(1, 3).pow(2) * &p_var(2, 1).pow(3));

        assert!(TightParams::with_domain(6, 4, -1, 7, 4).is_err());
        assert!(omega(7)
            .is_tight(&TightParams {
                beta1: 6,
                beta2: 4,
                epsilon: -1,
                m: 7,
                n: 4
            })
            .is_err());
    }

    #[test]
    fn zero_weight_is_one() {
        assert!(Grading::zero(Arc::new(DyckPath::maximal(4, 3)))
            .weight()
            .is_one());
    }
}
