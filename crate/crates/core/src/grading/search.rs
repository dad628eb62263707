//! Depth-first enumeration of compatible and tight gradings.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use super::{
    histogram_weight, outside_shadow_weight, pair_compatible, shadow_condition, Grading,
    GradingBounds, TightParams,
};
use crate::coeffring::CoeffPolynomial;
use crate::data::InitialData;
use crate::dyck::DyckPath;
use crate::error::{Error, Result};

/// Which positively graded edges are counted as lying outside a shadow.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OutsideShadow {
    /// Horizontal weight outside `sh(S_2)`.
    HorizontalOutsideSh2,
    /// Vertical weight outside `sh(S_1)`.
    VerticalOutsideSh1,
}

/// Number of edges carrying each value, per orientation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ValueHistogram {
    pub horizontal: Vec<u32>,
    pub vertical: Vec<u32>,
}

impl ValueHistogram {
    fn of(path: &DyckPath, values: &[u32]) -> ValueHistogram {
        let mut h = ValueHistogram {
            horizontal: Vec::new(),
            vertical: Vec::new(),
        };
        for e in path.edges() {
            let v = values[e.position] as usize;
            let slot = if e.is_horizontal() {
                &mut h.horizontal
            } else {
                &mut h.vertical
            };
            if slot.len() <= v {
                slot.resize(v + 1, 0);
            }
            slot[v] += 1;
        }
        h
    }

    /// `(omega(E_2), omega(E_1))`.
    pub fn totals(&self) -> (u64, u64) {
        let sum = |c: &[u32]| {
            c.iter()
                .enumerate()
                .map(|(j, &k)| j as u64 * k as u64)
                .sum()
        };
        (sum(&self.vertical), sum(&self.horizontal))
    }
}

/// Filters for [`enumerate_compatible_gradings`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatibleRequest {
    pub m: usize,
    pub n: usize,
    pub bounds: GradingBounds,
    /// `(omega(E_2), omega(E_1))`, i.e. vertical total then horizontal total.
    pub totals: Option<(u64, u64)>,
    /// Keep only gradings whose outside-shadow weight equals the given value.
    pub outside: Option<(OutsideShadow, u64)>,
}

impl CompatibleRequest {
    pub fn new(m: usize, n: usize, bounds: GradingBounds) -> CompatibleRequest {
        CompatibleRequest {
            m,
            n,
            bounds,
            totals: None,
            outside: None,
        }
    }

    pub fn with_totals(mut self, vertical: u64, horizontal: u64) -> Self {
        self.totals = Some((vertical, horizontal));
        self
    }

    pub fn with_outside(mut self, which: OutsideShadow, t: u64) -> Self {
        self.outside = Some((which, t));
        self
    }
}

#[derive(Clone, Copy)]
enum LeafTest {
    Compatible,
    Tight(i8),
}

struct Search {
    path: Arc<DyckPath>,
    allowed_h: Vec<u32>,
    allowed_v: Vec<u32>,
    /// `(vertical, horizontal)` targets.
    totals: Option<(u64, u64)>,
    reach_h: Vec<Vec<bool>>,
    reach_v: Vec<Vec<bool>>,
    h_after: Vec<usize>,
    v_after: Vec<usize>,
    leaf: LeafTest,
    outside: Option<(OutsideShadow, u64)>,
}

fn reach_table(allowed: &[u32], count: usize, total: u64) -> Vec<Vec<bool>> {
    let t = total as usize;
    let mut table = vec![vec![false; t + 1]; count + 1];
    table[0][0] = true;
    for r in 1..=count {
        for s in 0..=t {
            table[r][s] = allowed
                .iter()
                .any(|&a| (a as usize) <= s && table[r - 1][s - a as usize]);
        }
    }
    table
}

struct State {
    values: Vec<u32>,
    need_h: u64,
    need_v: u64,
}

impl Search {
    fn new(
        m: usize,
        n: usize,
        bounds: &GradingBounds,
        totals: Option<(u64, u64)>,
        leaf: LeafTest,
        outside: Option<(OutsideShadow, u64)>,
    ) -> Result<Search> {
        let path = Arc::new(DyckPath::maximal(m, n));
        let (allowed_v, allowed_h) = match totals {
            Some((tv, th)) => (
                bounds.vertical.values_up_to(tv.min(u32::MAX as u64) as u32),
                bounds
                    .horizontal
                    .values_up_to(th.min(u32::MAX as u64) as u32),
            ),
            None => {
                let (Some(lv), Some(lh)) =
                    (bounds.vertical.max_value(), bounds.horizontal.max_value())
                else {
                    return Err(Error::InfiniteEnumeration);
                };
                (
                    bounds.vertical.values_up_to(lv),
                    bounds.horizontal.values_up_to(lh),
                )
            }
        };
        let (reach_v, reach_h) = match totals {
            Some((tv, th)) => (
                reach_table(&allowed_v, n, tv),
                reach_table(&allowed_h, m, th),
            ),
            None => (Vec::new(), Vec::new()),
        };
        let len = path.len();
        let mut h_after = vec![0; len + 1];
        let mut v_after = vec![0; len + 1];
        for p in (0..len).rev() {
            let hz = path.edge(p).is_horizontal();
            h_after[p] = h_after[p + 1] + usize::from(hz);
            v_after[p] = v_after[p + 1] + usize::from(!hz);
        }
        Ok(Search {
            path,
            allowed_h,
            allowed_v,
            totals,
            reach_h,
            reach_v,
            h_after,
            v_after,
            leaf,
            outside,
        })
    }

    fn feasible(&self, pos: usize, need_h: u64, need_v: u64) -> bool {
        if self.totals.is_none() {
            return true;
        }
        let ok = |table: &Vec<Vec<bool>>, r: usize, s: u64| {
            table[r].get(s as usize).copied().unwrap_or(false)
        };
        ok(&self.reach_h, self.h_after[pos], need_h) && ok(&self.reach_v, self.v_after[pos], need_v)
    }

    /// Non-wrapping pairs ending at the vertical edge just assigned.
    fn check_new_vertical(&self, values: &[u32], jv: usize) -> bool {
        if values[jv] == 0 {
            return true;
        }
        self.path
            .horizontal_positions()
            .iter()
            .take_while(|&&p| p < jv)
            .all(|&iu| pair_compatible(&self.path, values, iu, jv))
    }

    fn accept_leaf(&self, values: &[u32]) -> bool {
        let path = &*self.path;
        // Pairs whose walk wraps around: horizontal after vertical.
        for &jv in path.vertical_positions() {
            if values[jv] == 0 {
                continue;
            }
            for &iu in path.horizontal_positions().iter().rev() {
                if iu < jv {
                    break;
                }
                if !pair_compatible(path, values, iu, jv) {
                    return false;
                }
            }
        }
        if let LeafTest::Tight(eps) = self.leaf {
            if !shadow_condition(path, values, eps) {
                return false;
            }
        }
        if let Some((which, t)) = self.outside {
            if outside_shadow_weight(path, values, which) != t {
                return false;
            }
        }
        true
    }

    fn dfs(&self, st: &mut State, pos: usize, stop: usize, out: &mut dyn FnMut(&State)) {
        if pos == stop {
            if stop < self.path.len() || self.accept_leaf(&st.values) {
                out(st);
            }
            return;
        }
        let horizontal = self.path.edge(pos).is_horizontal();
        let allowed = if horizontal {
            &self.allowed_h
        } else {
            &self.allowed_v
        };
        for &a in allowed {
            let a64 = a as u64;
            let (nh, nv) = if self.totals.is_some() {
                if horizontal {
                    if a64 > st.need_h {
                        break;
                    }
                    (st.need_h - a64, st.need_v)
                } else {
                    if a64 > st.need_v {
                        break;
                    }
                    (st.need_h, st.need_v - a64)
                }
            } else {
                (0, 0)
            };
            if !self.feasible(pos + 1, nh, nv) {
                continue;
            }
            st.values[pos] = a;
            if !horizontal && !self.check_new_vertical(&st.values, pos) {
                continue;
            }
            let (oh, ov) = (st.need_h, st.need_v);
            st.need_h = nh;
            st.need_v = nv;
            self.dfs(st, pos + 1, stop, out);
            st.need_h = oh;
            st.need_v = ov;
        }
        st.values[pos] = 0;
    }

    fn initial_state(&self) -> State {
        let (need_v, need_h) = self.totals.unwrap_or((0, 0));
        State {
            values: vec![0; self.path.len()],
            need_h,
            need_v,
        }
    }

    /// Runs the search, splitting the tree at a shallow depth across threads.
    /// Results come back in lexicographic order of the value vectors.
    fn run<T, I, V>(&self, init: I, visit: V) -> Vec<T>
    where
        T: Send,
        I: Fn() -> T + Sync,
        V: Fn(&mut T, &[u32]) + Sync,
    {
        let len = self.path.len();
        if !self.feasible(0, self.initial_state().need_h, self.initial_state().need_v) {
            return Vec::new();
        }
        let mut depth = 0;
        let mut branches = 1usize;
        while depth < len && branches < 64 {
            let e = self.path.edge(depth);
            branches *= if e.is_horizontal() {
                self.allowed_h.len()
            } else {
                self.allowed_v.len()
            };
            depth += 1;
        }
        let mut prefixes: Vec<(Vec<u32>, u64, u64)> = Vec::new();
        let mut st = self.initial_state();
        self.dfs(&mut st, 0, depth, &mut |s: &State| {
            prefixes.push((s.values.clone(), s.need_h, s.need_v));
        });
        prefixes
            .into_par_iter()
            .map(|(values, need_h, need_v)| {
                let mut acc = init();
                let mut st = State {
                    values,
                    need_h,
                    need_v,
                };
                self.dfs(&mut st, depth, len, &mut |s: &State| {
                    visit(&mut acc, &s.values)
                });
                acc
            })
            .collect()
    }

    fn collect(&self) -> Vec<Grading> {
        let path = self.path.clone();
        self.run(Vec::new, |acc: &mut Vec<Vec<u32>>, v| acc.push(v.to_vec()))
            .into_iter()
            .flatten()
            .map(|v| Grading::new(path.clone(), v).expect("length matches"))
            .collect()
    }

    fn histograms(&self) -> BTreeMap<ValueHistogram, BigInt> {
        let path = self.path.clone();
        let parts = self.run(HashMap::new, |acc: &mut HashMap<ValueHistogram, u64>, v| {
            *acc.entry(ValueHistogram::of(&path, v)).or_insert(0) += 1;
        });
        let mut out: BTreeMap<ValueHistogram, BigInt> = BTreeMap::new();
        for part in parts {
            for (h, c) in part {
                *out.entry(h).or_insert_with(BigInt::zero) += c;
            }
        }
        out
    }
}

/// All tight gradings for the parameters, in lexicographic order of value vectors.
pub fn enumerate_tight_gradings(
    params: &TightParams,
    bounds: &GradingBounds,
) -> Result<Vec<Grading>> {
    params.validate()?;
    let s = Search::new(
        params.m,
        params.n,
        bounds,
        Some((params.beta1, params.beta2)),
        LeafTest::Tight(params.epsilon),
        None,
    )?;
    Ok(s.collect())
}

/// All compatible gradings matching the request, in lexicographic order.
pub fn enumerate_compatible_gradings(req: &CompatibleRequest) -> Result<Vec<Grading>> {
    let s = Search::new(
        req.m,
        req.n,
        &req.bounds,
        req.totals,
        LeafTest::Compatible,
        req.outside,
    )?;
    Ok(s.collect())
}

fn weigh(
    hists: BTreeMap<ValueHistogram, BigInt>,
    data: &InitialData,
) -> BTreeMap<(u64, u64), CoeffPolynomial> {
    let mut cache = BTreeMap::new();
    let mut out: BTreeMap<(u64, u64), CoeffPolynomial> = BTreeMap::new();
    for (h, count) in hists {
        let w = histogram_weight(&h, data, &mut cache).scale(&count);
        if w.is_zero() {
            continue;
        }
        *out.entry(h.totals()).or_default() += &w;
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// `sum wt(omega)` over tight gradings, with weights taken from `data`.
pub fn tight_weight_sum(params: &TightParams, data: &InitialData) -> Result<CoeffPolynomial> {
    params.validate()?;
    let s = Search::new(
        params.m,
        params.n,
        &data.bounds(),
        Some((params.beta1, params.beta2)),
        LeafTest::Tight(params.epsilon),
        None,
    )?;
    Ok(weigh(s.histograms(), data)
        .into_values()
        .fold(CoeffPolynomial::zero(), |acc, w| &acc + &w))
}

/// Weighted sums over compatible gradings, keyed by `(omega(E_2), omega(E_1))`.
/// The request's bounds are intersected with the nonzero coefficients of `data`.
pub fn compatible_weight_sum(
    req: &CompatibleRequest,
    data: &InitialData,
) -> Result<BTreeMap<(u64, u64), CoeffPolynomial>> {
    let s = Search::new(
        req.m,
        req.n,
        &req.bounds,
        req.totals,
        LeafTest::Compatible,
        req.outside,
    )?;
    Ok(weigh(s.histograms(), data))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::p_var;
    use crate::grading::{values_compatible, ValueSet};

    fn brute_force(m: usize, n: usize, l1: u32, l2: u32) -> Vec<Vec<u32>> {
        let path = DyckPath::maximal(m, n);
        let len = path.len();
        let mut out = Vec::new();
        let mut values = vec![0u32; len];
        fn rec(
            path: &DyckPath,
            values: &mut Vec<u32>,
            pos: usize,
            l1: u32,
            l2: u32,
            out: &mut Vec<Vec<u32>>,
        ) {
            if pos == values.len() {
                if values_compatible(path, values) {
                    out.push(values.clone());
                }
                return;
            }
            let cap = if path.edge(pos).is_horizontal() {
                l2
            } else {
                l1
            };
            for a in 0..=cap {
                values[pos] = a;
                rec(path, values, pos + 1, l1, l2, out);
            }
            values[pos] = 0;
        }
        rec(&path, &mut values, 0, l1, l2, &mut out);
        out
    }

    #[test]
    fn compatible_matches_brute_force() {
        for (m, n) in [(2, 2), (3, 2), (2, 3), (4, 1), (3, 3)] {
            let got: Vec<Vec<u32>> = enumerate_compatible_gradings(&CompatibleRequest::new(
                m,
                n,
                GradingBounds::new(2, 2),
            ))
            .unwrap()
            .into_iter()
            .map(|g| g.values().to_vec())
            .collect();
            assert_eq!(got, brute_force(m, n, 2, 2), "({m},{n})");
        }
    }

    #[test]
    fn single_tight_grading_small() {
        let params = TightParams::with_domain(2, 1, -1, 3, 1).unwrap();
        let all = enumerate_tight_gradings(&params, &GradingBounds::new(3, 1)).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].horizontal_values(), vec![1, 0, 0]);
        assert_eq!(all[0].vertical_values(), vec![2]);
    }

    #[test]
    fn catalan_fourteen() {
        let params = TightParams::new(12, 8, -1).unwrap();
        assert_eq!((params.m, params.n), (14, 9));
        let all = enumerate_tight_gradings(&params, &GradingBounds::only(&[3], &[2])).unwrap();
        assert_eq!(all.len(), 14);
    }

    #[test]
    fn zero_bounds_give_nothing() {
        let params = TightParams::new(1, 1, -1).unwrap();
        assert!(enumerate_tight_gradings(&params, &GradingBounds::new(0, 0))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn compatible_edge_cases() {
        let empty =
            enumerate_compatible_gradings(&CompatibleRequest::new(0, 0, GradingBounds::new(1, 1)))
                .unwrap();
        assert_eq!(empty.len(), 1);
        let three =
            enumerate_compatible_gradings(&CompatibleRequest::new(1, 0, GradingBounds::new(0, 2)))
                .unwrap();
        assert_eq!(three.len(), 3);
        assert!(matches!(
            enumerate_compatible_gradings(&CompatibleRequest::new(
                1,
                1,
                GradingBounds::unbounded()
            )),
            Err(Error::InfiniteEnumeration)
        ));
    }

    #[test]
    fn tight_sum_example() {
        let params = TightParams::with_domain(2, 1, -1, 3, 1).unwrap();
        let w = tight_weight_sum(&params, &InitialData::symbolic(3, 1)).unwrap();
        assert_eq!(w, &p_var(1, 2) * &p_var(2, 1));
        assert_eq!(
            ValueSet::Only([2].into_iter().collect()).values_up_to(5),
            vec![0, 2]
        );
    }
}
