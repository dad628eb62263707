//! Rank-2 scattering diagrams, the consistency completion, and the
//! wall-function builder from tight gradings.

mod automorphism;
mod wallfn;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;

use crate::coeffring::{BivariateSeries, CoeffPolynomial, Exponent, Var};
use crate::data::InitialData;
use crate::error::{Error, Result};
use crate::grading::{tight_weight_sum, TightParams};

pub use automorphism::{apply_crossing, crossing_normal, WallAutomorphism};
pub(crate) use wallfn::uni_mul;
pub use wallfn::{primitive, WallFunction};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WallKind {
    /// Support `R w`.
    Line,
    /// Support `R_{<=0} w`.
    Ray,
}

impl WallKind {
    pub fn as_str(self) -> &'static str {
        match self {
            WallKind::Line => "line",
            WallKind::Ray => "ray",
        }
    }
}

/// A wall through the origin carrying a function in `x^w`, `w = direction`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    pub kind: WallKind,
    pub function: WallFunction,
}

impl Wall {
    pub fn direction(&self) -> Exponent {
        self.function.direction()
    }
}

/// One crossing in a path-ordered product: the wall function and the
/// velocity of the path when it meets the wall.
#[derive(Clone, Debug)]
pub struct Crossing<'a> {
    pub function: &'a WallFunction,
    pub velocity: Exponent,
}

/// Composes the crossings in order: the first crossing is applied first.
pub fn path_ordered_product(order: u32, crossings: &[Crossing<'_>]) -> Result<WallAutomorphism> {
    let mut aut = WallAutomorphism::identity(order);
    for c in crossings {
        let n = crossing_normal(c.function.direction(), c.velocity)?;
        aut = aut.then_crossing(c.function, n);
    }
    Ok(aut)
}

/// Orders nonnegative directions by increasing slope `b / a`.
pub fn slope_cmp(p: Exponent, q: Exponent) -> Ordering {
    ((p.1 as i128) * (q.0 as i128)).cmp(&((q.1 as i128) * (p.0 as i128)))
}

/// Angular position of a nonzero vector, counterclockwise from the positive x-axis.
fn angle_cmp(p: Exponent, q: Exponent) -> Ordering {
    let half = |v: Exponent| {
        if v.1 > 0 || (v.1 == 0 && v.0 > 0) {
            0
        } else {
            1
        }
    };
    half(p).cmp(&half(q)).then_with(|| {
        let cross = p.0 as i128 * q.1 as i128 - p.1 as i128 * q.0 as i128;
        0.cmp(&cross)
    })
}

/// Which corrections are inserted between loop recomputations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CorrectionOrder {
    /// All corrections of one order from a single loop product.
    Simultaneous,
    /// One direction at a time, by increasing slope.
    AscendingSlope,
    /// One direction at a time, by decreasing slope.
    DescendingSlope,
}

/// Initial lines plus outgoing rays, truncated at order `K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScatteringDiagram {
    order: u32,
    lines: Vec<WallFunction>,
    rays: BTreeMap<Exponent, WallFunction>,
}

impl ScatteringDiagram {
    /// A diagram with the given initial lines and no rays.
    pub fn new(order: u32, lines: Vec<WallFunction>) -> Result<ScatteringDiagram> {
        let lines = lines
            .into_iter()
            .map(|l| {
                if l.order() < order {
                    Err(Error::Precondition(format!(
                        "line {} is truncated at order {} < {}",
                        l,
                        l.order(),
                        order
                    )))
                } else {
                    Ok(l.with_order(order))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ScatteringDiagram {
            order,
            lines,
            rays: BTreeMap::new(),
        })
    }

    /// Lines `(R(1,0), P_1(x))` and `(R(0,1), P_2(y))`.
    pub fn two_line(data: &InitialData, order: u32) -> Result<ScatteringDiagram> {
        let l1 = WallFunction::new((1, 0), order, data.p1.coeffs_up_to(order))?;
        let l2 = WallFunction::new((0, 1), order, data.p2.coeffs_up_to(order))?;
        ScatteringDiagram::new(order, vec![l1, l2])
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn lines(&self) -> &[WallFunction] {
        &self.lines
    }

    pub fn rays(&self) -> &BTreeMap<Exponent, WallFunction> {
        &self.rays
    }

    pub fn ray(&self, direction: Exponent) -> Option<&WallFunction> {
        self.rays.get(&direction)
    }

    /// Inserts a ray, replacing any ray on the same support. Trivial
    /// functions remove the ray.
    pub fn insert_ray(&mut self, f: WallFunction) {
        let f = f.with_order(self.order);
        if f.is_trivial() {
            self.rays.remove(&f.direction());
        } else {
            self.rays.insert(f.direction(), f);
        }
    }

    /// Adds `c x^{k w}` to the ray in direction `w`, creating it if needed.
    fn add_to_ray(&mut self, w: Exponent, k: u32, c: &CoeffPolynomial) -> Result<()> {
        let order = self.order;
        let entry = match self.rays.entry(w) {
            std::collections::btree_map::Entry::Occupied(e) => e.into_mut(),
            std::collections::btree_map::Entry::Vacant(e) => e.insert(WallFunction::one(w, order)?),
        };
        entry.add_to_coeff(k, c);
        if entry.is_trivial() {
            self.rays.remove(&w);
        }
        Ok(())
    }

    /// All walls, ordered by slope with lines before rays on a shared support.
    pub fn walls(&self) -> Vec<Wall> {
        let mut out: Vec<Wall> = self
            .lines
            .iter()
            .map(|f| Wall {
                kind: WallKind::Line,
                function: f.clone(),
            })
            .chain(self.rays.values().map(|f| Wall {
                kind: WallKind::Ray,
                function: f.clone(),
            }))
            .collect();
        out.sort_by(|p, q| slope_cmp(p.direction(), q.direction()).then(p.kind.cmp(&q.kind)));
        out
    }

    /// Crossings met by a counterclockwise loop around the origin.
    pub fn standard_loop(&self) -> Vec<Crossing<'_>> {
        let mut halves: Vec<(Exponent, &WallFunction)> = Vec::new();
        for f in &self.lines {
            let w = f.direction();
            halves.push((w, f));
            halves.push(((-w.0, -w.1), f));
        }
        for f in self.rays.values() {
            let w = f.direction();
            halves.push(((-w.0, -w.1), f));
        }
        halves.sort_by(|p, q| angle_cmp(p.0, q.0));
        halves
            .into_iter()
            .map(|(p, f)| Crossing {
                function: f,
                velocity: (-p.1, p.0),
            })
            .collect()
    }

    /// The counterclockwise loop product modulo order `k + 1`.
    pub fn loop_product(&self, k: u32) -> Result<WallAutomorphism> {
        path_ordered_product(k.min(self.order), &self.standard_loop())
    }

    /// The loop product is the identity modulo order `K + 1`.
    pub fn is_consistent(&self) -> Result<bool> {
        Ok(self.loop_product(self.order)?.is_identity())
    }

    /// Adds the rays making the diagram consistent to order `K`.
    pub fn ks_complete(&self) -> Result<ScatteringDiagram> {
        self.ks_complete_with(CorrectionOrder::Simultaneous)
    }

    pub fn ks_complete_with(&self, how: CorrectionOrder) -> Result<ScatteringDiagram> {
        let mut d = self.clone();
        for k in 1..=self.order {
            let dev = d.deviation(k)?;
            if dev.is_empty() {
                continue;
            }
            match how {
                CorrectionOrder::Simultaneous => {
                    for (e, (ax, ay)) in &dev {
                        d.correct(*e, ax, ay)?;
                    }
                }
                CorrectionOrder::AscendingSlope | CorrectionOrder::DescendingSlope => {
                    let mut dirs: Vec<Exponent> = dev.keys().copied().collect();
                    dirs.sort_by(|p, q| slope_cmp(*p, *q));
                    if how == CorrectionOrder::DescendingSlope {
                        dirs.reverse();
                    }
                    for (i, e) in dirs.into_iter().enumerate() {
                        let now = if i == 0 { dev.clone() } else { d.deviation(k)? };
                        if let Some((ax, ay)) = now.get(&e) {
                            d.correct(e, ax, ay)?;
                        }
                    }
                }
            }
            let left = d.deviation(k)?;
            if !left.is_empty() {
                return Err(Error::Inconsistent(format!(
                    "order {} still deviates after correction",
                    k
                )));
            }
        }
        Ok(d)
    }

    /// Order-`k` terms of the loop product, keyed by exponent, as
    /// `(coefficient in u_x, coefficient in u_y)`. Fails if a lower order deviates.
    fn deviation(&self, k: u32) -> Result<BTreeMap<Exponent, (CoeffPolynomial, CoeffPolynomial)>> {
        let aut = self.loop_product(k)?;
        let mut out: BTreeMap<Exponent, (CoeffPolynomial, CoeffPolynomial)> = BTreeMap::new();
        for (which, unit) in [(0, aut.unit_x()), (1, aut.unit_y())] {
            for (e, c) in unit.terms() {
                if *e == (0, 0) {
                    continue;
                }
                let ord = e.0 + e.1;
                if ord < k as i64 {
                    return Err(Error::Inconsistent(format!(
                        "loop product deviates at order {} before order {}",
                        ord, k
                    )));
                }
                let slot = out.entry(*e).or_default();
                if which == 0 {
                    slot.0 = c.clone();
                } else {
                    slot.1 = c.clone();
                }
            }
        }
        Ok(out)
    }

    /// Cancels the deviation `x -> x (1 + ax x^e)`, `y -> y (1 + ay x^e)`
    /// with a ray term in direction `primitive(e)`.
    fn correct(&mut self, e: Exponent, ax: &CoeffPolynomial, ay: &CoeffPolynomial) -> Result<()> {
        let ((a, b), g) = primitive(e);
        if e.0 < 0 || e.1 < 0 || g <= 0 {
            return Err(Error::Inconsistent(format!(
                "deviation at exponent ({}, {}) outside the positive quadrant",
                e.0, e.1
            )));
        }
        let balance = &ax.scale(&a.into()) + &ay.scale(&b.into());
        if !balance.is_zero() {
            return Err(Error::Inconsistent(format!(
                "deviation at ({}, {}) is not a wall-crossing",
                e.0, e.1
            )));
        }
        // A ray term c z^g moves u_x by -b c and u_y by a c.
        let c = if a != 0 {
            (-ay).div_exact_int(a)
        } else {
            ax.div_exact_int(b)
        };
        let c = c.ok_or_else(|| {
            Error::Inconsistent(format!("correction at ({}, {}) is not integral", e.0, e.1))
        })?;
        self.add_to_ray((a, b), g as u32, &c)
    }

    /// Every wall-function coefficient lies in `N[p_{i,j}]`.
    pub fn check_positivity(&self) -> bool {
        self.lines
            .iter()
            .chain(self.rays.values())
            .all(WallFunction::is_positive)
    }

    /// Substitutes values for variables in every wall function.
    pub fn specialize(
        &self,
        assignment: &BTreeMap<Var, CoeffPolynomial>,
    ) -> Result<ScatteringDiagram> {
        let map = |f: &WallFunction| f.try_map(|c| c.substitute(assignment));
        let lines = self.lines.iter().map(map).collect::<Result<Vec<_>>>()?;
        let mut d = ScatteringDiagram::new(self.order, lines)?;
        for f in self.rays.values() {
            d.insert_ray(map(f)?);
        }
        Ok(d)
    }

    /// Builds the two-line diagram with rays from tight-grading sums.
    pub fn tight(data: &InitialData, order: u32, epsilon: i8) -> Result<ScatteringDiagram> {
        let mut d = ScatteringDiagram::two_line(data, order)?;
        let dirs: Vec<Exponent> = (1..order as i64)
            .flat_map(|a| (1..=order as i64 - a).map(move |b| (a, b)))
            .filter(|&e| primitive(e).1 == 1)
            .collect();
        let fs = dirs
            .par_iter()
            .map(|&(a, b)| wall_function_tight(a, b, data, order, epsilon))
            .collect::<Result<Vec<_>>>()?;
        for f in fs {
            d.insert_ray(f);
        }
        Ok(d)
    }
}

/// Ray function in direction `(a, b)` with `c_k` the weighted count of tight
/// gradings for `beta = (k a, k b)`.
pub fn wall_function_tight(
    a: i64,
    b: i64,
    data: &InitialData,
    order: u32,
    epsilon: i8,
) -> Result<WallFunction> {
    if a <= 0 || b <= 0 || primitive((a, b)).1 != 1 {
        return Err(Error::InvalidDirection(a, b));
    }
    let kmax = order as i64 / (a + b);
    let coeffs = (1..=kmax)
        .into_par_iter()
        .map(|k| {
            let p = TightParams::new((k * a) as u64, (k * b) as u64, epsilon)?;
            tight_weight_sum(&p, data)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut all = vec![CoeffPolynomial::one()];
    all.extend(coeffs);
    WallFunction::new((a, b), order, all)
}

/// One ray on which the two constructions disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discrepancy {
    pub direction: Exponent,
    pub tight: Option<WallFunction>,
    pub oracle: Option<WallFunction>,
}

/// Ray-by-ray comparison of the tight-grading diagram with the completion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonReport {
    pub order: u32,
    pub rays_compared: usize,
    pub discrepancies: Vec<Discrepancy>,
}

impl ComparisonReport {
    pub fn is_equal(&self) -> bool {
        self.discrepancies.is_empty()
    }
}

impl fmt::Display for ComparisonReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "order {}: {} rays compared, {} discrepancies",
            self.order,
            self.rays_compared,
            self.discrepancies.len()
        )?;
        let show = |w: &Option<WallFunction>| w.as_ref().map_or("1".to_string(), |w| w.to_string());
        for d in &self.discrepancies {
            writeln!(
                f,
                "  ({}, {}): tight {} vs completion {}",
                d.direction.0,
                d.direction.1,
                show(&d.tight),
                show(&d.oracle)
            )?;
        }
        Ok(())
    }
}

pub fn compare_diagrams(tight: &ScatteringDiagram, oracle: &ScatteringDiagram) -> ComparisonReport {
    let dirs: BTreeSet<Exponent> = tight
        .rays
        .keys()
        .chain(oracle.rays.keys())
        .copied()
        .collect();
    let discrepancies = dirs
        .iter()
        .filter_map(|&e| {
            let t = tight.rays.get(&e);
            let o = oracle.rays.get(&e);
            (t != o).then(|| Discrepancy {
                direction: e,
                tight: t.cloned(),
                oracle: o.cloned(),
            })
        })
        .collect();
    ComparisonReport {
        order: tight.order.min(oracle.order),
        rays_compared: dirs.len(),
        discrepancies,
    }
}

/// Builds both diagrams for `data` at order `K` and compares them.
pub fn compare_tight_vs_oracle(
    data: &InitialData,
    order: u32,
    epsilon: i8,
) -> Result<ComparisonReport> {
    let oracle = ScatteringDiagram::two_line(data, order)?.ks_complete()?;
    let tight = ScatteringDiagram::tight(data, order, epsilon)?;
    Ok(compare_diagrams(&tight, &oracle))
}

/// Restricts a series to the terms of the ray monomial, as a wall function.
pub fn series_to_wall(direction: Exponent, s: &BivariateSeries) -> Result<WallFunction> {
    let order = s
        .order()
        .ok_or_else(|| Error::Precondition("series must be truncated".into()))?;
    let kmax = order as i64 / (direction.0 + direction.1).max(1);
    let coeffs = (0..=kmax)
        .map(|k| s.coefficient((k * direction.0, k * direction.1)))
        .collect();
    WallFunction::new(direction, order, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::p_var;
    use crate::data::SideFunction;

    fn poly_ray(d: &ScatteringDiagram, e: Exponent) -> Vec<CoeffPolynomial> {
        d.ray(e).map(|f| f.coeffs().to_vec()).unwrap_or_default()
    }

    #[test]
    fn pentagon() {
        let data = InitialData::symbolic(1, 1);
        let d = ScatteringDiagram::two_line(&data, 6)
            .unwrap()
            .ks_complete()
            .unwrap();
        assert_eq!(d.rays().len(), 1);
        assert_eq!(
            poly_ray(&d, (1, 1)),
            vec![CoeffPolynomial::one(), &p_var(1, 1) * &p_var(2, 1)]
        );
        assert!(d.is_consistent().unwrap());
    }

    #[test]
    fn two_lines_deviate_by_commutator() {
        let data = InitialData::symbolic(1, 1);
        let d = ScatteringDiagram::two_line(&data, 2).unwrap();
        let aut = d.loop_product(2).unwrap();
        assert!(!aut.is_identity());
        let c = &p_var(1, 1) * &p_var(2, 1);
        assert_eq!(aut.unit_x().coefficient((1, 1)), c);
        assert_eq!(aut.unit_x().coefficient((1, 0)), CoeffPolynomial::zero());
        assert_eq!(aut.unit_y().coefficient((1, 1)), -c);
    }

    #[test]
    fn empty_diagram_loop_is_identity() {
        let d = ScatteringDiagram::new(5, vec![]).unwrap();
        assert!(d.loop_product(5).unwrap().is_identity());
    }

    #[test]
    fn example_three_one() {
        let data = InitialData::symbolic(3, 1);
        let d = ScatteringDiagram::two_line(&data, 6)
            .unwrap()
            .ks_complete()
            .unwrap();
        let dirs: Vec<Exponent> = d.rays().keys().copied().collect();
        assert_eq!(dirs, vec![(1, 1), (2, 1), (3, 1), (3, 2)]);
        let p = p_var;
        assert_eq!(
            poly_ray(&d, (3, 1)),
            vec![CoeffPolynomial::one(), &p(1, 3) * &p(2, 1)]
        );
        let tight = ScatteringDiagram::tight(&data, 6, 1).unwrap();
        assert!(compare_diagrams(&tight, &d).is_equal());
    }

    #[test]
    fn single_line_scatters_nothing() {
        let f = WallFunction::new((1, 0), 6, SideFunction::symbolic(1, 3).coeffs_up_to(6)).unwrap();
        let d = ScatteringDiagram::new(6, vec![f])
            .unwrap()
            .ks_complete()
            .unwrap();
        assert!(d.rays().is_empty());
        let data = InitialData::new(
            SideFunction::symbolic(1, 3),
            SideFunction::from_coeffs(vec![CoeffPolynomial::one()]).unwrap(),
        );
        assert!(wall_function_tight(2, 1, &data, 9, 1).unwrap().is_trivial());
    }

    #[test]
    fn tight_ray_example() {
        let data = InitialData::symbolic(3, 1);
        let f = wall_function_tight(2, 1, &data, 9, 1).unwrap();
        let p = p_var;
        assert_eq!(
            f.coeffs(),
            &[
                CoeffPolynomial::one(),
                &p(1, 2) * &p(2, 1),
                &(&p(1, 1) * &p(1, 3)) * &p(2, 1).pow(2),
                &p(1, 3).pow(2) * &p(2, 1).pow(3),
            ]
        );
    }

    #[test]
    fn cluster_three_two_ray() {
        let data = InitialData::cluster(3, 2);
        let f = wall_function_tight(3, 2, &data, 20, 1).unwrap();
        let want: Vec<CoeffPolynomial> = [1, 1, 2, 5, 14]
            .iter()
            .map(|&c| CoeffPolynomial::from_i64(c))
            .collect();
        assert_eq!(f.coeffs(), &want[..]);
    }

    #[test]
    fn correction_order_does_not_matter() {
        let data = InitialData::symbolic(2, 2);
        let base = ScatteringDiagram::two_line(&data, 8).unwrap();
        let a = base
            .ks_complete_with(CorrectionOrder::Simultaneous)
            .unwrap();
        let b = base
            .ks_complete_with(CorrectionOrder::AscendingSlope)
            .unwrap();
        let c = base
            .ks_complete_with(CorrectionOrder::DescendingSlope)
            .unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert!(a.check_positivity());
    }

    #[test]
    fn negative_coefficient_is_not_positive() {
        let mut d = ScatteringDiagram::new(4, vec![]).unwrap();
        d.insert_ray(
            WallFunction::new(
                (1, 1),
                4,
                vec![CoeffPolynomial::one(), CoeffPolynomial::from_i64(-1)],
            )
            .unwrap(),
        );
        assert!(!d.check_positivity());
    }
}
