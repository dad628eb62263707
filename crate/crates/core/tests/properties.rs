//! Property tests for the engine's invariants.

use std::collections::BTreeMap;

use gcsd_core::coeffring::{
    binomial_assignment, p_var, CoeffPolynomial, Monomial, Polynomial, Var,
};
use gcsd_core::data::{InitialData, SideFunction};
use gcsd_core::dyck::DyckPath;
use gcsd_core::expr::{format_poly, parse_poly};
use gcsd_core::grading::{
    enumerate_compatible_gradings, enumerate_tight_gradings, CompatibleRequest, GradingBounds,
    OutsideShadow, TightParams,
};
use gcsd_core::gw::gw_extract;
use gcsd_core::json;
use gcsd_core::scattering::{CorrectionOrder, ScatteringDiagram};
use gcsd_core::thetagreedy::{generic_endpoint, greedy_element, theta_function};
use proptest::prelude::*;

fn var() -> impl Strategy<Value = Var> {
    prop_oneof![
        (1u8..=2, 1u32..=3).prop_map(|(i, j)| Var::p(i, j)),
        Just(Var::S),
        Just(Var::T),
    ]
}

fn monomial() -> impl Strategy<Value = Monomial> {
    prop::collection::vec((var(), 0i32..=2), 0..3).prop_map(Monomial::from_factors)
}

fn poly() -> impl Strategy<Value = CoeffPolynomial> {
    prop::collection::vec((monomial(), -3i64..=3), 0..4)
        .prop_map(|ts| Polynomial::from_terms(ts.into_iter().map(|(m, c)| (m, c.into()))))
}

/// Initial data `1 + sum_j r_j p_{i,j} z^j` with small random `r_j`.
fn data() -> impl Strategy<Value = InitialData> {
    let side = |i: u8| {
        prop::collection::vec(0i64..=2, 1..=3).prop_map(move |rs| {
            let mut c = vec![CoeffPolynomial::one()];
            for (j, r) in rs.iter().enumerate() {
                c.push(p_var(i, j as u32 + 1).scale(&(*r).into()));
            }
            if c[1..].iter().all(CoeffPolynomial::is_zero) {
                c[1] = p_var(i, 1);
            }
            SideFunction::from_coeffs(c).unwrap()
        })
    };
    (side(1), side(2)).prop_map(|(a, b)| InitialData::new(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
    }

    #[test]
    fn canonical_form_is_idempotent(a in poly()) {
        let again = Polynomial::from_terms(a.terms().map(|(m, c)| (m.clone(), c.clone())));
        prop_assert_eq!(again, a);
    }

    #[test]
    fn specialize_is_a_homomorphism(a in poly(), b in poly(), images in prop::collection::vec(poly(), 8)) {
        let vars = [Var::p(1, 1), Var::p(1, 2), Var::p(1, 3), Var::p(2, 1), Var::p(2, 2), Var::p(2, 3), Var::S, Var::T];
        let assignment: BTreeMap<Var, CoeffPolynomial> = vars.into_iter().zip(images).collect();
        let prod = (&a * &b).specialize(&assignment).unwrap();
        let sa = a.specialize(&assignment).unwrap();
        let sb = b.specialize(&assignment).unwrap();
        prop_assert_eq!(prod, &sa * &sb);
        prop_assert_eq!((&a + &b).specialize(&assignment).unwrap(), &sa + &sb);
    }

    #[test]
    fn dyck_path_shape(m in 0usize..12, n in 0usize..12) {
        let p = DyckPath::maximal(m, n);
        prop_assert_eq!(p.len(), m + n);
        prop_assert_eq!(p.horizontal_positions().len(), m);
        prop_assert_eq!(p.vertical_positions().len(), n);
        for (x, y) in p.vertices() {
            prop_assert!(y * m as i64 <= x * n as i64 || m == 0);
        }
    }

    #[test]
    fn cyclic_subpaths_partition(m in 1usize..8, n in 1usize..8, i in 0usize..16, j in 0usize..16) {
        let p = DyckPath::maximal(m, n);
        let e = *p.edge(i % p.len());
        let f = *p.edge(j % p.len());
        if e.anchor_vertex() % p.len() == f.anchor_vertex() % p.len() {
            return Ok(());
        }
        let a = p.cyclic_subpath(&e, &f).unwrap();
        let b = p.cyclic_subpath(&f, &e).unwrap();
        let mut seen: Vec<usize> = a.iter().chain(&b).map(|x| x.position).collect();
        seen.sort();
        prop_assert_eq!(seen, (0..p.len()).collect::<Vec<_>>());
        prop_assert!(p.cyclic_subpath(&e, &e).unwrap().is_empty());
    }
}

/// Exhaustive maximality check on small sizes: no lattice path below the
/// diagonal has a vertex strictly above the maximal path's vertex at the same x.
#[test]
fn maximal_path_is_highest() {
    for m in 1..7usize {
        for n in 1..7usize {
            let p = DyckPath::maximal(m, n);
            for (x, y) in p.vertices() {
                let best = (0..=n as i64)
                    .filter(|&h| h * m as i64 <= x * n as i64)
                    .max()
                    .unwrap();
                let top = p
                    .vertices()
                    .iter()
                    .filter(|v| v.0 == x)
                    .map(|v| v.1)
                    .max()
                    .unwrap();
                assert!(y <= top);
                assert_eq!(top, best.min(n as i64), "({m},{n}) at x = {x}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tight_gradings_are_compatible_and_homogeneous(b1 in 1u64..5, b2 in 1u64..5, eps in prop::sample::select(vec![-1i8, 1])) {
        let params = TightParams::new(b1, b2, eps).unwrap();
        let tight = enumerate_tight_gradings(&params, &GradingBounds::new(2, 2)).unwrap();
        for g in &tight {
            prop_assert!(g.is_compatible());
            prop_assert_eq!(g.vertical_total(), b1);
            prop_assert_eq!(g.horizontal_total(), b2);
            prop_assert_eq!(g.weight().side_degrees(), Some((b1 as i64, b2 as i64)));
        }
    }

    #[test]
    fn tight_set_is_compatible_set_without_outside_weight(b1 in 1u64..5, b2 in 1u64..5) {
        let params = TightParams::new(b1, b2, -1).unwrap();
        let bounds = GradingBounds::new(2, 2);
        let mut tight: Vec<Vec<u32>> = enumerate_tight_gradings(&params, &bounds)
            .unwrap()
            .iter()
            .map(|g| g.values().to_vec())
            .collect();
        let req = CompatibleRequest::new(params.m, params.n, bounds)
            .with_totals(b1, b2)
            .with_outside(OutsideShadow::VerticalOutsideSh1, 0);
        let mut cg: Vec<Vec<u32>> = enumerate_compatible_gradings(&req)
            .unwrap()
            .iter()
            .map(|g| g.values().to_vec())
            .collect();
        tight.sort();
        cg.sort();
        prop_assert_eq!(tight, cg);
    }

    #[test]
    fn completion_is_consistent_and_order_free(d in data()) {
        let k = 7;
        let base = ScatteringDiagram::two_line(&d, k).unwrap();
        let a = base.ks_complete_with(CorrectionOrder::AscendingSlope).unwrap();
        let b = base.ks_complete_with(CorrectionOrder::DescendingSlope).unwrap();
        prop_assert!(a.is_consistent().unwrap());
        prop_assert!(a.check_positivity());
        prop_assert_eq!(&a, &b);
        for (dir, f) in a.rays() {
            for (j, c) in f.coeffs().iter().enumerate().skip(1) {
                let want = (j as i64 * dir.0, j as i64 * dir.1);
                prop_assert!(c.is_zero() || c.side_degrees() == Some(want));
            }
        }
    }

    #[test]
    fn specialization_commutes_with_completion(vals in prop::collection::vec(0i64..=3, 6)) {
        let k = 7;
        let data = InitialData::symbolic(3, 3);
        let vars = [Var::p(1, 1), Var::p(1, 2), Var::p(1, 3), Var::p(2, 1), Var::p(2, 2), Var::p(2, 3)];
        let assignment: BTreeMap<Var, CoeffPolynomial> =
            vars.into_iter().zip(vals.iter().map(|&v| CoeffPolynomial::from_i64(v))).collect();
        let left = ScatteringDiagram::two_line(&data, k).unwrap().ks_complete().unwrap().specialize(&assignment).unwrap();
        let right = ScatteringDiagram::two_line(&data.specialize(&assignment).unwrap(), k).unwrap().ks_complete().unwrap();
        let nontrivial = |d: &ScatteringDiagram| -> Vec<_> {
            d.rays().iter().filter(|(_, f)| !f.is_trivial()).map(|(e, f)| (*e, f.clone())).collect()
        };
        prop_assert_eq!(nontrivial(&left), nontrivial(&right));
    }

    #[test]
    fn greedy_elements_are_pointed(a1 in -3i64..=3, a2 in -3i64..=3) {
        let g = greedy_element(a1, a2, &InitialData::symbolic(2, 1)).unwrap();
        prop_assert!(g.value().coefficient((-a1, -a2)).is_one());
        prop_assert!(g.is_minimally_pointed());
    }

    #[test]
    fn theta_does_not_depend_on_the_endpoint(
        a1 in -3i64..=3,
        a2 in -3i64..=3,
        slope in (1i64..6, 1i64..6),
        offset in prop::sample::select(vec![-1i64, 1]),
    ) {
        let d = ScatteringDiagram::two_line(&InitialData::symbolic(2, 2), 10).unwrap().ks_complete().unwrap();
        let q = generic_endpoint(slope, offset);
        let t1 = theta_function(&d, (a1, a2), &q).unwrap();
        let t2 = theta_function(&d, (a1, a2), &generic_endpoint((1, 1), 1)).unwrap();
        prop_assert_eq!(t1, t2);
    }

    #[test]
    fn parse_print_round_trip(cs in prop::collection::vec(poly(), 0..4), y in any::<bool>()) {
        let mut coeffs = vec![CoeffPolynomial::one()];
        coeffs.extend(cs);
        let z = if y { 'y' } else { 'x' };
        let src = format_poly(z, &coeffs);
        let once = parse_poly(&src).unwrap();
        let twice = parse_poly(&once.to_string()).unwrap();
        prop_assert_eq!(&once, &twice);
        let mut want = coeffs.clone();
        while want.len() > 1 && want.last().unwrap().is_zero() {
            want.pop();
        }
        prop_assert_eq!(once.coeffs, want);
    }
}

#[test]
fn gw_prelog_coefficients_are_positive_monomials() {
    for (l1, l2, a, b) in [
        (1, 1, 1, 1),
        (2, 2, 1, 1),
        (3, 1, 2, 1),
        (2, 3, 1, 2),
        (3, 3, 1, 1),
    ] {
        let data = InitialData::symbolic(l1, l2);
        let f = gcsd_core::scattering::wall_function_tight(a, b, &data, 8, 1).unwrap();
        let g = f
            .try_map(|c| c.specialize(&binomial_assignment(l1, l2)))
            .unwrap();
        for (k, c) in g.coeffs().iter().enumerate().skip(1) {
            let k = k as i32;
            let (m, v) = c.as_single_term().expect("a single monomial in s and t");
            assert_eq!(
                m,
                &Monomial::from_factors([(Var::S, k * a as i32), (Var::T, k * b as i32)])
            );
            assert!(*v > 0.into());
        }
        let t = gw_extract(l1, l2, a, b, 8).unwrap();
        assert_eq!(t.rows.len() as i64, 8 / (a + b));
    }
}

#[test]
fn cluster_rays_of_affine_type() {
    let d = ScatteringDiagram::two_line(&InitialData::symbolic(2, 2), 12)
        .unwrap()
        .ks_complete()
        .unwrap();
    for (dir, f) in d.rays() {
        if f.is_trivial() {
            continue;
        }
        let (a, b) = *dir;
        assert!((a - b).abs() <= 1, "unexpected ray {dir:?}");
    }
    for k in 2..=6 {
        assert!(d.ray((k, k - 1)).is_some_and(|f| !f.is_trivial()));
        assert!(d.ray((k - 1, k)).is_some_and(|f| !f.is_trivial()));
    }
    assert!(d.ray((1, 1)).is_some_and(|f| !f.is_trivial()));

    let c = ScatteringDiagram::two_line(&InitialData::cluster(2, 2), 12)
        .unwrap()
        .ks_complete()
        .unwrap();
    let n = |v: i64| CoeffPolynomial::from_i64(v);
    for k in 2..=3 {
        for dir in [(k, k - 1), (k - 1, k)] {
            assert_eq!(
                c.ray(dir).unwrap().coeffs(),
                &[n(1), n(0), n(1)][..],
                "{dir:?}"
            );
        }
    }
    assert_eq!(
        c.ray((1, 1)).unwrap().coeffs(),
        &[n(1), n(0), n(2), n(0), n(3), n(0), n(4)][..]
    );
}

#[test]
fn json_is_deterministic() {
    let d = ScatteringDiagram::tight(&InitialData::symbolic(2, 2), 8, 1).unwrap();
    let a = serde_json::to_string(&json::document("diagram", json::diagram(&d))).unwrap();
    let b = serde_json::to_string(&json::document("diagram", json::diagram(&d))).unwrap();
    assert_eq!(a, b);
}
