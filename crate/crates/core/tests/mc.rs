use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use scatter_core::lattice::LatticeVector;
use scatter_core::mc::{
    assemble_wall_factors, cone_of_tree, enumerate_trees, gaussian_cone_measure, propagate, verify_against_ks, Cone,
    EvalOptions, InputPair, Method, TreeWall,
};
use scatter_core::scattering::{ks_complete, standard_pair};
use scatter_core::series::Monomial;

fn lv(x: i64, y: i64) -> LatticeVector {
    LatticeVector::new(x, y)
}

fn col(v: &[f64]) -> DVector<f64> {
    DVector::from_column_slice(v)
}

fn monte_carlo(samples: usize) -> EvalOptions {
    EvalOptions { method: Method::monte_carlo(samples, 11), ..EvalOptions::default() }
}

/// Solid angle of the cone over three unit vectors, divided by the full sphere.
fn simplicial_fraction(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> f64 {
    let unit = |v: [f64; 3]| {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        [v[0] / n, v[1] / n, v[2] / n]
    };
    let (a, b, c) = (unit(a), unit(b), unit(c));
    let dot = |x: [f64; 3], y: [f64; 3]| x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
    let triple = a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0]);
    let denom = 1.0 + dot(a, b) + dot(b, c) + dot(c, a);
    let mut omega = 2.0 * triple.abs().atan2(denom);
    if omega < 0.0 {
        omega += 2.0 * std::f64::consts::PI;
    }
    omega / (4.0 * std::f64::consts::PI)
}

fn rotation(dim: usize, seed: &[f64]) -> DMatrix<f64> {
    let a = DMatrix::from_fn(dim, dim, |i, j| seed[(i * dim + j) % seed.len()] + if i == j { 2.0 } else { 0.0 });
    a.qr().q()
}

#[test]
fn tree_counts_follow_the_recursion() {
    let (w1, w2) = standard_pair(4, 1).unwrap();
    let inputs = InputPair::from_walls(&w1, &w2).unwrap();
    let mut by_degree = [0u64; 5];
    for d in 1..=4 {
        by_degree[d] = 2 + (1..d).map(|a| by_degree[a] * by_degree[d - a]).sum::<u64>();
    }
    assert_eq!(&by_degree[1..], &[2, 6, 26, 142]);
    for n in 1..=4u32 {
        let trees = enumerate_trees(&inputs, n).unwrap();
        let expected: u64 = by_degree[1..=n as usize].iter().sum();
        assert_eq!(trees.len() as u64, expected, "order {n}");
        for t in &trees {
            assert_eq!(t.ribbon_count as u64 * t.automorphisms, 1 << (t.tree.num_leaves() - 1));
        }
    }
}

#[test]
fn two_leaf_tree_lands_on_the_diagonal_ray() {
    let (w1, w2) = standard_pair(2, 1).unwrap();
    let inputs = InputPair::from_walls(&w1, &w2).unwrap();
    let trees = enumerate_trees(&inputs, 2).unwrap();
    let rays: Vec<_> = trees
        .iter()
        .map(|t| propagate(&t.tree, &inputs).unwrap())
        .filter(|p| matches!(p.wall, TreeWall::Ray(_)))
        .collect();
    assert_eq!(rays.len(), 2);
    for p in rays {
        assert_eq!(p.wall, TreeWall::Ray(lv(1, 1)));
        assert_eq!(p.m_t, lv(1, 1));
        assert_eq!(p.j_t, 2);
    }
    let factors = assemble_wall_factors(&inputs, 2, &EvalOptions::default()).unwrap();
    assert_eq!(factors.walls.len(), 1);
    let c = &factors.walls[&lv(1, 1)][&Monomial::new(lv(1, 1), 2)];
    assert!((c.value - 1.0).abs() < 1e-12);
    assert_eq!(c.snapped, Some(BigRational::from_integer(BigInt::from(1))));
}

#[test]
fn tree_cone_dimension_equals_leaf_count() {
    let (w1, w2) = standard_pair(4, 1).unwrap();
    let inputs = InputPair::from_walls(&w1, &w2).unwrap();
    for t in enumerate_trees(&inputs, 4).unwrap() {
        let p = propagate(&t.tree, &inputs).unwrap();
        if matches!(p.wall, TreeWall::Ray(_)) {
            let cone = cone_of_tree(&t.tree, &inputs, 1).unwrap();
            assert_eq!(cone.dim, t.tree.num_leaves().max(1));
        }
    }
}

#[test]
fn simple_inputs_match_completion_at_order_three() {
    let (w1, w2) = standard_pair(3, 1).unwrap();
    let report = verify_against_ks(&w1, &w2, 3, 1e-3, &EvalOptions::default()).unwrap();
    assert!(report.max_dev <= 1e-3, "{}", report.max_dev);
    assert!(report.ks_match, "{:?}", report.diagnostics);
    assert!(report.exact_match);
}

#[test]
fn simple_inputs_match_completion_through_order_five() {
    for n in 4..=5 {
        let (w1, w2) = standard_pair(n, 1).unwrap();
        let report = verify_against_ks(&w1, &w2, n, 1e-6, &EvalOptions::default()).unwrap();
        assert!(report.exact_match, "order {n}: {:?}", report.diagnostics);
    }
}

#[test]
fn doubled_inputs_match_completion_with_quadrature() {
    let (w1, w2) = standard_pair(4, 2).unwrap();
    let report = verify_against_ks(&w1, &w2, 4, 1e-6, &EvalOptions::default()).unwrap();
    assert!(report.ks_match, "{:?}", report.diagnostics);
    assert!(report.exact_match);
}

#[test]
fn doubled_inputs_match_completion_with_monte_carlo() {
    let (w1, w2) = standard_pair(4, 2).unwrap();
    let report = verify_against_ks(&w1, &w2, 4, 1e-2, &monte_carlo(1_000_000)).unwrap();
    assert!(report.max_dev <= 1e-2, "{}", report.max_dev);
    assert!(report.ks_match, "{:?}", report.diagnostics);
}

#[test]
fn flipped_chi_sign_is_detected() {
    let (w1, w2) = standard_pair(3, 1).unwrap();
    let opts = EvalOptions { flip_chi: true, ..EvalOptions::default() };
    let report = verify_against_ks(&w1, &w2, 3, 1e-3, &opts).unwrap();
    assert!(!report.ks_match);
    assert!(!report.exact_match);
    assert!(report.max_dev > 0.5);
}

#[test]
fn refinement_keeps_snapped_values() {
    let (w1, w2) = standard_pair(4, 2).unwrap();
    let inputs = InputPair::from_walls(&w1, &w2).unwrap();
    let coarse = Method::monte_carlo(200_000, 5);
    let a = assemble_wall_factors(&inputs, 4, &EvalOptions { method: coarse, flip_chi: false }).unwrap();
    let b = assemble_wall_factors(&inputs, 4, &EvalOptions { method: coarse.doubled(), flip_chi: false }).unwrap();
    for (m, terms) in &a.walls {
        for (mono, c) in terms {
            if let Some(s) = &c.snapped {
                assert_eq!(b.walls[m][mono].snapped.as_ref(), Some(s), "{m} {mono}");
            }
        }
    }
    let d = b.to_diagram(&inputs).unwrap();
    assert!(d.is_consistent().unwrap());
    let ks = ks_complete(&w1, &w2, 4).unwrap();
    assert_eq!(d.rays().count(), ks.rays().count());
}

#[test]
fn orthant_measures() {
    let q = gaussian_cone_measure(&Cone::orthant(2), &Method::quadrature()).unwrap();
    assert!((q.value - 0.25).abs() < 1e-6);
    let mc = gaussian_cone_measure(&Cone::orthant(3), &Method::monte_carlo(1_000_000, 3)).unwrap();
    assert!((mc.value - 0.125).abs() < 1e-4, "{}", mc.value);
    let q4 = gaussian_cone_measure(&Cone::orthant(4), &Method::quadrature()).unwrap();
    assert!((q4.value - 0.0625).abs() < 1e-6);
    let mc5 = gaussian_cone_measure(&Cone::orthant(5), &Method::monte_carlo(400_000, 3)).unwrap();
    assert!((mc5.value - 1.0 / 32.0).abs() < mc5.error.max(1e-4));
}

#[test]
fn four_dimensional_quadrature_agrees_with_monte_carlo() {
    let cone = Cone::new(vec![
        col(&[1.0, 0.2, 0.0, 0.0]),
        col(&[0.5, 1.0, 0.1, 0.0]),
        col(&[0.0, 0.4, 1.0, 0.3]),
        col(&[0.2, 0.0, -0.3, 1.0]),
    ])
    .unwrap();
    let coarse = gaussian_cone_measure(&cone, &Method::quadrature()).unwrap();
    let q = gaussian_cone_measure(&cone, &Method::quadrature().doubled()).unwrap();
    let mc = gaussian_cone_measure(&cone, &Method::monte_carlo(1_000_000, 9)).unwrap();
    assert!(q.error < coarse.error);
    assert!((q.value - coarse.value).abs() < coarse.error);
    assert!((q.value - mc.value).abs() < mc.error + q.error, "{} vs {}", q.value, mc.value);
}

#[test]
fn lines_and_lower_dimensional_cones() {
    let plane = Cone::with_lines(2, vec![col(&[1.0, 0.0]), col(&[0.0, 1.0])], vec![true, true]).unwrap();
    assert!((gaussian_cone_measure(&plane, &Method::quadrature()).unwrap().value - 1.0).abs() < 1e-12);
    let slab = Cone::with_lines(3, vec![col(&[1.0, 0.0, 0.0]), col(&[0.0, 1.0, 1.0]), col(&[0.0, 1.0, -1.0])], vec![
        true, false, false,
    ])
    .unwrap();
    assert!((gaussian_cone_measure(&slab, &Method::quadrature()).unwrap().value - 0.25).abs() < 1e-9);
    let flat = Cone::new(vec![col(&[1.0, 0.0, 0.0]), col(&[0.0, 1.0, 0.0])]).unwrap();
    assert_eq!(gaussian_cone_measure(&flat, &Method::quadrature()).unwrap().value, 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn monte_carlo_matches_closed_form_in_three_dimensions(
        v in prop::collection::vec(-1.0f64..1.0, 9),
        seed in 0u64..1000,
    ) {
        let a = [v[0] + 2.0, v[1], v[2]];
        let b = [v[3], v[4] + 2.0, v[5]];
        let c = [v[6], v[7], v[8] + 2.0];
        let exact = simplicial_fraction(a, b, c);
        let cone = Cone::new(vec![col(&a), col(&b), col(&c)]).unwrap();
        let closed = gaussian_cone_measure(&cone, &Method::quadrature()).unwrap();
        prop_assert!((closed.value - exact).abs() < 1e-12);
        let mc = gaussian_cone_measure(&cone, &Method::monte_carlo(200_000, seed)).unwrap();
        prop_assert!((mc.value - exact).abs() < 5.0 / 3.0 * mc.error, "{} vs {exact}", mc.value);
    }

    #[test]
    fn measure_is_rotation_invariant(seed in prop::collection::vec(-1.0f64..1.0, 16)) {
        for k in 2..=4 {
            let q = rotation(k, &seed);
            let base = Cone::orthant(k);
            let m = gaussian_cone_measure(&base.transform(&q), &Method::quadrature()).unwrap();
            prop_assert!((m.value - 0.5f64.powi(k as i32)).abs() < 1e-6, "k={k}: {}", m.value);
        }
        let q3 = rotation(3, &seed);
        let mc = gaussian_cone_measure(&Cone::orthant(3).transform(&q3), &Method::monte_carlo(1_000_000, 3)).unwrap();
        prop_assert!((mc.value - 0.125).abs() < 1e-4 + mc.error / 3.0, "{}", mc.value);
    }
}
