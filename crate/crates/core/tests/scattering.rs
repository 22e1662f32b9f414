use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use scatter_core::lattice::{DualVector, LatticeVector};
use scatter_core::scattering::{
    diagrams_equivalent, ks_complete, ks_complete_with, reverse_crossings, standard_pair, Diagram, InsertionOrder,
    Support, Wall,
};
use scatter_core::series::TruncatedSeries;
use scatter_core::tropical::{group_equal, GroupElement, LieElement};

fn lv(x: i64, y: i64) -> LatticeVector {
    LatticeVector::new(x, y)
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn ray_log(d: &Diagram, m: LatticeVector) -> Option<LieElement> {
    d.rays().find(|w| w.direction() == m).map(|w| w.log_theta().clone())
}

#[test]
fn simple_inputs_produce_one_ray() {
    let (w1, w2) = standard_pair(6, 1).unwrap();
    let d = ks_complete(&w1, &w2, 6).unwrap();
    let rays: Vec<&Wall> = d.rays().collect();
    assert_eq!(rays.len(), 1);
    assert_eq!(rays[0].direction(), lv(1, 1));
    let expected = LieElement::log_binomial(6, lv(1, 1), 2, BigRational::one()).unwrap();
    assert_eq!(rays[0].log_theta(), &expected);
    assert!(d.is_consistent().unwrap());
}

/// Direct composition on the generators x = z^(1,0), y = z^(0,1): going around the
/// loop through the two lines and the (1,1) ray must fix both generators.
#[test]
fn simple_ray_fixes_generators_by_direct_substitution() {
    let n = 6;
    let (w1, w2) = standard_pair(n, 1).unwrap();
    let d = ks_complete(&w1, &w2, n).unwrap();
    let g = d.loop_product(d.standard_base_angle()).unwrap();
    let [gx, gy] = g.generator_images().unwrap();
    assert_eq!(gx, TruncatedSeries::monomial(n, lv(1, 0), 0, BigRational::one()));
    assert_eq!(gy, TruncatedSeries::monomial(n, lv(0, 1), 0, BigRational::one()));

    // the bare pair without the ray is inconsistent
    let bare = Diagram::new(n, vec![w1, w2]).unwrap();
    assert!(!bare.is_consistent().unwrap());
}

/// `f^e` for a series with unit constant term.
fn power(f: &TruncatedSeries, e: i64) -> TruncatedSeries {
    let base = if e < 0 { f.inv().unwrap() } else { f.clone() };
    let mut out = TruncatedSeries::one(f.order());
    for _ in 0..e.abs() {
        out = out.try_mul(&base).unwrap();
    }
    out
}

/// Applies `z^p -> z^p f^(sigma <p, n>)` term by term.
fn substitute(g: &TruncatedSeries, f: &TruncatedSeries, n: DualVector, sigma: i64) -> TruncatedSeries {
    let mut out = TruncatedSeries::zero(g.order());
    for (k, c) in g.terms() {
        let e = sigma * (k.m.x * n.x + k.m.y * n.y);
        let mono = TruncatedSeries::monomial(g.order(), k.m, k.j, c.clone());
        out = out.try_add(&mono.try_mul(&power(f, e)).unwrap()).unwrap();
    }
    out
}

/// The loop through the two lines and the `(1,1)` ray, with every wall applied as an
/// explicit substitution of monomials rather than through the Lie algebra.
#[test]
fn loop_is_trivial_by_explicit_substitution() {
    let n = 6;
    let (w1, w2) = standard_pair(n, 1).unwrap();
    let d = ks_complete(&w1, &w2, n).unwrap();
    let one = BigRational::one();
    let binomial = |m: LatticeVector, j: u32| {
        TruncatedSeries::from_terms(n, [(LatticeVector::ZERO, 0, one.clone()), (m, j, one.clone())])
    };
    let crossings = d.crossings_of_loop(d.standard_base_angle()).unwrap();
    assert_eq!(crossings.len(), 5);
    let mut closed = true;
    let mut single_wall_moves = false;
    for gen in [lv(1, 0), lv(0, 1)] {
        let start = TruncatedSeries::monomial(n, gen, 0, one.clone());
        let mut g = start.clone();
        for c in &crossings {
            let w = &d.walls()[c.wall];
            let f = if w.direction() == lv(1, 1) { binomial(lv(1, 1), 2) } else { binomial(w.direction(), 1) };
            let next = substitute(&g, &f, w.primitive_normal(), c.sigma as i64);
            let via_lie = GroupElement::exp(if c.sigma > 0 { w.log_theta().clone() } else { w.log_theta().neg() })
                .apply(&g)
                .unwrap();
            assert_eq!(next, via_lie);
            single_wall_moves |= next != g;
            g = next;
        }
        closed &= g == start;
    }
    assert!(single_wall_moves);
    assert!(closed);
}

#[test]
fn doubled_inputs_are_consistent_and_order_independent() {
    let (w1, w2) = standard_pair(4, 2).unwrap();
    let asc = ks_complete_with(&w1, &w2, 4, InsertionOrder::Ascending).unwrap();
    let desc = ks_complete_with(&w1, &w2, 4, InsertionOrder::Descending).unwrap();
    assert!(asc.is_consistent().unwrap());
    assert!(desc.is_consistent().unwrap());
    assert!(diagrams_equivalent(&asc, &desc).unwrap());
    for m in [lv(1, 1), lv(2, 1), lv(1, 2)] {
        assert!(ray_log(&asc, m).is_some(), "missing ray {m}");
    }
}

#[test]
fn doubled_coefficients_match_known_counts() {
    let (w1, w2) = standard_pair(4, 2).unwrap();
    let d = ks_complete(&w1, &w2, 4).unwrap();
    let r11 = ray_log(&d, lv(1, 1)).unwrap();
    assert_eq!(r11.basis_coeff(lv(1, 1), 2), int(4));
    let n11 = DualVector::new(-1, 1);
    assert_eq!(r11.coeff_along(lv(1, 1), 2, n11), int(4));
    assert_eq!(r11.coeff_along(lv(2, 2), 4, n11), int(2));
    let n21 = DualVector::new(-1, 2);
    let r21 = ray_log(&d, lv(2, 1)).unwrap();
    assert_eq!(r21.coeff_along(lv(2, 1), 3, n21), int(2));
    let n12 = DualVector::new(-2, 1);
    let r12 = ray_log(&d, lv(1, 2)).unwrap();
    assert_eq!(r12.coeff_along(lv(1, 2), 3, n12), int(2));
}

#[test]
fn completion_is_stable_under_truncation() {
    for mult in [1, 2] {
        let top = if mult == 1 { 6 } else { 5 };
        let (w1, w2) = standard_pair(top, mult).unwrap();
        let full = ks_complete(&w1, &w2, top).unwrap();
        for k in 2..top {
            let (a, b) = standard_pair(k, mult).unwrap();
            let low = ks_complete(&a, &b, k).unwrap();
            let cut = full.truncate(k).minimize();
            assert!(diagrams_equivalent(&cut, &low.minimize()).unwrap(), "mult {mult}, order {k}");
            assert!(cut.is_consistent().unwrap());
        }
    }
}

#[test]
fn reversed_loop_gives_the_inverse() {
    let (w1, w2) = standard_pair(4, 2).unwrap();
    let bare = Diagram::new(4, vec![w1, w2]).unwrap();
    let base = bare.standard_base_angle();
    let c = bare.crossings_of_loop(base).unwrap();
    let g = bare.path_ordered_product(&c).unwrap();
    let back = bare.path_ordered_product(&reverse_crossings(&c)).unwrap();
    assert!(g.compose(&back).unwrap().is_identity().unwrap());
    assert!(group_equal(&back, &g.inverse()).unwrap());
}

#[test]
fn base_point_does_not_change_consistency() {
    let (w1, w2) = standard_pair(4, 2).unwrap();
    let d = ks_complete(&w1, &w2, 4).unwrap();
    for base in [0.1, 1.0, 2.5, 3.3, 4.4, 5.9] {
        assert!(d.loop_product(base).unwrap().is_identity().unwrap(), "base angle {base}");
    }
}

#[test]
fn corrupted_crossing_sign_breaks_consistency() {
    let (w1, w2) = standard_pair(6, 1).unwrap();
    let d = ks_complete(&w1, &w2, 6).unwrap();
    let mut c = d.crossings_of_loop(d.standard_base_angle()).unwrap();
    assert!(d.path_ordered_product(&c).unwrap().is_identity().unwrap());
    for i in 0..c.len() {
        let mut bad = c.clone();
        bad[i].sigma = -bad[i].sigma;
        assert!(!d.path_ordered_product(&bad).unwrap().is_identity().unwrap(), "flip at {i}");
    }
    c.reverse();
    assert!(!d.path_ordered_product(&c).unwrap().is_identity().unwrap());
}

#[test]
fn diagram_json_round_trip() {
    let (w1, w2) = standard_pair(4, 2).unwrap();
    let d = ks_complete(&w1, &w2, 4).unwrap();
    let js = serde_json::to_string(&d.to_json()).unwrap();
    let back = Diagram::from_json(&serde_json::from_str(&js).unwrap()).unwrap();
    assert_eq!(back, d);
    assert!(back.is_consistent().unwrap());
}

#[test]
fn wall_validation() {
    let log = LieElement::log_binomial(3, lv(1, 0), 1, BigRational::one()).unwrap();
    assert!(Wall::new(lv(2, 0), Support::Line, log.clone()).is_err());
    assert!(Wall::new(lv(0, 1), Support::Line, log.clone()).is_err());
    assert!(Wall::new(lv(0, 0), Support::Ray, log.clone()).is_err());
    assert!(Wall::new(lv(1, 0), Support::Line, log).is_ok());
    let trivial = Wall::new(lv(1, 0), Support::Ray, LieElement::zero(3)).unwrap();
    assert!(trivial.is_trivial());
    assert!(BigRational::zero().is_zero());
}

#[test]
fn parallel_inputs_are_rejected() {
    let (w1, _) = standard_pair(3, 1).unwrap();
    assert!(ks_complete(&w1, &w1, 3).is_err());
}
