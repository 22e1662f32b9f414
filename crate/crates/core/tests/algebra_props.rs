use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use scatter_core::lattice::{det, pairing, primitive_part, LatticeVector};
use scatter_core::series::TruncatedSeries;
use scatter_core::tropical::{group_equal, GroupElement, LieElement};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn lie(order: u32) -> impl Strategy<Value = LieElement> {
    prop::collection::vec(((-2i64..=2, -2i64..=2), 1..=order, -3i64..=3, 1i64..=3), 0..5).prop_map(move |ts| {
        let mut x = LieElement::zero(order);
        for ((a, b), j, n, d) in ts {
            let m = LatticeVector::new(a, b);
            if !m.is_zero() {
                x.add_basis_term(m, j, q(n, d)).unwrap();
            }
        }
        x
    })
}

fn series(order: u32) -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec(((-2i64..=2, -2i64..=2), 0..=order, -3i64..=3, 1i64..=3), 0..6).prop_map(move |ts| {
        TruncatedSeries::from_terms(order, ts.into_iter().map(|((a, b), j, n, d)| (LatticeVector::new(a, b), j, q(n, d))))
    })
}

/// Series with constant term 1 and all other terms of positive `t`-degree.
fn unipotent(order: u32) -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec(((-2i64..=2, -2i64..=2), 1..=order, -3i64..=3, 1i64..=3), 0..5).prop_map(move |ts| {
        let mut f = TruncatedSeries::one(order);
        for ((a, b), j, n, d) in ts {
            f.add_term(LatticeVector::new(a, b), j, q(n, d));
        }
        f
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn bracket_is_antisymmetric(x in lie(5), y in lie(5)) {
        let xy = x.try_bracket(&y).unwrap();
        let yx = y.try_bracket(&x).unwrap();
        prop_assert_eq!(xy, yx.neg());
    }

    #[test]
    fn jacobi_identity(x in lie(5), y in lie(5), z in lie(5)) {
        let a = x.try_bracket(&y.try_bracket(&z).unwrap()).unwrap();
        let b = y.try_bracket(&z.try_bracket(&x).unwrap()).unwrap();
        let c = z.try_bracket(&x.try_bracket(&y).unwrap()).unwrap();
        prop_assert!(a.try_add(&b).unwrap().try_add(&c).unwrap().is_zero());
    }

    #[test]
    fn derivation_is_a_lie_homomorphism(x in lie(4), y in lie(4), f in series(4)) {
        let lhs = x.try_bracket(&y).unwrap().derive(&f);
        let rhs = x.derive(&y.derive(&f)).try_sub(&y.derive(&x.derive(&f))).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn derivation_obeys_leibniz(x in lie(4), f in series(4), g in series(4)) {
        let lhs = x.derive(&f.try_mul(&g).unwrap());
        let rhs = x.derive(&f).try_mul(&g).unwrap().try_add(&f.try_mul(&x.derive(&g)).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn series_invariants_hold(f in series(4), g in series(4)) {
        for h in [f.try_add(&g).unwrap(), f.try_mul(&g).unwrap(), f.try_sub(&f).unwrap()] {
            prop_assert!(h.terms().all(|(k, c)| k.j <= 4 && *c != q(0, 1)));
        }
        prop_assert_eq!(f.try_mul(&g).unwrap(), g.try_mul(&f).unwrap());
    }

    #[test]
    fn exp_log_round_trip(f in unipotent(4)) {
        let l = f.log().unwrap();
        prop_assert_eq!(l.exp().unwrap(), f.clone());
        prop_assert_eq!(f.try_mul(&f.inv().unwrap()).unwrap(), TruncatedSeries::one(4));
    }

    #[test]
    fn lie_json_round_trip(x in lie(5)) {
        let text = serde_json::to_string(&x.to_json()).unwrap();
        let back = LieElement::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn primitive_part_reconstructs(a in -50i64..50, b in -50i64..50) {
        prop_assume!(a != 0 || b != 0);
        let m = LatticeVector::new(a, b);
        let (m0, k) = primitive_part(m).unwrap();
        prop_assert!(k >= 1);
        prop_assert_eq!(m0.scale(k), m);
        prop_assert_eq!(pairing(m, m.rot90()), 0);
        prop_assert_eq!(det(m0, LatticeVector::new(1, 0)) * k, det(m, LatticeVector::new(1, 0)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn bch_matches_composition(x in lie(6), y in lie(6)) {
        let z = x.try_bch(&y).unwrap();
        let gx = GroupElement::exp(x.clone());
        let gy = GroupElement::exp(y.clone());
        let gz = GroupElement::exp(z.clone());
        for gen in [LatticeVector::new(1, 0), LatticeVector::new(0, 1)] {
            let f = TruncatedSeries::monomial(6, gen, 0, q(1, 1));
            prop_assert_eq!(gz.apply(&f).unwrap(), gx.apply(&gy.apply(&f).unwrap()).unwrap());
        }
        prop_assert!(group_equal(&gz, &gx.compose(&gy).unwrap()).unwrap());
        let back = z.try_bch(&y.neg()).unwrap();
        prop_assert_eq!(back, x);
    }
}
