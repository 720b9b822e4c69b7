//! Intersection numbers on the Kawamata blowup against a trilinear expansion.

use fano_rigidity_core::blowup::{e_cubed, ivr, nef_pairing, weight_product, y_triple, BlowupClass, QuotientPoint};
use fano_rigidity_core::candidate::lookup;
use fano_rigidity_core::{residue, CoordSet, Rational};
use proptest::prelude::*;

/// `(-n phi^*K - lam E)` expanded in the basis `H = -phi^*K`, `E` with
/// `H^3 = k3`, `E^3 = r^2/wp` and all mixed products zero.
fn expand(classes: [&BlowupClass; 3], p: &QuotientPoint, k3: &Rational) -> Rational {
    let table = |hs: usize| match hs {
        3 => k3.clone(),
        0 => e_cubed(p),
        _ => Rational::zero(),
    };
    let mut total = Rational::zero();
    for mask in 0..8u32 {
        let mut coeff = Rational::one();
        let mut hs = 0;
        for (i, c) in classes.iter().enumerate() {
            if mask & (1 << i) != 0 {
                coeff = &coeff * &c.n;
                hs += 1;
            } else {
                coeff = &coeff * &(-&c.lam);
            }
        }
        total = &total + &(&coeff * &table(hs));
    }
    total
}

fn small() -> impl Strategy<Value = Rational> {
    (-40i64..40, 1i64..12).prop_map(|(n, d)| Rational::new(n, d))
}

fn class() -> impl Strategy<Value = BlowupClass> {
    (small(), small()).prop_map(|(n, l)| BlowupClass::new(n, l))
}

fn point() -> impl Strategy<Value = QuotientPoint> {
    (2u32..14, 1u32..13).prop_filter_map("terminal", |(r, a)| QuotientPoint::new(r, a % r, None).ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn y_triple_matches_expansion(a in class(), b in class(), c in class(), p in point(), k3 in small()) {
        prop_assert_eq!(y_triple(&a, &b, &c, &p, &k3), expand([&a, &b, &c], &p, &k3));
    }

    #[test]
    fn y_triple_symmetric(a in class(), b in class(), c in class(), p in point(), k3 in small()) {
        let v = y_triple(&a, &b, &c, &p, &k3);
        prop_assert_eq!(&v, &y_triple(&b, &a, &c, &p, &k3));
        prop_assert_eq!(&v, &y_triple(&c, &b, &a, &p, &k3));
        prop_assert_eq!(&v, &y_triple(&a, &c, &b, &p, &k3));
    }

    #[test]
    fn y_triple_multilinear(a in class(), a2 in class(), b in class(), c in class(), s in small(), p in point(), k3 in small()) {
        let lhs = y_triple(&a.scale(&s).add(&a2), &b, &c, &p, &k3);
        let rhs = &(&s * &y_triple(&a, &b, &c, &p, &k3)) + &y_triple(&a2, &b, &c, &p, &k3);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn nef_pairing_is_triple_with_anticanonical(n in class(), p in point(), k3 in small()) {
        let minus_ky = BlowupClass::anticanonical(&p);
        prop_assert_eq!(nef_pairing(&n, &p, &k3), expand([&n, &minus_ky, &minus_ky], &p, &k3));
    }

    #[test]
    fn residue_is_periodic(a in -500i64..500, r in 1u32..30, k in -5i64..5) {
        let x = residue(a, r);
        prop_assert!(x >= 1 && x <= r);
        prop_assert_eq!(x, residue(a + k * i64::from(r), r));
        prop_assert_eq!((i64::from(x) - a).rem_euclid(i64::from(r)), 0);
    }

    #[test]
    fn ivr_is_min_over_singletons(bits in 1u64..256) {
        let c = lookup("#25").unwrap();
        let k = 1;
        let set = CoordSet::from_indices((0..8).filter(|&i| i != k && bits & (1 << i) != 0));
        prop_assume!(!set.is_empty());
        let p = QuotientPoint::new(5, 1, Some(k)).unwrap();
        let whole = ivr(&c.space, &p, set).unwrap();
        let min = set.iter().map(|i| ivr(&c.space, &p, CoordSet::single(i)).unwrap()).min().unwrap();
        prop_assert_eq!(whole, min);
        for i in set.iter() {
            let a = i64::from(c.space.weight(i));
            let single = ivr(&c.space, &p, CoordSet::single(i)).unwrap();
            prop_assert_eq!(single, Rational::new(i64::from(residue(a, 5)), a * 5));
        }
    }
}

#[test]
fn e_cubed_golden() {
    let q = |r, a| QuotientPoint::new(r, a, None).unwrap();
    assert_eq!(e_cubed(&q(5, 2)), Rational::new(25, 6));
    assert_eq!(e_cubed(&q(6, 1)), Rational::new(36, 5));
    assert_eq!(e_cubed(&q(2, 1)), Rational::integer(4));
    assert_eq!(weight_product(&q(7, 1)), 6);
}
