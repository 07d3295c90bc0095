use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;
use spectra::exact::{parse_rational, precision_bits, rational_string, QuadraticSurd, Rational, Real, ValidatedInterval};

fn surd() -> impl Strategy<Value = QuadraticSurd> {
    (-50i64..50, -20i64..20, prop::sample::select(vec![2i64, 3, 5, 6, 7]), 1i64..30)
        .prop_map(|(p, q, d, r)| QuadraticSurd::new(p, q, d, r).unwrap())
}

fn same_field() -> impl Strategy<Value = (QuadraticSurd, QuadraticSurd)> {
    (prop::sample::select(vec![2i64, 3, 5]), -40i64..40, -15i64..15, 1i64..20, -40i64..40, -15i64..15, 1i64..20).prop_map(
        |(d, p1, q1, r1, p2, q2, r2)| {
            (QuadraticSurd::new(p1, q1, d, r1).unwrap(), QuadraticSurd::new(p2, q2, d, r2).unwrap())
        },
    )
}

fn rational() -> impl Strategy<Value = Rational> {
    (-1000i64..1000, 1i64..500).prop_map(|(p, q)| Rational::new(BigInt::from(p), BigInt::from(q)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn canonical_form_is_reduced(s in surd()) {
        prop_assert!(s.r() > &BigInt::from(0));
        let again = QuadraticSurd::new(s.p().clone(), s.q().clone(), s.d().clone(), s.r().clone()).unwrap();
        prop_assert_eq!(again, s);
    }

    #[test]
    fn field_ops_track_f64((a, b) in same_field()) {
        let sum = a.checked_add(&b).unwrap();
        let prod = a.checked_mul(&b).unwrap();
        prop_assert!((sum.to_f64() - (a.to_f64() + b.to_f64())).abs() < 1e-9);
        prop_assert!((prod.to_f64() - a.to_f64() * b.to_f64()).abs() < 1e-8 * (1.0 + prod.to_f64().abs()));
        prop_assert_eq!(sum.checked_sub(&b).unwrap(), a.clone());
        if !b.is_zero() {
            prop_assert_eq!(prod.checked_div(&b).unwrap().unwrap(), a);
        }
    }

    #[test]
    fn recip_inverts(s in surd()) {
        prop_assume!(!s.is_zero());
        let inv = s.recip().unwrap();
        prop_assert_eq!(s.checked_mul(&inv).unwrap(), QuadraticSurd::one());
    }

    #[test]
    fn cmp_agrees_with_f64((a, b) in same_field()) {
        let (x, y) = (a.to_f64(), b.to_f64());
        let ord = a.cmp_exact(&b);
        prop_assert_eq!(ord, b.cmp_exact(&a).reverse());
        if (x - y).abs() > 1e-9 {
            prop_assert_eq!(ord, x.partial_cmp(&y).unwrap());
        }
        prop_assert_eq!(ord == Ordering::Equal, a == b);
    }

    #[test]
    fn cross_field_cmp(a in surd(), b in surd()) {
        let (x, y) = (a.to_f64(), b.to_f64());
        prop_assume!((x - y).abs() > 1e-9);
        prop_assert_eq!(Real::Exact(a).try_cmp(&Real::Exact(b)).unwrap(), x.partial_cmp(&y).unwrap());
    }

    #[test]
    fn enclosure_contains_value(s in surd(), bits in 40u32..200) {
        let iv = ValidatedInterval::from_surd(&s, bits);
        if let Some(q) = s.to_rational() {
            prop_assert!(iv.contains(&q));
        }
        let x = s.to_f64();
        prop_assert!(iv.lo().to_f64() <= x && x <= iv.hi().to_f64());
        // outward rounding to the working precision caps the resolution
        let eff = bits.min(precision_bits()) as i32;
        prop_assert!(iv.width_f64() <= 2f64.powi(-eff + 4));
    }

    #[test]
    fn interval_ops_contain_point_results(a in rational(), b in rational(), c in rational()) {
        let (lo, hi) = if a <= b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
        let i = ValidatedInterval::from_rationals(lo, hi).unwrap();
        let j = ValidatedInterval::point(&c);
        prop_assert!(i.add(&j).contains(&(&a + &c)));
        prop_assert!(i.sub(&j).contains(&(&b - &c)));
        prop_assert!(i.mul(&j).contains(&(&a * &c)));
        prop_assert!(i.neg().contains(&-b.clone()));
        if !c.is_zero() {
            prop_assert!(i.div(&j).unwrap().contains(&(&a / &c)));
        }
        prop_assert!(i.subset_of(&i.hull(&j)) && j.subset_of(&i.hull(&j)));
    }

    #[test]
    fn rational_text_round_trip(x in rational()) {
        prop_assert_eq!(parse_rational(&rational_string(&x)), Some(x));
    }

    #[test]
    fn sqrt_of_square(x in rational()) {
        let sq = Real::rational(&(&x * &x));
        let r = sq.sqrt().unwrap();
        prop_assert_eq!(r, Real::rational(&if x < Rational::from_integer(0.into()) { -x } else { x }));
    }
}
