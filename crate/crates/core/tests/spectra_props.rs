use std::cmp::Ordering;

use proptest::prelude::*;
use spectra::apps::{app1_spec, app2_perron};
use spectra::exact::QuadraticSurd;
use spectra::hall::{f4_cantor, f4_max, f4_min, interval_solver, Bivariate};
use spectra::mg2::{fibonacci_row, mordell_constant_periodic};
use spectra::perron::{accumulation_sequence, period_extremum, tau_enumerate, Family, Limit};
use spectra::{ExpansionSequence, PerronSpec, Real, Term};

fn period() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(1u64..5, 1..5)
}

fn unit_rational() -> impl Strategy<Value = Real> {
    (1i64..97).prop_map(|p| Real::ratio(p, 97))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn perron_extrema_ignore_rotation(p in period(), r in 0usize..6) {
        let r = r % p.len();
        let q: Vec<u64> = p[r..].iter().chain(&p[..r]).copied().collect();
        for spec in [PerronSpec::markov(), PerronSpec::mordell_gruber()] {
            for lim in [Limit::Inf, Limit::Sup] {
                prop_assert_eq!(period_extremum(&spec, &p, lim).unwrap().0, period_extremum(&spec, &q, lim).unwrap().0);
            }
        }
    }

    #[test]
    fn mordell_constant_at_least_golden(p in period()) {
        let (v, _) = mordell_constant_periodic(&ExpansionSequence::periodic(p.clone())).unwrap();
        let floor = QuadraticSurd::new(5, 1, 5, 10).unwrap();
        let ord = v.cmp_exact(&floor);
        prop_assert!(ord != Ordering::Less);
        prop_assert_eq!(ord == Ordering::Equal, p.iter().all(|&x| x == 1));
    }

    #[test]
    fn app2_symmetric(a in unit_rational(), b in unit_rational(), d in 1u64..12) {
        prop_assert_eq!(app2_perron(&a, &b, d).unwrap(), app2_perron(&b, &a, d).unwrap());
    }

    #[test]
    fn app1_reflection(a in unit_rational(), b in unit_rational(), m in -2i64..4, c in prop::collection::vec(1u64..5, 3)) {
        let spec = app1_spec(m);
        let c: Vec<Term> = c[..spec.arity].iter().map(|&x| Term::Fin(x)).collect();
        let rev: Vec<Term> = c.iter().rev().copied().collect();
        prop_assert_eq!(spec.apply(&a, &b, &c).unwrap(), spec.apply(&b, &a, &rev).unwrap());
    }

    #[test]
    fn accumulation_idempotent(p in period()) {
        let s = ExpansionSequence::periodic(p);
        let first = accumulation_sequence(&Family::Cyclic(vec![s.clone()]), 4).unwrap();
        for (k, t) in &first.terms {
            prop_assert_eq!(Some(*t), s.term_at(*k));
        }
        let again = accumulation_sequence(&Family::Cyclic(vec![first.sequence()]), 4).unwrap();
        prop_assert_eq!(again.terms, first.terms);
    }

    #[test]
    fn fibonacci_rows_climb(t in 1usize..12) {
        let bound = QuadraticSurd::new(1, 1, 5, 4).unwrap();
        let (x, y) = (fibonacci_row(t).unwrap(), fibonacci_row(t + 1).unwrap());
        prop_assert_eq!(x.cmp_exact(&y), Ordering::Less);
        prop_assert_eq!(y.cmp_exact(&bound), Ordering::Less);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn solver_witness_in_set(s in 0u32..=1000, pq in prop::sample::select(vec![(1i64, 1i64), (4, 5), (5, 4)])) {
        let g = Bivariate::linear(pq.0, pq.1);
        let (lo, hi) = (f4_min().to_f64(), f4_max().to_f64());
        let w = (pq.0 + pq.1) as f64;
        let h = Real::ratio(((lo + (hi - lo) * s as f64 / 1000.0) * w * 1e6).round() as i64, 1_000_000);
        prop_assume!(h.to_f64() >= lo * w && h.to_f64() <= hi * w);
        let c = f4_cantor();
        let tol = 1e-9;
        let wit = interval_solver(&g, &c, &c, &h, tol).unwrap();
        prop_assert!(wit.residual <= tol);
        prop_assert!((g.eval(&wit.alpha, &wit.beta).unwrap().to_f64() - h.to_f64()).abs() <= tol + 1e-12);
        prop_assert!(c.contains(&wit.alpha, 8).unwrap());
        prop_assert!(c.contains(&wit.beta, 8).unwrap());
    }
}

#[test]
fn tau_enumeration_is_deterministic() {
    let spec = PerronSpec::mordell_gruber();
    let a = tau_enumerate(&spec, Limit::Sup, 4, 3).unwrap();
    let b = tau_enumerate(&spec, Limit::Sup, 4, 3).unwrap();
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.value, y.value);
        assert_eq!(x.witness_period, y.witness_period);
    }
    assert!(a.windows(2).all(|w| w[0].value.try_cmp(&w[1].value).unwrap() == Ordering::Less));
}
