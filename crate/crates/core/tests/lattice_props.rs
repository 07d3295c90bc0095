use proptest::prelude::*;
use spectra::lattice::{
    indices_from_pivots, reconstruct_biinfinite, reconstruct_general, shift_canonical, shift_canonical_seq, shortest_l2_f64,
};
use spectra::systole::{spectrum_value_periodic, SpectrumKind};
use spectra::{ExpansionSequence, Real};

fn period() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(1u64..6, 1..5)
}

fn rotate(p: &[u64], r: usize) -> Vec<u64> {
    let r = r % p.len();
    p[r..].iter().chain(&p[..r]).copied().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pivots_round_trip(p in period()) {
        let s = ExpansionSequence::periodic(p);
        let (lat, chain) = reconstruct_biinfinite(&s, 8).unwrap();
        prop_assert!(lat.is_unimodular());
        prop_assert!(chain.alternates());
        let back = indices_from_pivots(&chain).unwrap();
        for k in -7..8 {
            prop_assert_eq!(back.term_at(k), s.term_at(k), "k = {}", k);
        }
    }

    #[test]
    fn pivot_heights_increase(p in period()) {
        let (_, chain) = reconstruct_biinfinite(&ExpansionSequence::periodic(p), 6).unwrap();
        let pts = chain.pivots_f64();
        prop_assert!(pts.windows(2).all(|w| w[0][1] < w[1][1]));
        prop_assert!(pts.windows(2).all(|w| w[0][0].abs() > w[1][0].abs()));
    }

    #[test]
    fn canonical_rotation(p in period(), r in 0usize..8) {
        let c = shift_canonical(&p);
        prop_assert_eq!(shift_canonical(&rotate(&p, r)), c.clone());
        prop_assert_eq!(shift_canonical(&c), c.clone());
        prop_assert!((0..p.len()).any(|k| rotate(&p, k) == c));
        let s = shift_canonical_seq(&ExpansionSequence::periodic(p)).unwrap();
        prop_assert_eq!(s.pure_period(), Some(c.as_slice()));
    }

    #[test]
    fn spectra_ignore_rotation(p in period(), r in 0usize..8) {
        let a = ExpansionSequence::periodic(p.clone());
        let b = ExpansionSequence::periodic(rotate(&p, r));
        for kind in [SpectrumKind::Lagrange, SpectrumKind::MordellGruber] {
            let va = spectrum_value_periodic(&a, kind).unwrap().value;
            let vb = spectrum_value_periodic(&b, kind).unwrap().value;
            prop_assert_eq!(va, vb);
        }
    }

    #[test]
    fn general_lattice_is_unimodular(a in 0i64..50, b in 0i64..50) {
        let (alpha, beta) = (Real::ratio(a, 50), Real::ratio(b, 50));
        let lat = reconstruct_general(&alpha, &beta).unwrap();
        prop_assert!(lat.is_unimodular());
        let l2 = shortest_l2_f64(&lat.to_f64());
        // Hermite: λ₁² ≤ 2/√3 for covolume 1
        prop_assert!(l2 * l2 <= 2.0 / 3f64.sqrt() + 1e-12);
    }
}
