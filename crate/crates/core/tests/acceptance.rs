//! Acceptance criteria; prints one PASS/FAIL line per criterion.

use std::cmp::Ordering;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spectra::apps::{self, Target};
use spectra::cfrac::{truncation_interval, ExpansionSequence};
use spectra::hall::{aperture_ratio, f4_cantor, f4_min, interval_solver, Bivariate, CantorSet};
use spectra::lattice::{best_approximants, indices_from_pivots, reconstruct_biinfinite, Lattice2D};
use spectra::mg2::{self, fibonacci_row, mordell_constant_periodic};
use spectra::systole::{local_extrema, mordell_l2, spectrum_value_periodic, LogSystole, SpectrumKind, DEFAULT_L2_STEP};
use spectra::{QuadraticSurd, Rational, Real};

type Outcome = Result<String, String>;

fn surd(p: i64, q: i64, d: i64, r: i64) -> Real {
    Real::Exact(QuadraticSurd::new(p, q, d, r).unwrap())
}

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn spec_value(period: &[u64], kind: SpectrumKind) -> Real {
    spectrum_value_periodic(&ExpansionSequence::periodic(period.to_vec()), kind).unwrap().value
}

fn c1_table() -> Outcome {
    for (p, want) in [(vec![1], surd(5, 1, 5, 10)), (vec![2, 1], surd(3, 1, 3, 6)), (vec![2, 1, 1, 1], surd(4, 1, 6, 8))] {
        let got = spec_value(&p, SpectrumKind::MordellGruber);
        check(got == want, format!("{p:?}: {got} ≠ {want}"))?;
    }
    let d = Real::Exact(mg2::golden_defect_value().map_err(|e| e.to_string())?);
    check(d == surd(1, 1, 5, 4), format!("(1̄,2,1̄): {d}"))?;
    Ok("three periodic rows and the limit row are exact".into())
}

fn c2_fibonacci() -> Outcome {
    for t in 1..=12 {
        let mut p = vec![2u64];
        p.extend(std::iter::repeat(1).take(2 * t - 1));
        let (direct, _) = mordell_constant_periodic(&ExpansionSequence::periodic(p)).map_err(|e| e.to_string())?;
        let closed = fibonacci_row(t).map_err(|e| e.to_string())?;
        check(direct.cmp_exact(&closed) == Ordering::Equal, format!("t = {t}: {direct} ≠ {closed}"))?;
    }
    Ok("t = 1..12 exact".into())
}

fn c3_markov() -> Outcome {
    for (p, want) in [(vec![1], 5), (vec![2], 8), (vec![1, 2], 12), (vec![3], 13)] {
        let got = spec_value(&p, SpectrumKind::Markov);
        check(got == surd(0, 1, want, 1), format!("{p:?}: {got}"))?;
    }
    let start = Instant::now();
    let rep = mg2::perron_gap_search(6, 4).map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    check(rep.pass, format!("{} values inside the gap", rep.interior.len()))?;
    check(rep.left.is_some() && rep.right.is_some(), "gap endpoints not witnessed")?;
    check(secs <= 120.0, format!("search took {secs:.1}s"))?;
    Ok(format!("{} distinct values, gap empty, {secs:.1}s", rep.checked))
}

fn c4_ternary() -> Outcome {
    let t = CantorSet::ternary();
    let g = Bivariate::sum();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut max_res: f64 = 0.0;
    for _ in 0..1000 {
        let num: u64 = rng.gen_range(0..=(1u64 << 40));
        let h = Real::rational(&Rational::new(BigInt::from(num), BigInt::from(1u64 << 39)));
        let w = interval_solver(&g, &t, &t, &h, 1e-9).map_err(|e| format!("h = {}: {e}", h.to_decimal(12)))?;
        let res = w.alpha.add(&w.beta).sub(&h).to_f64().abs();
        check(res <= 1e-9, format!("residual {res:e}"))?;
        let depth = w.depth.max(30);
        check(
            t.contains(&w.alpha, depth).unwrap() && t.contains(&w.beta, depth).unwrap(),
            format!("witness outside C_{depth}"),
        )?;
        max_res = max_res.max(res);
    }
    Ok(format!("1000 targets, max residual {max_res:.2e}"))
}

fn c5_mg2_segment() -> Outcome {
    let lo = Real::Exact(mg2::known_constants().hall_segment_lo).add(&Real::ratio(1, 1_000_000));
    let hi = Real::ratio(999, 1000);
    let span = hi.sub(&lo);
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let target = lo.add(&span.mul(&Real::ratio(i, 49)));
        let w = mg2::mg2_hall_certify(&target, 1e-9).map_err(|e| format!("target {}: {e}", target.to_decimal(12)))?;
        check(w.a0 >= 5 && w.a_minus1 >= 5, "bracket digits below 5")?;
        let trunc = mg2::truncate(&w.sequence, 80).map_err(|e| e.to_string())?;
        for k in 1..79 {
            let ok = [k as i64, -1 - k as i64]
                .iter()
                .all(|&j| trunc.term_at(j).and_then(|t| t.finite()).map_or(false, |a| a <= 4));
            check(ok, "a term off the centre exceeds 4")?;
        }
        let v = mg2::mordell_constant_window(&trunc, 20, 80).map_err(|e| e.to_string())?;
        let err = (v.to_f64() - target.to_f64()).abs();
        check(err <= 1e-8, format!("target {}: re-evaluated {}", target.to_decimal(12), v.to_decimal(12)))?;
        worst = worst.max(err);
    }
    Ok(format!("50 targets, max deviation {worst:.2e}"))
}

fn c6_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..100 {
        let len = rng.gen_range(1..=8);
        let p: Vec<u64> = (0..len).map(|_| rng.gen_range(1..=9)).collect();
        let s = ExpansionSequence::periodic(p.clone());
        let (_, chain) = reconstruct_biinfinite(&s, 20).map_err(|e| e.to_string())?;
        let back = indices_from_pivots(&chain).map_err(|e| e.to_string())?;
        let (lo, hi) = chain.index_range();
        check(hi - lo >= 20, format!("{p:?}: chain too short"))?;
        for k in (lo + 1)..hi {
            check(back.term_at(k) == s.term_at(k), format!("{p:?}: mismatch at offset {k}"))?;
        }
    }
    Ok("100 periods recovered exactly".into())
}

fn random_unimodular(rng: &mut ChaCha8Rng) -> [[f64; 2]; 2] {
    loop {
        let b: [[f64; 2]; 2] = [[rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)], [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)]];
        let det = b[0][0] * b[1][1] - b[0][1] * b[1][0];
        if det.abs() > 0.1 {
            let s = det.abs().sqrt();
            return [[b[0][0] / s, b[0][1] / s], [b[1][0] / s, b[1][1] / s]];
        }
    }
}

fn c7_sandwich() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let half_ln2 = 0.5 * 2f64.ln();
    for n in 0..50 {
        let lat = Lattice2D::from_f64(random_unimodular(&mut rng)).map_err(|e| e.to_string())?;
        let ls = LogSystole::new(&lat, 5.0).map_err(|e| e.to_string())?;
        let mut prev: Option<(f64, f64)> = None;
        for i in 0..=1000 {
            let t = -5.0 + i as f64 * 0.01;
            let (w, w2) = (ls.w(t), ls.w2(t));
            check(w <= w2 + 1e-12 && w2 <= w + half_ln2 + 1e-12, format!("lattice {n}, t = {t}: W = {w}, W2 = {w2}"))?;
            if let Some((pt, pw)) = prev {
                check((w - pw).abs() <= (t - pt).abs() + 1e-9, format!("lattice {n}, t = {t}: Lipschitz"))?;
            }
            prev = Some((t, w));
        }
    }
    Ok("50 lattices × 1001 grid points".into())
}

fn c8_l2() -> Outcome {
    let hex_target = (4.0f64 / 3.0).powf(0.25);
    let z = mordell_l2(&Lattice2D::integer(), None, DEFAULT_L2_STEP).map_err(|e| e.to_string())?.value;
    check((z - 1.0).abs() <= 1e-9, format!("integer lattice: {z}"))?;
    let h = mordell_l2(&Lattice2D::hexagonal(), None, DEFAULT_L2_STEP).map_err(|e| e.to_string())?.value;
    check((h - hex_target).abs() <= 1e-9, format!("hexagonal lattice: {h}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for n in 0..20 {
        let lat = Lattice2D::from_f64(random_unimodular(&mut rng)).map_err(|e| e.to_string())?;
        let v = mordell_l2(&lat, None, DEFAULT_L2_STEP).map_err(|e| e.to_string())?.value;
        check(v >= 1.0 - 1e-9 && v <= hex_target + 1e-9, format!("random lattice {n}: {v}"))?;
    }
    Ok(format!("Z² = {z:.12}, hexagonal = {h:.12}"))
}

fn c9_truncation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..200 {
        let big = rng.gen_bool(0.3);
        let terms: Vec<u64> = (0..24).map(|_| if big { rng.gen_range(1..=1000) } else { rng.gen_range(1..=3) }).collect();
        let s = ExpansionSequence::finite(terms.clone(), false);
        for n in 0..=20 {
            let w = truncation_interval(&s, n).map_err(|e| e.to_string())?.width().ok_or("unbounded")?;
            let bound = Rational::new(1.into(), BigInt::from(1u64) << n);
            check(w <= bound, format!("{terms:?}, n = {n}: width {w}"))?;
        }
    }
    Ok("200 sequences, n = 0..20".into())
}

/// `p/q` with `|qα − p|` below every smaller denominator.
fn second_kind_oracle(alpha: f64, q_max: u64) -> Vec<(i64, i64)> {
    let mut best = f64::INFINITY;
    let mut out = Vec::new();
    for q in 1..=q_max {
        let x = q as f64 * alpha;
        let p = x.round();
        let d = (x - p).abs();
        if d < best {
            best = d;
            out.push((p as i64, q as i64));
        }
    }
    out
}

fn c10_best_approximants() -> Outcome {
    let ds = [2, 3, 5, 6, 7, 8, 10, 11, 12, 13, 14, 15, 17, 18, 19, 20, 21, 22, 23, 24];
    for d in ds {
        let f = (d as f64).sqrt().floor() as i64;
        let alpha = surd(-f, 1, d, 1);
        let got: Vec<(i64, i64)> = best_approximants(&alpha, 10_000)
            .map_err(|e| e.to_string())?
            .iter()
            .map(|(p, q)| (p.to_i64().unwrap(), q.to_i64().unwrap()))
            .collect();
        let want = second_kind_oracle(alpha.to_f64(), 10_000);
        check(got == want, format!("√{d}: {got:?} vs {want:?}"))?;
    }
    Ok("20 quadratic irrationals, q ≤ 10⁴".into())
}

fn c11_first_quadrant() -> Outcome {
    let f = |a: Real, b: Real, n| apps::app2_perron(&a, &b, n).unwrap();
    check(f(Real::one(), Real::one(), 4) == Real::int(2), "f(1,1,4)")?;
    check(f(Real::zero(), Real::zero(), 6) == Real::int(2), "f(0,0,6)")?;
    let b = f(f4_min(), f4_min(), 40);
    check(b == surd(41, 1, 2, 4), format!("f(t₁,t₁,40) = {b}"))?;
    check(b.try_cmp(&Real::ratio(1061, 100)).unwrap() == Ordering::Less, "f(t₁,t₁,40) ≥ 10.61")?;
    for t in [Real::ratio(1061, 100), Real::int(12), Real::int(100)] {
        let w = apps::app2_hall_ray_certify(&Target::Finite(t.clone()), 1e-9).map_err(|e| e.to_string())?;
        let trunc = mg2::truncate(&w.sequence, 80).map_err(|e| e.to_string())?;
        let v = apps::app2_kappa_plus_window(&trunc, 20, 80).map_err(|e| e.to_string())?;
        check((v.to_f64() - t.to_f64()).abs() <= 1e-6, format!("target {}: {}", t.to_decimal(6), v.to_decimal(12)))?;
    }
    for a in [40, 41, 100] {
        let (ok, r) = apps::app2_ratio_grid_check(a, 50);
        check(ok, format!("a₀ = {a}: ratio range {r:?}"))?;
    }
    Ok("exact values, three Hall-ray witnesses, ratio grids".into())
}

fn c12_aperture() -> Outcome {
    let t = aperture_ratio(&CantorSet::ternary(), 20).map_err(|e| e.to_string())?;
    check(t.sup == Real::one(), format!("ternary: {}", t.sup))?;
    let f = aperture_ratio(&f4_cantor(), 12).map_err(|e| e.to_string())?;
    check(f.sup.try_cmp(&Real::ratio(7687, 10000)).unwrap() != Ordering::Greater, format!("F(4): {}", f.sup))?;
    Ok(format!("ternary = 1, F(4) depth-12 sup = {} ≈ {}", f.sup, f.sup.to_decimal(6)))
}

fn c13_coincidence() -> Outcome {
    let want = surd(5, 1, 5, 10);
    let d = spec_value(&[1], SpectrumKind::Dirichlet);
    let m = spec_value(&[1], SpectrumKind::MordellGruber);
    check(d == want && m == want, format!("D = {d}, MG2 = {m}"))?;
    // every local maximum of W on the constant sequence has the same height
    let s = ExpansionSequence::periodic(vec![1]);
    for k in -3..=3 {
        let e = local_extrema(&s, k).map_err(|e| e.to_string())?;
        check(e.max_arg.recip().unwrap() == want, format!("offset {k}: {}", e.max_arg))?;
    }
    Ok("D((1)̄) = MG₂((1)̄) = (5+√5)/10".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("MG2 table exactness", c1_table),
        ("Fibonacci lower part", c2_fibonacci),
        ("Markov landmarks and Perron gap", c3_markov),
        ("Hall sum saturation (ternary)", c4_ternary),
        ("MG2 Hall segment", c5_mg2_segment),
        ("correspondence round-trip", c6_round_trip),
        ("systole sandwich and Lipschitz", c7_sandwich),
        ("l2 Mordell bounds", c8_l2),
        ("truncation bound", c9_truncation),
        ("best approximants", c10_best_approximants),
        ("first-quadrant application", c11_first_quadrant),
        ("aperture ratios", c12_aperture),
        ("Dirichlet/MG2 coincidence", c13_coincidence),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
