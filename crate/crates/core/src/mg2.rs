//! Mordell-Gruber spectrum: constants, the lower part, gap search, Hall segment.

use std::cmp::Ordering;

use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cfrac::{ExpansionSequence, OneSided, Term};
use crate::error::{Error, Result};
use crate::exact::{QuadraticSurd, Real};
use crate::hall::{f4_cantor, interval_solver_cover, Bivariate, Node, SolverOptions};
use crate::perron::{necklaces, tau_enumerate, Limit, PerronSpec, TauEntry, TAU_BUDGET};
use crate::systole::{mordell_term, spectrum_value_periodic, SpectrumKind};

fn surd(p: i64, q: i64, d: i64, r: i64) -> QuadraticSurd {
    QuadraticSurd::new(p, q, d, r).expect("valid surd")
}

#[derive(Clone, Debug)]
pub struct KnownConstants {
    pub mg2_min: QuadraticSurd,
    pub mg2_accumulation: QuadraticSurd,
    pub hall_segment_lo: QuadraticSurd,
    pub dirichlet_hall_lo: QuadraticSurd,
    pub freiman_k0: QuadraticSurd,
    pub perron_gap: (QuadraticSurd, QuadraticSurd),
}

pub fn known_constants() -> KnownConstants {
    // (83+18√2)/(87+18√2) = (83+18√2)(87−18√2)/(87²−648)
    let lo = surd(83, 18, 2, 1).checked_div(&surd(87, 18, 2, 1)).expect("nonzero").expect("same field");
    let k0 = QuadraticSurd::new(2221564096i64, 283748, 462, 491993569).expect("valid surd");
    KnownConstants {
        mg2_min: surd(5, 1, 5, 10),
        mg2_accumulation: surd(1, 1, 5, 4),
        hall_segment_lo: lo.clone(),
        dirichlet_hall_lo: lo,
        freiman_k0: k0,
        perron_gap: (surd(0, 1, 12, 1), surd(0, 1, 13, 1)),
    }
}

/// `sup_j 1/(1 + β_j α_{j−1})` over one period, with the smallest achieving offset.
pub fn mordell_constant_periodic(seq: &ExpansionSequence) -> Result<(QuadraticSurd, usize)> {
    if seq.pure_period().is_none() {
        return Err(Error::Invalid("expected a purely periodic sequence".into()));
    }
    let v = spectrum_value_periodic(seq, SpectrumKind::MordellGruber)?;
    let s = v.value.as_surd().cloned().ok_or_else(|| Error::PrecisionExhausted("non-exact value".into()))?;
    Ok((s, v.offset))
}

/// `sup` of the Mordell terms over offsets `−radius..=radius`.
pub fn mordell_constant_window(seq: &ExpansionSequence, radius: i64, depth: usize) -> Result<Real> {
    let mut best: Option<Real> = None;
    for k in -radius..=radius {
        let v = mordell_term(seq, k)
            .or_else(|_| -> Result<Real> {
                let t = seq.tails_at(k, depth)?;
                t.beta.mul(&t.alpha).add_int(1).recip()
            })?;
        best = Some(match best {
            None => v,
            Some(b) => b.max(v),
        });
    }
    best.ok_or_else(|| Error::Invalid("empty window".into()))
}

/// Two-sided sequence cut to `depth` terms on each side, with no terminal ∞.
pub fn truncate(seq: &ExpansionSequence, depth: usize) -> Result<ExpansionSequence> {
    let side = |f: &dyn Fn(i64) -> i64| -> Result<OneSided> {
        let mut v = Vec::with_capacity(depth);
        for i in 0..depth as i64 {
            match seq.term_at(f(i)) {
                Some(Term::Fin(n)) => v.push(n),
                Some(Term::Inf) => return Ok(OneSided::finite(v, true)),
                None => break,
            }
        }
        Ok(OneSided::finite(v, false))
    };
    Ok(ExpansionSequence::bi(side(&|i| -1 - i)?, side(&|i| i)?))
}

fn fib(n: usize) -> BigInt {
    let (mut a, mut b) = (BigInt::from(0), BigInt::from(1));
    for _ in 0..n {
        let c = &a + &b;
        a = std::mem::replace(&mut b, c);
    }
    a
}

/// `(1 + √(F_{2t}/F_{2t+2}))/2`.
pub fn fibonacci_row(t: usize) -> Result<QuadraticSurd> {
    let (f, g) = (fib(2 * t), fib(2 * t + 2));
    QuadraticSurd::new(g.clone(), 1, &f * &g, 2 * g)
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumTableRow {
    pub label: String,
    pub value: QuadraticSurd,
    pub decimal: String,
    /// Value of a non-periodic limit sequence rather than a periodic one.
    pub limit: bool,
}

impl SpectrumTableRow {
    fn new(label: String, value: QuadraticSurd, limit: bool) -> Self {
        let decimal = value.to_decimal(15);
        SpectrumTableRow { label, value, decimal, limit }
    }
}

fn period_label(p: &[u64]) -> String {
    let body: Vec<String> = p.iter().map(|d| d.to_string()).collect();
    format!("({})̄", body.join(","))
}

/// The sequence `(…,1,1,2,1,1,…)`.
pub fn golden_defect() -> ExpansionSequence {
    ExpansionSequence::bi(OneSided::periodic(vec![], vec![1]), OneSided::periodic(vec![2], vec![1]))
}

/// The Mordell constant of `(…,1,1,2,1,1,…)`, equal to `(1+√5)/4`.
pub fn golden_defect_value() -> Result<QuadraticSurd> {
    let v = mordell_constant_window(&golden_defect(), 4, crate::cfrac::DEFAULT_TAIL_DEPTH)?;
    v.as_surd().cloned().ok_or_else(|| Error::PrecisionExhausted("non-exact value".into()))
}

/// Rows `t = 1..=t_max`, each cross-checked against the period `(2,1^{2t−1})`,
/// followed by the limit row.
pub fn lower_part_table(t_max: usize) -> Result<Vec<SpectrumTableRow>> {
    if t_max == 0 {
        return Err(Error::Invalid("t_max must be ≥ 1".into()));
    }
    let mut rows = vec![SpectrumTableRow::new("(1)̄".into(), known_constants().mg2_min, false)];
    for t in 1..=t_max {
        let closed = fibonacci_row(t)?;
        let mut period = vec![2u64];
        period.extend(std::iter::repeat(1).take(2 * t - 1));
        let (direct, _) = mordell_constant_periodic(&ExpansionSequence::periodic(period.clone()))?;
        if direct.cmp_exact(&closed) != Ordering::Equal {
            return Err(Error::CertificationFailed(format!("row t = {t}: {direct} ≠ {closed}")));
        }
        rows.push(SpectrumTableRow::new(period_label(&period), closed, false));
    }
    rows.push(SpectrumTableRow::new("(1̄,2,1̄)".into(), golden_defect_value()?, true));
    Ok(rows)
}

#[derive(Clone, Debug)]
pub struct ClassificationReport {
    pub checked: usize,
    /// Periods with value ≤ (1+√5)/4.
    pub below: Vec<(Vec<u64>, QuadraticSurd)>,
    /// Periods below the threshold outside the listed families.
    pub violations: Vec<Vec<u64>>,
    /// `(2,1^k)` with even `k` found at or below the threshold.
    pub even_k_below: Vec<Vec<u64>>,
    pub minimum_only_all_ones: bool,
    pub pass: bool,
}

/// `Some(k)` when the necklace is `(2,1^k)`.
fn two_ones(p: &[u64]) -> Option<usize> {
    let twos = p.iter().filter(|&&d| d == 2).count();
    let ones = p.iter().filter(|&&d| d == 1).count();
    (twos == 1 && ones + 1 == p.len()).then_some(ones)
}

pub fn classify_low_spectrum(max_period: usize, max_entry: u64) -> Result<ClassificationReport> {
    if max_period == 0 || max_entry == 0 {
        return Err(Error::Invalid("bounds must be ≥ 1".into()));
    }
    if (max_entry as f64).powi(max_period as i32) > TAU_BUDGET as f64 {
        return Err(Error::BudgetExceeded(format!("{max_entry}^{max_period} periods")));
    }
    let k = known_constants();
    let threshold = k.mg2_accumulation;
    let mut rep = ClassificationReport {
        checked: 0,
        below: vec![],
        violations: vec![],
        even_k_below: vec![],
        minimum_only_all_ones: true,
        pass: true,
    };
    for p in necklaces(max_period, max_entry) {
        rep.checked += 1;
        let (v, _) = mordell_constant_periodic(&ExpansionSequence::periodic(p.clone()))?;
        if v.cmp_exact(&k.mg2_min) != Ordering::Greater && p != [1] {
            rep.minimum_only_all_ones = false;
        }
        if v.cmp_exact(&threshold) == Ordering::Greater {
            continue;
        }
        let in_family = p == [1] || matches!(two_ones(&p), Some(k) if k % 2 == 1);
        if !in_family {
            rep.violations.push(p.clone());
        }
        if matches!(two_ones(&p), Some(k) if k % 2 == 0) {
            rep.even_k_below.push(p.clone());
        }
        rep.below.push((p, v));
    }
    rep.pass = rep.violations.is_empty() && rep.even_k_below.is_empty() && rep.minimum_only_all_ones;
    Ok(rep)
}

#[derive(Clone, Debug)]
pub struct GapReport {
    pub checked: usize,
    pub interior: Vec<TauEntry>,
    pub left: Option<TauEntry>,
    pub right: Option<TauEntry>,
    pub pass: bool,
}

/// Markov values of periodic sequences lying strictly inside `(√12, √13)`.
pub fn perron_gap_search(max_period: usize, max_entry: u64) -> Result<GapReport> {
    let (lo, hi) = known_constants().perron_gap;
    let (lo, hi) = (Real::Exact(lo), Real::Exact(hi));
    let values = tau_enumerate(&PerronSpec::markov(), Limit::Sup, max_period, max_entry)?;
    let mut rep = GapReport { checked: values.len(), interior: vec![], left: None, right: None, pass: true };
    for e in values {
        match (e.value.try_cmp(&lo)?, e.value.try_cmp(&hi)?) {
            (Ordering::Equal, _) => rep.left = Some(e),
            (_, Ordering::Equal) => rep.right = Some(e),
            (Ordering::Greater, Ordering::Less) => rep.interior.push(e),
            _ => {}
        }
    }
    rep.pass = rep.interior.is_empty();
    Ok(rep)
}

/// Exact comparison of `[0;(1,2)̄]·[0;2,(2,1)̄]` with `4/√3 − 2` (the two are equal).
pub fn second_minimum_product_cmp() -> Result<Ordering> {
    let a = crate::cfrac::eval_periodic(&[], &[1, 2])?;
    let b = crate::cfrac::eval_periodic(&[2], &[2, 1])?;
    let lhs = Real::Exact(a).mul(&Real::Exact(b));
    let rhs = Real::int(4).div(&Real::Exact(QuadraticSurd::sqrt_int(3)?))?.add_int(-2);
    lhs.try_cmp(&rhs)
}

// ---------------------------------------------------------------------------
// Hall segment

#[derive(Clone, Debug)]
pub struct HallWitness {
    pub sequence: ExpansionSequence,
    pub a0: u64,
    pub a_minus1: u64,
    pub alpha_tail: Real,
    pub beta_tail: Real,
    /// Exact Mordell constant of the witness.
    pub kappa: Real,
    pub residual: f64,
    pub depth: usize,
}

impl HallWitness {
    pub fn to_json(&self) -> Value {
        json!({
            "sequence": self.sequence,
            "a0": self.a0, "a_minus1": self.a_minus1,
            "alpha_tail": self.alpha_tail.to_string(), "beta_tail": self.beta_tail.to_string(),
            "kappa": self.kappa.to_string(), "kappa_decimal": self.kappa.to_decimal(15),
            "residual": self.residual, "depth": self.depth,
        })
    }
}

/// `κ = P/(P+1)` with `P = (a₀+α)(a₋₁+β)`.
pub fn mg2_bracket_function(a0: u64, a1: u64) -> Bivariate {
    let (x, y) = (a0 as i64, a1 as i64);
    Bivariate::new(
        &format!("κ[{a0},{a1}]"),
        move |a, b| {
            let p = a.add_int(x).mul(&b.add_int(y));
            p.div(&p.add_int(1))
        },
        move |a, b| [(y as f64 + b[0]) / (x as f64 + a[1]), (y as f64 + b[1]) / (x as f64 + a[0])],
    )
}

/// `[κ(t₁,t₁), κ(t₂,t₂)]` for the digits `(a₀, a₋₁)`.
pub fn mg2_bracket(a0: u64, a1: u64) -> Result<(Real, Real)> {
    let g = mg2_bracket_function(a0, a1);
    let r = f4_cantor().root();
    Ok((g.eval(&r.lo, &r.lo)?, g.eval(&r.hi, &r.hi)?))
}

/// `(5,5), (5,6), (6,6), (6,7), …`
pub fn mg2_bracket_schedule(max_digit: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for a in 5..=max_digit {
        out.push((a, a));
        if a < max_digit {
            out.push((a, a + 1));
        }
    }
    out
}

pub const MG2_MAX_DIGIT: u64 = 100_000;

fn side_from_node(first: u64, node: &Node, value: &Real) -> Result<OneSided> {
    let upper = *value == node.hi;
    if !upper && *value != node.lo {
        return Err(Error::Invalid("witness is not a node endpoint".into()));
    }
    let (pre, per) = node
        .endpoint_expansion(upper)
        .ok_or_else(|| Error::Invalid("endpoint has no expansion".into()))?;
    let mut terms = vec![first];
    terms.extend(pre);
    Ok(OneSided::periodic(terms, per))
}

/// A sequence with `a₋₁, a₀ ≥ 5`, other terms ≤ 4, whose Mordell constant is within `tol` of `target`.
pub fn mg2_hall_certify(target: &Real, tol: f64) -> Result<HallWitness> {
    let k = known_constants();
    let lo = Real::Exact(k.hall_segment_lo);
    if target.try_cmp(&lo)? != Ordering::Greater || target.try_cmp(&Real::one())? != Ordering::Less {
        return Err(Error::OutOfRange(format!(
            "target {} outside ({}, 1)",
            target.to_decimal(12),
            lo.to_decimal(12)
        )));
    }
    let f4 = f4_cantor();
    let opts = SolverOptions { tol, ..Default::default() };
    let mut last = None;
    let mut a = 5;
    while a <= MG2_MAX_DIGIT {
        for (a0, a1) in [(a, a), (a, a + 1)] {
            let (blo, bhi) = mg2_bracket(a0, a1)?;
            if target.try_cmp(&blo)? == Ordering::Less || target.try_cmp(&bhi)? == Ordering::Greater {
                continue;
            }
            let g = mg2_bracket_function(a0, a1);
            match interval_solver_cover(&g, &f4, &f4, target, &opts, 4) {
                Ok(w) => {
                    let right = side_from_node(a0, &w.alpha_node, &w.alpha)?;
                    let left = side_from_node(a1, &w.beta_node, &w.beta)?;
                    let kappa = g.eval(&w.alpha, &w.beta)?;
                    return Ok(HallWitness {
                        sequence: ExpansionSequence::bi(left, right),
                        a0,
                        a_minus1: a1,
                        alpha_tail: w.alpha,
                        beta_tail: w.beta,
                        kappa,
                        residual: w.residual,
                        depth: w.depth,
                    });
                }
                Err(e) => last = Some(e),
            }
        }
        // next brackets start above the target
        if target.try_cmp(&mg2_bracket(a + 1, a + 1)?.0)? == Ordering::Less && last.is_some() {
            break;
        }
        a += 1;
    }
    Err(last.unwrap_or_else(|| Error::CertificationFailed(format!("no bracket covers {}", target.to_decimal(12)))))
}
