//! `q_{k+m}‖q_kα‖` spectra and the first-quadrant Mordell-Gruber spectrum.

use std::cmp::Ordering;

use num_integer::Integer;
use serde_json::{json, Value};

use crate::cfrac::{ExpansionSequence, OneSided, Term};
use crate::error::{Error, Result};
use crate::exact::Real;
use crate::hall::{f4_cantor, f4_max, f4_min, interval_solver_cover, Bivariate, Node, SolverOptions};
use crate::perron::{period_extremum, ExtReal, Limit, PerronSpec};

/// `f_m` for `m ≥ 1` (limsup, `I = ∞`) or the reciprocal-product form for `m ≤ 0` (liminf, `I = 0`).
pub fn app1_spec(m: i64) -> PerronSpec {
    if m >= 1 {
        let l = (m - 1) as usize;
        PerronSpec::new(&format!("S{m}"), l, ExtReal::PosInf, move |alpha, beta, c| {
            let mut num = Real::one();
            let mut b = beta.clone();
            for &ci in c {
                let s = b.add_int(ci as i64);
                num = num.mul(&s);
                b = s.recip()?;
            }
            let mut a = alpha.clone();
            for &ci in c.iter().rev() {
                a = a.add_int(ci as i64).recip()?;
            }
            num.div(&a.mul(beta).add_int(1))
        })
    } else {
        let n = (-m) as usize;
        PerronSpec::new(&format!("I{m}"), n + 1, ExtReal::Finite(Real::zero()), move |alpha, beta, c| {
            let mut betas = vec![beta.clone()];
            for &ci in &c[..n] {
                let next = betas.last().expect("nonempty").add_int(ci as i64).recip()?;
                betas.push(next);
            }
            let mut alphas = vec![alpha.clone(); n + 1];
            for j in (1..=n).rev() {
                alphas[j - 1] = alphas[j].add_int(c[j] as i64).recip()?;
            }
            let mut num = Real::one();
            for j in 0..n {
                num = num.mul(&alphas[j].mul(&betas[j + 1]).add_int(1));
            }
            let mut den = Real::one();
            for j in 0..=n {
                den = den.mul(&alphas[j].add(&betas[j]).add_int(c[j] as i64));
            }
            num.div(&den)
        })
    }
}

/// Extremum of `P_k` over one period, with the smallest achieving offset.
pub fn app1_spectrum_periodic(m: i64, seq: &ExpansionSequence, limit: Limit) -> Result<(Real, usize)> {
    let p = seq.pure_period().ok_or_else(|| Error::Invalid("expected a purely periodic sequence".into()))?;
    period_extremum(&app1_spec(m), p, limit)
}

fn even_branch_ge(alpha: &Real, beta: &Real) -> Result<bool> {
    match alpha.try_cmp(beta) {
        Ok(o) => Ok(o != Ordering::Less),
        // overlapping enclosures: both branches agree on the seam
        Err(Error::PrecisionExhausted(_)) => Ok(true),
        Err(e) => Err(e),
    }
}

/// First-quadrant Perron formula.
pub fn app2_perron(alpha: &Real, beta: &Real, a: u64) -> Result<Real> {
    if a == 0 {
        return Err(Error::Invalid("a must be ≥ 1".into()));
    }
    let ai = a as i64;
    let two_a = alpha.add(alpha);
    let two_b = beta.add(beta);
    let den = alpha.add(beta).add_int(ai).mul(&Real::int(4));
    let num = if a % 2 == 1 {
        two_b.add_int(ai + 1).mul(&two_a.add_int(ai + 1))
    } else if even_branch_ge(alpha, beta)? {
        two_b.add_int(ai + 2).mul(&two_a.add_int(ai))
    } else {
        two_b.add_int(ai).mul(&two_a.add_int(ai + 2))
    };
    num.div(&den)
}

pub fn app2_spec() -> PerronSpec {
    PerronSpec::new("MG2plus", 1, ExtReal::PosInf, |a, b, n| app2_perron(a, b, n[0]))
}

/// `∂f/∂α ÷ ∂f/∂β` from the closed-form partials; `upper` picks the branch at the seam.
pub fn app2_ratio(alpha: f64, beta: f64, a: u64, ge: bool) -> f64 {
    let a = a as f64;
    let (x, y) = (a + 2.0 * alpha, a + 2.0 * beta);
    if a as u64 % 2 == 1 {
        (y + 1.0) * (y - 1.0) / ((x + 1.0) * (x - 1.0))
    } else if ge {
        (y + 2.0) * y / ((x - 2.0) * x)
    } else {
        y * (y - 2.0) / (x * (x + 2.0))
    }
}

/// Bounds of the derivative ratio over a cell; each branch increases in β and decreases in α.
pub fn app2_ratio_bounds(a: u64, al: [f64; 2], be: [f64; 2]) -> [f64; 2] {
    let mut out = [f64::INFINITY, f64::NEG_INFINITY];
    let branches: Vec<bool> = if a % 2 == 1 {
        vec![true]
    } else {
        let mut v = Vec::new();
        if al[1] >= be[0] {
            v.push(true);
        }
        if al[0] <= be[1] {
            v.push(false);
        }
        v
    };
    for ge in branches {
        out[0] = out[0].min(app2_ratio(al[1], be[0], a, ge));
        out[1] = out[1].max(app2_ratio(al[0], be[1], a, ge));
    }
    out
}

/// Checks `∂f/∂α ÷ ∂f/∂β ∈ [4/5, 5/4]` on a `grid × grid` lattice of `[0,1]²`.
pub fn app2_ratio_grid_check(a: u64, grid: usize) -> (bool, [f64; 2]) {
    let n = grid.max(1);
    let mut out = [f64::INFINITY, f64::NEG_INFINITY];
    for i in 0..=n {
        for j in 0..=n {
            let (x, y) = (i as f64 / n as f64, j as f64 / n as f64);
            let mut branches = vec![];
            if a % 2 == 1 || x >= y {
                branches.push(true);
            }
            if a % 2 == 0 && x <= y {
                branches.push(false);
            }
            for ge in branches {
                let r = app2_ratio(x, y, a, ge);
                out[0] = out[0].min(r);
                out[1] = out[1].max(r);
            }
        }
    }
    (out[0] >= 0.8 && out[1] <= 1.25, out)
}

fn even_offsets(p: usize) -> impl Iterator<Item = usize> {
    (0..p).step_by(p.gcd(&2))
}

/// `sup_n P_{2n}` over one period.
pub fn app2_kappa_plus(seq: &ExpansionSequence) -> Result<(Real, usize)> {
    let p = seq.pure_period().ok_or_else(|| Error::Invalid("expected a purely periodic sequence".into()))?;
    let mut best: Option<(Real, usize)> = None;
    for k in even_offsets(p.len()) {
        let t = seq.tails_at(k as i64, crate::cfrac::DEFAULT_TAIL_DEPTH)?;
        let v = app2_perron(&t.alpha, &t.beta, p[k])?;
        if best.as_ref().map_or(Ok(true), |(b, _)| v.try_cmp(b).map(|o| o == Ordering::Greater))? {
            best = Some((v, k));
        }
    }
    best.ok_or_else(|| Error::Invalid("empty period".into()))
}

/// `sup P_{2n}` over even offsets in `−radius..=radius`.
pub fn app2_kappa_plus_window(seq: &ExpansionSequence, radius: i64, depth: usize) -> Result<Real> {
    let mut best: Option<Real> = None;
    for k in (-radius..=radius).filter(|k| k % 2 == 0) {
        let a = match seq.term_at(k) {
            Some(Term::Fin(a)) => a,
            _ => continue,
        };
        let t = seq.tails_at(k, depth)?;
        let v = app2_perron(&t.alpha, &t.beta, a)?;
        best = Some(match best {
            None => v,
            Some(b) => b.max(v),
        });
    }
    best.ok_or_else(|| Error::Invalid("no even offsets in window".into()))
}

pub fn app2_bracket_function(a0: u64) -> Bivariate {
    Bivariate::new(&format!("f[{a0}]"), move |a, b| app2_perron(a, b, a0), move |a, b| app2_ratio_bounds(a0, a, b))
}

/// `[f(t₁,t₁,a₀), f(t₂,t₂,a₀)]`.
pub fn app2_bracket(a0: u64) -> Result<(Real, Real)> {
    Ok((app2_perron(&f4_min(), &f4_min(), a0)?, app2_perron(&f4_max(), &f4_max(), a0)?))
}

pub const APP2_MIN_DIGIT: u64 = 40;

#[derive(Clone, Debug)]
pub enum Target {
    Finite(Real),
    Infinite,
}

#[derive(Clone, Debug)]
pub struct App2Witness {
    pub sequence: ExpansionSequence,
    pub a0: Option<u64>,
    pub alpha_tail: Option<Real>,
    pub beta_tail: Option<Real>,
    pub value: ExtReal,
    pub residual: f64,
    pub description: String,
}

impl App2Witness {
    pub fn to_json(&self) -> Value {
        json!({
            "sequence": self.sequence,
            "a0": self.a0,
            "alpha_tail": self.alpha_tail.as_ref().map(|r| r.to_string()),
            "beta_tail": self.beta_tail.as_ref().map(|r| r.to_string()),
            "value": self.value.to_string(),
            "decimal": self.value.finite().map(|r| r.to_decimal(15)),
            "residual": self.residual,
            "description": self.description,
        })
    }
}

fn side_from_node(first: Option<u64>, node: &Node, value: &Real) -> Result<OneSided> {
    let upper = *value == node.hi;
    let (pre, per) = node
        .endpoint_expansion(upper)
        .ok_or_else(|| Error::Invalid("endpoint has no expansion".into()))?;
    let mut terms: Vec<u64> = first.into_iter().collect();
    terms.extend(pre);
    Ok(OneSided::periodic(terms, per))
}

/// Terms `a_{2n−1} = 1`, `a_{2n} = |n| + 1` for `|k| ≤ 2·half_width`.
pub fn app2_infinite_sequence(half_width: usize) -> ExpansionSequence {
    let term = |k: i64| if k % 2 != 0 { 1 } else { (k / 2).unsigned_abs() + 1 };
    let n = 2 * half_width as i64;
    let right: Vec<u64> = (0..n).map(term).collect();
    let left: Vec<u64> = (1..=n).map(|i| term(-i)).collect();
    ExpansionSequence::bi(OneSided::finite(left, false), OneSided::finite(right, false))
}

/// A sequence with `κ⁺` equal to `target` within `tol` (or `= ∞`).
pub fn app2_hall_ray_certify(target: &Target, tol: f64) -> Result<App2Witness> {
    let target = match target {
        Target::Infinite => {
            return Ok(App2Witness {
                sequence: app2_infinite_sequence(20),
                a0: None,
                alpha_tail: None,
                beta_tail: None,
                value: ExtReal::PosInf,
                residual: 0.0,
                description: "a_{2n-1} = 1, a_{2n} = |n| + 1 for all n; window shown".into(),
            })
        }
        Target::Finite(t) => t,
    };
    let floor = app2_bracket(APP2_MIN_DIGIT)?.0;
    if target.try_cmp(&floor)? == Ordering::Less {
        return Err(Error::OutOfRange(format!(
            "target {} below f(t₁,t₁,40) = {}",
            target.to_decimal(12),
            floor.to_decimal(12)
        )));
    }
    // f(t,t,a) ≈ (a + 2t + 1)/4, so start a little below 4·target − 2
    let guess = (4.0 * target.to_f64() - 6.0).floor();
    let start = if guess.is_finite() && guess > APP2_MIN_DIGIT as f64 { guess as u64 } else { APP2_MIN_DIGIT };
    let f4 = f4_cantor();
    let opts = SolverOptions { tol, ..Default::default() };
    let mut last = None;
    for a0 in start..start + 16 {
        let (lo, hi) = app2_bracket(a0)?;
        if target.try_cmp(&lo)? == Ordering::Less {
            if a0 == start && start > APP2_MIN_DIGIT {
                return Err(Error::CertificationFailed("bracket search started above the target".into()));
            }
            break;
        }
        if target.try_cmp(&hi)? == Ordering::Greater {
            continue;
        }
        let g = app2_bracket_function(a0);
        match interval_solver_cover(&g, &f4, &f4, target, &opts, 4) {
            Ok(w) => {
                let right = side_from_node(Some(a0), &w.alpha_node, &w.alpha)?;
                let left = side_from_node(None, &w.beta_node, &w.beta)?;
                let value = g.eval(&w.alpha, &w.beta)?;
                return Ok(App2Witness {
                    sequence: ExpansionSequence::bi(left, right),
                    a0: Some(a0),
                    alpha_tail: Some(w.alpha),
                    beta_tail: Some(w.beta),
                    value: ExtReal::Finite(value),
                    residual: w.residual,
                    description: format!("a_0 = {a0}, other terms in 1..=4"),
                });
            }
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap_or_else(|| Error::CertificationFailed(format!("no bracket covers {}", target.to_decimal(12)))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::QuadraticSurd;
    use crate::mg2::truncate;

    fn surd(p: i64, q: i64, d: i64, r: i64) -> Real {
        Real::Exact(QuadraticSurd::new(p, q, d, r).unwrap())
    }

    #[test]
    fn app1_values() {
        let one = ExpansionSequence::periodic(vec![1]);
        assert_eq!(app1_spectrum_periodic(1, &one, Limit::Sup).unwrap().0, surd(5, 1, 5, 10));
        assert_eq!(app1_spectrum_periodic(2, &one, Limit::Sup).unwrap().0, surd(5, 3, 5, 10));
        // m = 0 is the reciprocal Markov value
        let (v, _) = app1_spectrum_periodic(0, &one, Limit::Inf).unwrap();
        assert_eq!(v, surd(0, 1, 5, 5));
        let s = app1_spec(3);
        assert_eq!(s.apply(&Real::zero(), &Real::zero(), &[Term::Fin(1), Term::Inf]).unwrap(), ExtReal::PosInf);
    }

    #[test]
    fn app2_values() {
        assert_eq!(app2_perron(&Real::one(), &Real::one(), 4).unwrap(), Real::int(2));
        assert_eq!(app2_perron(&Real::zero(), &Real::zero(), 6).unwrap(), Real::int(2));
        assert_eq!(app2_perron(&Real::zero(), &Real::zero(), 1).unwrap(), Real::one());
        assert_eq!(app2_bracket(40).unwrap().0, surd(41, 1, 2, 4));
        let one = ExpansionSequence::periodic(vec![1]);
        assert_eq!(app2_kappa_plus(&one).unwrap().0, surd(5, 3, 5, 10));
        for a in [40, 41, 100] {
            assert!(app2_ratio_grid_check(a, 20).0);
        }
    }

    #[test]
    fn app2_ray() {
        for t in [Real::ratio(1061, 100), Real::int(11), Real::int(12), Real::int(100)] {
            let w = app2_hall_ray_certify(&Target::Finite(t.clone()), 1e-9).unwrap();
            let v = app2_kappa_plus_window(&truncate(&w.sequence, 80).unwrap(), 12, 80).unwrap();
            assert!((v.to_f64() - t.to_f64()).abs() < 1e-8, "{} vs {}", v.to_f64(), t.to_f64());
        }
        let b = app2_bracket(40).unwrap().0;
        let w = app2_hall_ray_certify(&Target::Finite(b.clone()), 1e-9).unwrap();
        assert_eq!(w.a0, Some(40));
        assert_eq!(w.alpha_tail, Some(f4_min()));
        assert!(app2_hall_ray_certify(&Target::Finite(Real::int(10)), 1e-9).is_err());
        let inf = app2_hall_ray_certify(&Target::Infinite, 1e-9).unwrap();
        assert_eq!(inf.sequence.term_at(4), Some(Term::Fin(3)));
        assert_eq!(inf.sequence.term_at(-3), Some(Term::Fin(1)));
    }
}
