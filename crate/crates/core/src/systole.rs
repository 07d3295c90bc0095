//! Log-systole functions and the spectra read off them.

use std::cmp::Ordering;

use crate::cfrac::{ExpansionSequence, Term, DEFAULT_TAIL_DEPTH};
use crate::error::{Error, Result};
use crate::exact::Real;
use crate::lattice::{pivots_of, Lattice2D};

/// Which classical spectrum to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpectrumKind {
    Lagrange,
    Markov,
    Dirichlet,
    MordellGruber,
}

/// A spectrum value together with the first offset attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumValue {
    pub value: Real,
    pub offset: usize,
}

/// Breakpoint of the piecewise-linear function `W`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Breakpoint {
    pub t: f64,
    pub w: f64,
    pub is_max: bool,
}

/// Ordered extrema of `W` over a pivot window.
#[derive(Clone, Debug)]
pub struct SystoleProfile {
    pub breakpoints: Vec<Breakpoint>,
}

/// Pivots of a lattice in floating point, enough to evaluate `W` and `W₂`
/// on a window `|t| ≤ t_abs`.
#[derive(Clone, Debug)]
pub struct LogSystole {
    pivots: Vec<[f64; 2]>,
    covolume: f64,
    t_abs: f64,
}

impl LogSystole {
    pub fn new(lat: &Lattice2D, t_abs: f64) -> Result<Self> {
        let covolume = lat.covolume_f64();
        let window = t_abs.abs().exp() * covolume.sqrt().max(1.0) * 1.5 + 1.0;
        let chain = pivots_of(lat, window)?;
        let pivots = chain.pivots_f64().into_iter().map(|p| [p[0].abs(), p[1].abs()]).collect();
        Ok(LogSystole { pivots, covolume, t_abs: t_abs.abs() })
    }

    pub fn pivots(&self) -> &[[f64; 2]] {
        &self.pivots
    }

    pub fn covolume(&self) -> f64 {
        self.covolume
    }

    pub fn t_abs(&self) -> f64 {
        self.t_abs
    }

    /// `W(t) = ln sys(g_t Λ)`.
    pub fn w(&self, t: f64) -> f64 {
        let (u, v) = (t.exp(), (-t).exp());
        // |x| decreases and y increases along the chain, so the norm is unimodal
        self.pivots.iter().map(|p| (u * p[0]).max(v * p[1])).fold(f64::INFINITY, f64::min).ln()
    }

    /// `W₂(t) = ln` of the shortest Euclidean norm in `g_t Λ`.
    pub fn w2(&self, t: f64) -> f64 {
        let (u, v) = (t.exp(), (-t).exp());
        self.pivots.iter().map(|p| (u * p[0]).hypot(v * p[1])).fold(f64::INFINITY, f64::min).ln()
    }

    /// Local minima at each pivot and maxima between neighbours.
    pub fn profile(&self) -> SystoleProfile {
        let mut bps = Vec::new();
        for (j, p) in self.pivots.iter().enumerate() {
            if j > 0 {
                let q = self.pivots[j - 1];
                if q[0] > 0.0 && p[1] > 0.0 {
                    let t = 0.5 * (p[1] / q[0]).ln();
                    bps.push(Breakpoint { t, w: 0.5 * (q[0] * p[1]).ln(), is_max: true });
                }
            }
            if p[0] > 0.0 && p[1] > 0.0 {
                bps.push(Breakpoint { t: 0.5 * (p[1] / p[0]).ln(), w: 0.5 * (p[0] * p[1]).ln(), is_max: false });
            }
        }
        SystoleProfile { breakpoints: bps }
    }

    /// Exact supremum of `W₂` over a window: the lower envelope of convex
    /// pieces peaks where two pieces cross.
    pub fn sup_w2(&self, lo: f64, hi: f64) -> (f64, f64) {
        let mut cands = vec![lo, hi, 0.0f64.clamp(lo, hi)];
        for i in 0..self.pivots.len() {
            for j in (i + 1)..self.pivots.len().min(i + 4) {
                let (a, b) = (self.pivots[i], self.pivots[j]);
                let num = b[1] * b[1] - a[1] * a[1];
                let den = a[0] * a[0] - b[0] * b[0];
                if num > 0.0 && den > 0.0 {
                    let t = 0.25 * (num / den).ln();
                    if (lo..=hi).contains(&t) {
                        cands.push(t);
                    }
                }
            }
        }
        cands
            .into_iter()
            .map(|t| (self.w2(t), t))
            .fold((f64::NEG_INFINITY, 0.0), |acc, c| if c.0 > acc.0 { c } else { acc })
    }
}

/// Minimum ℓ∞ norm over nonzero points, exact when the basis is.
pub fn sys_linf(lat: &Lattice2D) -> Result<Real> {
    let window = lat.covolume_f64().sqrt().max(1.0) * 1.5 + 1.0;
    let chain = pivots_of(lat, window)?;
    let abs = |r: &Real| if r.cmp_loose(&Real::zero()) == Ordering::Less { r.neg() } else { r.clone() };
    chain
        .pivots
        .iter()
        .map(|p| abs(&p[0]).max(abs(&p[1])))
        .reduce(Real::min)
        .ok_or_else(|| Error::Invalid("empty pivot chain".into()))
}

pub fn log_systole(lat: &Lattice2D, t: f64) -> Result<f64> {
    Ok(LogSystole::new(lat, t.abs() + 1.0)?.w(t))
}

pub fn l2_log_systole(lat: &Lattice2D, t: f64) -> Result<f64> {
    Ok(LogSystole::new(lat, t.abs() + 1.0)?.w2(t))
}

/// Local extrema of `W` attached to offset `k`, given by their exact arguments:
/// the minimum is `−½ ln(a_k + α_k + β_k)` and the maximum `−½ ln(1 + β_k α_{k−1})`.
#[derive(Clone, Debug)]
pub struct LocalExtrema {
    pub min_arg: Option<Real>,
    pub max_arg: Real,
    pub min: f64,
    pub max: f64,
}

pub fn local_extrema(seq: &ExpansionSequence, k: i64) -> Result<LocalExtrema> {
    let here = seq.tails_at(k, DEFAULT_TAIL_DEPTH)?;
    let prev = seq.tails_at(k - 1, DEFAULT_TAIL_DEPTH)?;
    let max_arg = here.beta.mul(&prev.alpha).add_int(1);
    let min_arg = match seq.term_at(k) {
        Some(Term::Fin(a)) => Some(here.alpha.add(&here.beta).add_int(a as i64)),
        _ => None,
    };
    Ok(LocalExtrema {
        min: min_arg.as_ref().map_or(f64::NEG_INFINITY, |m| -0.5 * m.to_f64().ln()),
        max: -0.5 * max_arg.to_f64().ln(),
        min_arg,
        max_arg,
    })
}

/// `a_k + α_k + β_k`.
pub fn markov_term(seq: &ExpansionSequence, k: i64) -> Result<Real> {
    let a = seq.term_at(k).and_then(Term::finite).ok_or_else(|| Error::OutOfRange(format!("a_{k} not finite")))?;
    let t = seq.tails_at(k, DEFAULT_TAIL_DEPTH)?;
    Ok(t.alpha.add(&t.beta).add_int(a as i64))
}

/// `1 / (1 + β_k α_{k−1})`.
pub fn mordell_term(seq: &ExpansionSequence, k: i64) -> Result<Real> {
    let beta = seq.tails_at(k, DEFAULT_TAIL_DEPTH)?.beta;
    let alpha = seq.tails_at(k - 1, DEFAULT_TAIL_DEPTH)?.alpha;
    beta.mul(&alpha).add_int(1).recip()
}

/// Largest value of `f(k)` over `k = 0 … n−1`, smallest offset on ties.
pub fn max_over_offsets(n: usize, f: impl Fn(i64) -> Result<Real>) -> Result<SpectrumValue> {
    let mut best: Option<SpectrumValue> = None;
    for k in 0..n {
        let v = f(k as i64)?;
        let better = match &best {
            None => true,
            Some(b) => v.try_cmp(&b.value)? == Ordering::Greater,
        };
        if better {
            best = Some(SpectrumValue { value: v, offset: k });
        }
    }
    best.ok_or_else(|| Error::Invalid("no offsets".into()))
}

/// Lagrange, Markov, Dirichlet or Mordell-Gruber value of a purely periodic sequence.
pub fn spectrum_value_periodic(seq: &ExpansionSequence, which: SpectrumKind) -> Result<SpectrumValue> {
    let p = seq.pure_period().ok_or_else(|| Error::Invalid("purely periodic sequence expected".into()))?;
    match which {
        SpectrumKind::Lagrange | SpectrumKind::Markov => max_over_offsets(p.len(), |k| markov_term(seq, k)),
        SpectrumKind::Dirichlet | SpectrumKind::MordellGruber => {
            max_over_offsets(p.len(), |k| mordell_term(seq, k))
        }
    }
}

/// Grid estimate of `κ₂`, normalised by the covolume.
#[derive(Clone, Debug)]
pub struct L2Estimate {
    /// Supremum located at envelope crossings.
    pub value: f64,
    pub argmax: f64,
    /// `exp` of the grid maximum.
    pub lower: f64,
    /// Grid maximum pushed up by the Lipschitz bound.
    pub upper: f64,
    pub window: (f64, f64),
    /// The maximiser sits at the window edge; a wider window might find more.
    pub window_flagged: bool,
}

pub const DEFAULT_L2_STEP: f64 = 1e-4;

/// `κ₂(Λ) = sup_t exp W₂(t)` over a window, after scaling to covolume 1.
pub fn mordell_l2(lat: &Lattice2D, window: Option<(f64, f64)>, step: f64) -> Result<L2Estimate> {
    if !(step > 0.0) {
        return Err(Error::Invalid("step must be positive".into()));
    }
    let (lo, hi) = window.unwrap_or((-5.0, 5.0));
    if lo > hi {
        return Err(Error::Invalid("empty window".into()));
    }
    let ls = LogSystole::new(lat, lo.abs().max(hi.abs()) + std::f64::consts::LN_2)?;
    let shift = 0.5 * ls.covolume().ln();
    let n = ((hi - lo) / step).ceil() as usize;
    let mut grid_max = f64::NEG_INFINITY;
    for i in 0..=n {
        let t = (lo + i as f64 * step).min(hi);
        grid_max = grid_max.max(ls.w2(t));
    }
    let (sup, argmax) = ls.sup_w2(lo, hi);
    let sup = sup.max(grid_max);
    Ok(L2Estimate {
        value: (sup - shift).exp(),
        argmax,
        lower: (grid_max - shift).exp(),
        upper: (grid_max + step / 2.0 - shift).exp(),
        window: (lo, hi),
        window_flagged: (argmax - lo).abs() < step || (hi - argmax).abs() < step,
    })
}

/// Rows `(t, W, W₂)` over `[t0, t1]`.
pub fn profile_rows(lat: &Lattice2D, t0: f64, t1: f64, step: f64) -> Result<Vec<(f64, f64, f64)>> {
    if !(step > 0.0) || t0 > t1 {
        return Err(Error::Invalid("need step > 0 and t0 ≤ t1".into()));
    }
    let ls = LogSystole::new(lat, t0.abs().max(t1.abs()) + 1.0)?;
    let n = ((t1 - t0) / step + 1e-9).floor() as usize;
    Ok((0..=n)
        .map(|i| {
            let t = t0 + i as f64 * step;
            (t, ls.w(t), ls.w2(t))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::QuadraticSurd;
    use crate::lattice::reconstruct_biinfinite;

    fn surd(p: i64, q: i64, d: i64, r: i64) -> Real {
        Real::Exact(QuadraticSurd::new(p, q, d, r).unwrap())
    }

    #[test]
    fn systole_values() {
        assert_eq!(sys_linf(&Lattice2D::integer()).unwrap(), Real::one());
        assert_eq!(sys_linf(&Lattice2D::hexagonal()).unwrap(), surd(0, 1, 3, 2));
        assert_eq!(log_systole(&Lattice2D::integer(), 0.0).unwrap(), 0.0);
        assert!((log_systole(&Lattice2D::integer(), 1.5).unwrap() + 1.5).abs() < 1e-12);
    }

    #[test]
    fn golden_minimum() {
        let (lat, _) = reconstruct_biinfinite(&ExpansionSequence::periodic(vec![1]), 4).unwrap();
        let w = log_systole(&lat, 0.0).unwrap();
        assert!((w + 0.25 * 5f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn extrema_all_ones() {
        let e = local_extrema(&ExpansionSequence::periodic(vec![1]), 0).unwrap();
        assert_eq!(e.min_arg, Some(surd(0, 1, 5, 1)));
        assert!((e.min + 0.4024).abs() < 1e-4);
        assert!((e.max - 0.5 * ((5.0 + 5f64.sqrt()) / 10.0).ln()).abs() < 1e-12);
        assert!(e.max >= e.min);
    }

    #[test]
    fn periodic_spectra() {
        let one = ExpansionSequence::periodic(vec![1]);
        let m = spectrum_value_periodic(&one, SpectrumKind::Markov).unwrap();
        assert_eq!(m.value, surd(0, 1, 5, 1));
        let g = spectrum_value_periodic(&one, SpectrumKind::MordellGruber).unwrap();
        assert_eq!(g.value, surd(5, 1, 5, 10));
        let d = spectrum_value_periodic(&one, SpectrumKind::Dirichlet).unwrap();
        assert_eq!(d.value, g.value);
        let two_one = ExpansionSequence::periodic(vec![2, 1]);
        let v = spectrum_value_periodic(&two_one, SpectrumKind::MordellGruber).unwrap();
        assert_eq!(v.value, surd(3, 1, 3, 6));
        assert_eq!(v.offset, 0);
    }

    #[test]
    fn l2_bounds() {
        let z = mordell_l2(&Lattice2D::integer(), None, 1e-3).unwrap();
        assert!((z.value - 1.0).abs() < 1e-12);
        let h = mordell_l2(&Lattice2D::hexagonal(), None, 1e-3).unwrap();
        assert!((h.value - (4.0f64 / 3.0).powf(0.25)).abs() < 1e-12);
        assert!(h.lower <= h.value + 1e-15 && h.value <= h.upper + 1e-15);
        assert_eq!(l2_log_systole(&Lattice2D::hexagonal(), 0.0).unwrap(), 0.0);
    }

    #[test]
    fn profile_matches_sequence_extrema() {
        let seq = ExpansionSequence::periodic(vec![2, 1]);
        let (lat, _) = reconstruct_biinfinite(&seq, 8).unwrap();
        let ls = LogSystole::new(&lat, 3.0).unwrap();
        let prof = ls.profile();
        let maxes: Vec<f64> = prof.breakpoints.iter().filter(|b| b.is_max).map(|b| b.w).collect();
        let top = maxes.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let kappa = (2.0 * top).exp();
        assert!((kappa - (3.0 + 3f64.sqrt()) / 6.0).abs() < 1e-12);
        for b in &prof.breakpoints {
            assert!((ls.w(b.t) - b.w).abs() < 1e-9);
        }
    }
}
