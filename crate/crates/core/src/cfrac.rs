//! Continued-fraction expansion sequences, their values and tails.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{QuadraticSurd, Rational, Real, ValidatedInterval};

/// Depth used for interval tails of non-periodic sequences.
pub const DEFAULT_TAIL_DEPTH: usize = 64;

/// A partial quotient: a positive integer or ∞.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Fin(u64),
    Inf,
}

impl Term {
    pub fn finite(self) -> Option<u64> {
        match self {
            Term::Fin(n) => Some(n),
            Term::Inf => None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Fin(n) => write!(f, "{n}"),
            Term::Inf => write!(f, "∞"),
        }
    }
}

/// One-sided sequence `(c₁, c₂, …)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum OneSided {
    /// Listed terms, then either ∞ or an unknown continuation.
    Finite { terms: Vec<u64>, terminal_infinity: bool },
    Periodic { preperiod: Vec<u64>, period: Vec<u64> },
}

/// Index sequence in one of its finitely presented shapes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExpansionSequence {
    Finite { terms: Vec<u64>, terminal_infinity: bool },
    Periodic { preperiod: Vec<u64>, period: Vec<u64> },
    /// `left = (a₋₁, a₋₂, …)`, `right = (a₀, a₁, …)`.
    Bi { left: OneSided, right: OneSided },
}

/// The tails `α_k = [0; a_{k+1}, …]` and `β_k = [0; a_{k−1}, …]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailPair {
    pub alpha: Real,
    pub beta: Real,
}

fn check_terms(t: &[u64]) -> Result<()> {
    if t.iter().any(|&x| x == 0) {
        return Err(Error::Invalid("partial quotients must be ≥ 1".into()));
    }
    Ok(())
}

/// `[0; t₁, …, tₙ]`; the empty list gives 0.
pub fn eval_finite(terms: &[u64]) -> Result<Rational> {
    check_terms(terms)?;
    let mut v = Rational::zero();
    for &t in terms.iter().rev() {
        v = (Rational::from_integer(t.into()) + v).recip();
    }
    Ok(v)
}

fn fold_terms(prefix: &[Term], tail: Real) -> Real {
    // a leading ∞ cuts the expansion: [0; t₁…t_{j−1}, ∞, …] = [0; t₁…t_{j−1}]
    let cut = prefix.iter().position(|t| *t == Term::Inf);
    let (terms, mut v) = match cut {
        Some(j) => (&prefix[..j], Real::zero()),
        None => (prefix, tail),
    };
    for t in terms.iter().rev() {
        let n = t.finite().expect("finite after cut") as i64;
        v = v.add_int(n).recip().expect("positive denominator");
    }
    v
}

/// `[0; pre…, (period)̄]` as an exact surd.
pub fn eval_periodic(preperiod: &[u64], period: &[u64]) -> Result<QuadraticSurd> {
    if period.is_empty() {
        return Err(Error::Invalid("empty period".into()));
    }
    check_terms(preperiod)?;
    check_terms(period)?;
    let (mut p0, mut q0) = (BigInt::one(), BigInt::zero());
    let (mut p1, mut q1) = (BigInt::zero(), BigInt::one());
    for &c in period {
        let c = BigInt::from(c);
        let p2 = &c * &p1 + &p0;
        let q2 = &c * &q1 + &q0;
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    // x = (p1 + p0 x)/(q1 + q0 x)  ⇒  q0 x² + (q1 − p0) x − p1 = 0
    let b = &q1 - &p0;
    let disc = &b * &b + BigInt::from(4) * &q0 * &p1;
    let x = QuadraticSurd::new(-b, 1, disc, BigInt::from(2) * &q0)?;
    let mut v = Real::Exact(x);
    for &c in preperiod.iter().rev() {
        v = v.add_int(c as i64).recip()?;
    }
    match v {
        Real::Exact(s) => Ok(s),
        Real::Approx(_) => unreachable!("single-field arithmetic"),
    }
}

impl OneSided {
    pub fn finite(terms: Vec<u64>, terminal_infinity: bool) -> Self {
        OneSided::Finite { terms, terminal_infinity }
    }

    pub fn periodic(preperiod: Vec<u64>, period: Vec<u64>) -> Self {
        OneSided::Periodic { preperiod, period }
    }

    /// A side consisting of ∞ immediately.
    pub fn infinity() -> Self {
        OneSided::Finite { terms: vec![], terminal_infinity: true }
    }

    fn validate(&self) -> Result<()> {
        match self {
            OneSided::Finite { terms, .. } => check_terms(terms),
            OneSided::Periodic { preperiod, period } => {
                if period.is_empty() {
                    return Err(Error::Invalid("empty period".into()));
                }
                check_terms(preperiod)?;
                check_terms(period)
            }
        }
    }

    /// Term `cᵢ₊₁` (0-based); `None` when undefined.
    pub fn term(&self, i: usize) -> Option<Term> {
        match self {
            OneSided::Finite { terms, terminal_infinity } => match i.cmp(&terms.len()) {
                Ordering::Less => Some(Term::Fin(terms[i])),
                Ordering::Equal if *terminal_infinity => Some(Term::Inf),
                _ => None,
            },
            OneSided::Periodic { preperiod, period } => Some(Term::Fin(if i < preperiod.len() {
                preperiod[i]
            } else {
                period[(i - preperiod.len()) % period.len()]
            })),
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, OneSided::Periodic { .. })
    }

    /// `[0; c_{start+1}, c_{start+2}, …]`, truncated to `depth` terms when the
    /// continuation is not known exactly.
    pub fn tail_value(&self, start: usize, depth: usize) -> Result<Real> {
        match self {
            OneSided::Periodic { preperiod, period } => {
                let s = if start < preperiod.len() {
                    eval_periodic(&preperiod[start..], period)?
                } else {
                    let r = (start - preperiod.len()) % period.len();
                    let rot: Vec<u64> = period[r..].iter().chain(&period[..r]).copied().collect();
                    eval_periodic(&[], &rot)?
                };
                Ok(Real::Exact(s))
            }
            OneSided::Finite { terms, terminal_infinity } => {
                if start > terms.len() && *terminal_infinity {
                    return Err(Error::OutOfRange(format!("offset {start} lies beyond the terminal ∞")));
                }
                let rest = terms.get(start..).unwrap_or(&[]);
                if *terminal_infinity && rest.len() <= depth {
                    return Ok(Real::rational(&eval_finite(rest)?));
                }
                let rest = &rest[..rest.len().min(depth)];
                let (a, b) = truncation_bounds(rest);
                let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                Ok(Real::Approx(ValidatedInterval::from_rationals(lo, hi)?))
            }
        }
    }

    fn first_terms(&self, n: usize) -> Vec<Term> {
        (0..n).map_while(|i| self.term(i)).collect()
    }
}

/// Endpoints `[0; c₁…cₙ]` and `[0; c₁…cₙ + 1]` (unordered); `n = 0` gives `0, 1`.
pub fn truncation_bounds(c: &[u64]) -> (Rational, Rational) {
    if c.is_empty() {
        return (Rational::zero(), Rational::one());
    }
    let a = eval_finite(c).expect("validated terms");
    let mut bumped = c.to_vec();
    *bumped.last_mut().expect("nonempty") += 1;
    let b = eval_finite(&bumped).expect("validated terms");
    (a, b)
}

impl ExpansionSequence {
    pub fn periodic(period: Vec<u64>) -> Self {
        ExpansionSequence::Periodic { preperiod: vec![], period }
    }

    pub fn eventually_periodic(preperiod: Vec<u64>, period: Vec<u64>) -> Self {
        ExpansionSequence::Periodic { preperiod, period }
    }

    pub fn finite(terms: Vec<u64>, terminal_infinity: bool) -> Self {
        ExpansionSequence::Finite { terms, terminal_infinity }
    }

    pub fn bi(left: OneSided, right: OneSided) -> Self {
        ExpansionSequence::Bi { left, right }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ExpansionSequence::Finite { terms, terminal_infinity } => {
                OneSided::finite(terms.clone(), *terminal_infinity).validate()
            }
            ExpansionSequence::Periodic { preperiod, period } => {
                OneSided::periodic(preperiod.clone(), period.clone()).validate()
            }
            ExpansionSequence::Bi { left, right } => {
                left.validate()?;
                right.validate()
            }
        }
    }

    /// The one-sided view, if this is not a bi-infinite sequence.
    pub fn one_sided(&self) -> Option<OneSided> {
        match self {
            ExpansionSequence::Finite { terms, terminal_infinity } => {
                Some(OneSided::finite(terms.clone(), *terminal_infinity))
            }
            ExpansionSequence::Periodic { preperiod, period } => {
                Some(OneSided::periodic(preperiod.clone(), period.clone()))
            }
            ExpansionSequence::Bi { .. } => None,
        }
    }

    /// The purely periodic period, if any.
    pub fn pure_period(&self) -> Option<&[u64]> {
        match self {
            ExpansionSequence::Periodic { preperiod, period } if preperiod.is_empty() => Some(period),
            _ => None,
        }
    }

    /// Two-sided view: a purely periodic sequence repeats in both directions,
    /// any other one-sided sequence gets `a₋₁ = ∞`.
    pub fn to_bi(&self) -> (OneSided, OneSided) {
        match self {
            ExpansionSequence::Bi { left, right } => (left.clone(), right.clone()),
            ExpansionSequence::Periodic { preperiod, period } if preperiod.is_empty() => {
                let rev: Vec<u64> = period.iter().rev().copied().collect();
                (OneSided::periodic(vec![], rev), OneSided::periodic(vec![], period.clone()))
            }
            other => (OneSided::infinity(), other.one_sided().expect("one-sided")),
        }
    }

    /// `a_k` in the two-sided indexing.
    pub fn term_at(&self, k: i64) -> Option<Term> {
        let (left, right) = self.to_bi();
        bi_term(&left, &right, k)
    }

    /// Tails at offset `k` of the two-sided view.
    pub fn tails_at(&self, k: i64, depth: usize) -> Result<TailPair> {
        let (left, right) = self.to_bi();
        tails_of(&left, &right, k, depth)
    }
}

pub(crate) fn bi_term(left: &OneSided, right: &OneSided, k: i64) -> Option<Term> {
    if k >= 0 {
        right.term(k as usize)
    } else {
        left.term((-k - 1) as usize)
    }
}

/// Value of `[0; x_1, x_2, …]` where `x_i = a_{from + i·dir}` walks one way.
fn directional_tail(left: &OneSided, right: &OneSided, from: i64, forward: bool, depth: usize) -> Result<Real> {
    // crossing the origin needs an explicit prefix
    let (side, start, prefix): (&OneSided, usize, Vec<Term>) = if forward {
        if from >= 0 {
            (right, from as usize, vec![])
        } else {
            let pre = (from..0).map(|k| bi_term(left, right, k)).collect::<Option<Vec<_>>>();
            let pre = pre.ok_or_else(|| Error::OutOfRange(format!("a_{from} undefined")))?;
            (right, 0, pre)
        }
    } else if from < 0 {
        (left, (-from - 1) as usize, vec![])
    } else {
        let pre = (0..=from).rev().map(|k| bi_term(left, right, k)).collect::<Option<Vec<_>>>();
        let pre = pre.ok_or_else(|| Error::OutOfRange(format!("a_{from} undefined")))?;
        (left, 0, pre)
    };
    if prefix.contains(&Term::Inf) {
        return Ok(fold_terms(&prefix, Real::zero()));
    }
    let tail = match side.term(start) {
        Some(Term::Inf) => Real::zero(),
        _ => side.tail_value(start, depth.saturating_sub(prefix.len()).max(1))?,
    };
    Ok(fold_terms(&prefix, tail))
}

pub(crate) fn tails_of(left: &OneSided, right: &OneSided, k: i64, depth: usize) -> Result<TailPair> {
    if bi_term(left, right, k).is_none() {
        return Err(Error::OutOfRange(format!("a_{k} is undefined")));
    }
    let alpha = directional_tail(left, right, k + 1, true, depth)?;
    let beta = directional_tail(left, right, k - 1, false, depth)?;
    Ok(TailPair { alpha, beta })
}

/// First `n` convergents `p_k/q_k`, `k = 1…n`.
pub fn convergents(seq: &ExpansionSequence, n: usize) -> Result<Vec<Rational>> {
    let side = seq.one_sided().ok_or_else(|| Error::Invalid("convergents need a one-sided sequence".into()))?;
    let terms = side.first_terms(n);
    if terms.len() < n || terms.contains(&Term::Inf) {
        return Err(Error::OutOfRange(format!("only {} finite terms available", terms.iter().take_while(|t| **t != Term::Inf).count())));
    }
    let (mut p0, mut q0) = (BigInt::one(), BigInt::zero());
    let (mut p1, mut q1) = (BigInt::zero(), BigInt::one());
    let mut out = Vec::with_capacity(n);
    for t in terms {
        let c = BigInt::from(t.finite().expect("checked"));
        let p2 = &c * &p1 + &p0;
        let q2 = &c * &q1 + &q0;
        out.push(Rational::new(p2.clone(), q2.clone()));
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    Ok(out)
}

// [0; …, c, 1] = [0; …, c+1]: keep terminated expansions in the short form.
fn merge_trailing_one(x: OneSided) -> OneSided {
    match x {
        OneSided::Finite { mut terms, terminal_infinity } if terms.len() >= 2 && terms.last() == Some(&1) => {
            terms.pop();
            *terms.last_mut().expect("len ≥ 1") += 1;
            merge_trailing_one(OneSided::Finite { terms, terminal_infinity })
        }
        x => x,
    }
}

/// Orders `[0; s₁, …]` against `[0; t₁, …]`; a sequence that ends is read as
/// continuing with ∞.
pub fn compare_cf(s: &ExpansionSequence, t: &ExpansionSequence) -> Result<Ordering> {
    let (a, b) = match (s.one_sided(), t.one_sided()) {
        (Some(a), Some(b)) => (merge_trailing_one(a), merge_trailing_one(b)),
        _ => return Err(Error::Invalid("compare_cf needs one-sided sequences".into())),
    };
    let span = |x: &OneSided| match x {
        OneSided::Finite { terms, .. } => terms.len() + 1,
        OneSided::Periodic { preperiod, period } => preperiod.len() + period.len(),
    };
    let limit = span(&a) + span(&b) + span(&a) * span(&b) + 1;
    for i in 0..limit {
        let x = a.term(i).unwrap_or(Term::Inf);
        let y = b.term(i).unwrap_or(Term::Inf);
        if x == Term::Inf && y == Term::Inf {
            return Ok(Ordering::Equal);
        }
        if x != y {
            // 1-based index i+1; odd index: the larger term gives the smaller value
            let ord = x.cmp(&y);
            return Ok(if (i + 1) % 2 == 1 { ord.reverse() } else { ord });
        }
    }
    Ok(Ordering::Equal)
}

/// Enclosure of a one-sided sequence from its first `n` terms.
pub fn truncation_interval(seq: &ExpansionSequence, n: usize) -> Result<ValidatedInterval> {
    let side = seq.one_sided().ok_or_else(|| Error::Invalid("need a one-sided sequence".into()))?;
    let terms = side.first_terms(n);
    if let Some(j) = terms.iter().position(|t| *t == Term::Inf) {
        let fin: Vec<u64> = terms[..j].iter().filter_map(|t| t.finite()).collect();
        return Ok(ValidatedInterval::point(&eval_finite(&fin)?));
    }
    if terms.len() < n {
        return Err(Error::OutOfRange(format!("only {} terms available", terms.len())));
    }
    let fin: Vec<u64> = terms.iter().filter_map(|t| t.finite()).collect();
    let (a, b) = truncation_bounds(&fin);
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    ValidatedInterval::from_rationals(lo, hi)
}

/// Exact value of a one-sided sequence when it has one.
pub fn value(seq: &ExpansionSequence) -> Result<Real> {
    let side = seq.one_sided().ok_or_else(|| Error::Invalid("need a one-sided sequence".into()))?;
    side.tail_value(0, DEFAULT_TAIL_DEPTH)
}

fn fmt_list(v: &[u64]) -> String {
    v.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for OneSided {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OneSided::Finite { terms, terminal_infinity } => {
                write!(f, "({}{})", fmt_list(terms), if *terminal_infinity { ",∞" } else { ",…" })
            }
            OneSided::Periodic { preperiod, period } if preperiod.is_empty() => {
                write!(f, "({})\u{305}", fmt_list(period))
            }
            OneSided::Periodic { preperiod, period } => {
                write!(f, "({},({})\u{305})", fmt_list(preperiod), fmt_list(period))
            }
        }
    }
}

impl fmt::Display for ExpansionSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExpansionSequence::Bi { left, right } => write!(f, "{left} | {right}"),
            other => write!(f, "{}", other.one_sided().expect("one-sided")),
        }
    }
}

// JSON shape: {"kind": "finite" | "periodic" | "bi", ...}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum SeqRepr {
    Finite {
        terms: Vec<u64>,
        #[serde(default)]
        terminal_infinity: bool,
    },
    Periodic {
        #[serde(default)]
        preperiod: Vec<u64>,
        period: Vec<u64>,
    },
    Bi {
        left: Box<SeqRepr>,
        right: Box<SeqRepr>,
    },
}

fn side_repr(s: &OneSided) -> SeqRepr {
    match s.clone() {
        OneSided::Finite { terms, terminal_infinity } => SeqRepr::Finite { terms, terminal_infinity },
        OneSided::Periodic { preperiod, period } => SeqRepr::Periodic { preperiod, period },
    }
}

fn side_from(r: SeqRepr) -> std::result::Result<OneSided, String> {
    match r {
        SeqRepr::Finite { terms, terminal_infinity } => Ok(OneSided::Finite { terms, terminal_infinity }),
        SeqRepr::Periodic { preperiod, period } => Ok(OneSided::Periodic { preperiod, period }),
        SeqRepr::Bi { .. } => Err("nested bi-infinite sequence".into()),
    }
}

impl Serialize for ExpansionSequence {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let r = match self.clone() {
            ExpansionSequence::Finite { terms, terminal_infinity } => SeqRepr::Finite { terms, terminal_infinity },
            ExpansionSequence::Periodic { preperiod, period } => SeqRepr::Periodic { preperiod, period },
            ExpansionSequence::Bi { left, right } => {
                SeqRepr::Bi { left: Box::new(side_repr(&left)), right: Box::new(side_repr(&right)) }
            }
        };
        r.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExpansionSequence {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let seq = match SeqRepr::deserialize(d)? {
            SeqRepr::Finite { terms, terminal_infinity } => ExpansionSequence::Finite { terms, terminal_infinity },
            SeqRepr::Periodic { preperiod, period } => ExpansionSequence::Periodic { preperiod, period },
            SeqRepr::Bi { left, right } => ExpansionSequence::Bi {
                left: side_from(*left).map_err(D::Error::custom)?,
                right: side_from(*right).map_err(D::Error::custom)?,
            },
        };
        seq.validate().map_err(D::Error::custom)?;
        Ok(seq)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, r: i64) -> Rational {
        Rational::new(p.into(), r.into())
    }

    fn surd(p: i64, qq: i64, d: i64, r: i64) -> QuadraticSurd {
        QuadraticSurd::new(p, qq, d, r).unwrap()
    }

    #[test]
    fn finite_values() {
        assert_eq!(eval_finite(&[2]).unwrap(), q(1, 2));
        assert_eq!(eval_finite(&[1, 2, 3]).unwrap(), q(7, 10));
        assert_eq!(eval_finite(&[]).unwrap(), q(0, 1));
        assert!(eval_finite(&[1, 0]).is_err());
    }

    #[test]
    fn periodic_values() {
        assert_eq!(eval_periodic(&[], &[1]).unwrap(), surd(-1, 1, 5, 2));
        assert_eq!(eval_periodic(&[], &[2]).unwrap(), surd(-1, 1, 2, 1));
        assert_eq!(eval_periodic(&[], &[1, 2]).unwrap(), surd(-1, 1, 3, 1));
        assert_eq!(eval_periodic(&[2], &[1, 2]).unwrap(), surd(-1, 1, 3, 2));
        assert!(eval_periodic(&[], &[]).is_err());
    }

    #[test]
    fn convergent_lists() {
        let g = ExpansionSequence::periodic(vec![1]);
        assert_eq!(convergents(&g, 4).unwrap(), vec![q(1, 1), q(1, 2), q(2, 3), q(3, 5)]);
        let two = ExpansionSequence::periodic(vec![2]);
        assert_eq!(convergents(&two, 3).unwrap(), vec![q(1, 2), q(2, 5), q(5, 12)]);
        assert!(convergents(&ExpansionSequence::finite(vec![1, 2], true), 3).is_err());
    }

    #[test]
    fn comparisons() {
        let f = |t: Vec<u64>| ExpansionSequence::finite(t, false);
        assert_eq!(compare_cf(&f(vec![1]), &f(vec![2])).unwrap(), Ordering::Greater);
        assert_eq!(compare_cf(&f(vec![1, 2]), &f(vec![1, 2])).unwrap(), Ordering::Equal);
        let g = ExpansionSequence::periodic(vec![1]);
        let s = ExpansionSequence::periodic(vec![2]);
        assert_eq!(compare_cf(&g, &s).unwrap(), Ordering::Greater);
        assert_eq!(compare_cf(&g, &ExpansionSequence::periodic(vec![1, 1])).unwrap(), Ordering::Equal);
        assert_eq!(compare_cf(&f(vec![1]), &f(vec![1, 2])).unwrap(), Ordering::Greater);
    }

    #[test]
    fn truncations() {
        let g = ExpansionSequence::periodic(vec![1]);
        let i0 = truncation_interval(&g, 0).unwrap();
        assert_eq!(i0, ValidatedInterval::from_rationals(q(0, 1), q(1, 1)).unwrap());
        let i3 = truncation_interval(&g, 3).unwrap();
        assert!(i3.contains(&q(3, 5)) && i3.contains(&q(2, 3)));
        assert!(i3.width_f64() <= 1.0 / 15.0 + 1e-40);
        assert_eq!(truncation_bounds(&[2]), (q(1, 2), q(1, 3)));
    }

    #[test]
    fn tails() {
        let g = ExpansionSequence::periodic(vec![1]);
        let t = g.tails_at(5, 64).unwrap();
        assert_eq!(t.alpha, Real::Exact(surd(-1, 1, 5, 2)));
        assert_eq!(t.beta, t.alpha);
        // (…,1,2,1,2,…) with a₀ = 2
        let s = ExpansionSequence::periodic(vec![2, 1]);
        assert_eq!(s.tails_at(0, 64).unwrap().beta, Real::Exact(surd(-1, 1, 3, 1)));
        assert_eq!(s.tails_at(-1, 64).unwrap().alpha, Real::Exact(surd(-1, 1, 3, 2)));
        // mono-infinite: β₀ = 0 because a₋₁ = ∞
        let m = ExpansionSequence::eventually_periodic(vec![3], vec![1]);
        assert_eq!(m.tails_at(0, 64).unwrap().beta, Real::zero());
        assert!(m.tails_at(-2, 64).is_err());
    }

    #[test]
    fn tails_across_origin() {
        // (1̄, 2, 1̄) centred at the 2
        let s = ExpansionSequence::bi(OneSided::periodic(vec![], vec![1]), OneSided::periodic(vec![2], vec![1]));
        let t = s.tails_at(-3, 64).unwrap();
        // α₋₃ = [0; 1, 1, 2, 1̄]
        let want = eval_periodic(&[1, 1, 2], &[1]).unwrap();
        assert_eq!(t.alpha, Real::Exact(want));
        let t = s.tails_at(3, 64).unwrap();
        assert_eq!(t.beta, Real::Exact(eval_periodic(&[1, 1, 2], &[1]).unwrap()));
    }

    #[test]
    fn json_shapes() {
        let s: ExpansionSequence = serde_json::from_str(r#"{"kind":"periodic","period":[1]}"#).unwrap();
        assert_eq!(s, ExpansionSequence::periodic(vec![1]));
        let b: ExpansionSequence = serde_json::from_str(
            r#"{"kind":"bi","left":{"kind":"periodic","period":[1]},"right":{"kind":"finite","terms":[2,3],"terminal_infinity":true}}"#,
        )
        .unwrap();
        let back: ExpansionSequence = serde_json::from_str(&serde_json::to_string(&b).unwrap()).unwrap();
        assert_eq!(back, b);
        assert!(serde_json::from_str::<ExpansionSequence>(r#"{"kind":"finite","terms":[0]}"#).is_err());
        assert!(serde_json::from_str::<ExpansionSequence>(r#"{"kind":"periodic","period":[]}"#).is_err());
    }
}
