//! Generalized Perron formulas and the spectra they induce.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::cfrac::{ExpansionSequence, OneSided, Term};
use crate::error::{Error, Result};
use crate::exact::Real;
use crate::lattice::shift_canonical;

/// Extended real value of a Perron function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtReal {
    Finite(Real),
    PosInf,
    NegInf,
}

impl ExtReal {
    pub fn to_f64(&self) -> f64 {
        match self {
            ExtReal::Finite(r) => r.to_f64(),
            ExtReal::PosInf => f64::INFINITY,
            ExtReal::NegInf => f64::NEG_INFINITY,
        }
    }

    pub fn finite(&self) -> Option<&Real> {
        match self {
            ExtReal::Finite(r) => Some(r),
            _ => None,
        }
    }

    fn rank(&self) -> i8 {
        match self {
            ExtReal::NegInf => -1,
            ExtReal::Finite(_) => 0,
            ExtReal::PosInf => 1,
        }
    }

    pub fn try_cmp(&self, o: &ExtReal) -> Result<Ordering> {
        match (self, o) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => a.try_cmp(b),
            _ => Ok(self.rank().cmp(&o.rank())),
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(r) => write!(f, "{r}"),
            ExtReal::PosInf => write!(f, "∞"),
            ExtReal::NegInf => write!(f, "-∞"),
        }
    }
}

pub type Evaluator = Arc<dyn Fn(&Real, &Real, &[u64]) -> Result<Real> + Send + Sync>;

/// `P_k = f(α_{k+l−1}, β_k, a_k, …, a_{k+l−1})` with `f = I` when an `a_i` is ∞.
#[derive(Clone)]
pub struct PerronSpec {
    pub name: String,
    pub arity: usize,
    pub infinity_value: ExtReal,
    pub eval: Evaluator,
}

impl fmt::Debug for PerronSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PerronSpec")
            .field("name", &self.name)
            .field("arity", &self.arity)
            .field("infinity_value", &self.infinity_value)
            .finish()
    }
}

impl PerronSpec {
    pub fn new(
        name: &str,
        arity: usize,
        infinity_value: ExtReal,
        f: impl Fn(&Real, &Real, &[u64]) -> Result<Real> + Send + Sync + 'static,
    ) -> Self {
        PerronSpec { name: name.into(), arity, infinity_value, eval: Arc::new(f) }
    }

    /// `f(α, β, a₀) = α + β + a₀`, `I = ∞`.
    pub fn markov() -> Self {
        Self::new("Markov", 1, ExtReal::PosInf, |a, b, n| Ok(a.add(b).add_int(n[0] as i64)))
    }

    /// `f(α, β) = 1/(1 + αβ)`.
    pub fn mordell_gruber() -> Self {
        Self::new("MG2", 0, ExtReal::Finite(Real::one()), |a, b, _| a.mul(b).add_int(1).recip())
    }

    /// Applies `f`, short-circuiting to `I` on an ∞ parameter.
    pub fn apply(&self, alpha: &Real, beta: &Real, params: &[Term]) -> Result<ExtReal> {
        if params.len() != self.arity {
            return Err(Error::Invalid(format!("{} expects {} parameters", self.name, self.arity)));
        }
        let mut ints = Vec::with_capacity(params.len());
        for t in params {
            match t {
                Term::Fin(n) => ints.push(*n),
                Term::Inf => return Ok(self.infinity_value.clone()),
            }
        }
        Ok(ExtReal::Finite((self.eval)(alpha, beta, &ints)?))
    }
}

/// `P_k` of a sequence.
pub fn evaluate_p(spec: &PerronSpec, seq: &ExpansionSequence, k: i64, depth: usize) -> Result<ExtReal> {
    let l = spec.arity as i64;
    let mut params = Vec::with_capacity(spec.arity);
    for i in k..k + l {
        let t = seq.term_at(i).ok_or_else(|| Error::OutOfRange(format!("a_{i} undefined")))?;
        params.push(t);
        if t == Term::Inf {
            return Ok(spec.infinity_value.clone());
        }
    }
    let alpha = seq.tails_at(k + l - 1, depth)?.alpha;
    let beta = seq.tails_at(k, depth)?.beta;
    spec.apply(&alpha, &beta, &params)
}

// ---------------------------------------------------------------------------
// Good continuity

#[derive(Clone, Debug)]
pub struct ContinuityReport {
    pub clause_a_pass: bool,
    /// Largest spread of `f` (or distance to `I`) once integral parameters exceed the cap.
    pub clause_a_oscillation: f64,
    pub clause_b_pass: bool,
    /// Largest jump between neighbouring `(α, β)` grid points.
    pub clause_b_modulus: f64,
    pub pass: bool,
    pub note: String,
}

fn grid_point(i: usize, n: usize) -> Real {
    Real::ratio(i as i64, (n - 1) as i64)
}

/// Heuristic check of both good-continuity clauses at a given resolution.
pub fn probe_good_continuity(spec: &PerronSpec, grid_n: usize, entry_cap: u64, threshold: f64) -> Result<ContinuityReport> {
    if grid_n < 2 {
        return Err(Error::Invalid("grid_n must be at least 2".into()));
    }
    let l = spec.arity;
    let corners = [0usize, grid_n / 2, grid_n - 1];
    let f64_of = |a: &Real, b: &Real, n: &[u64]| -> Result<f64> { Ok((spec.eval)(a, b, n)?.to_f64()) };

    // (a) integral parameters in [cap, 2·cap]
    let (clause_a_pass, osc) = if l == 0 {
        (true, 0.0)
    } else {
        let levels = [entry_cap, entry_cap + 1, 2 * entry_cap];
        let mut vals = Vec::new();
        let mut tuple = vec![0usize; l];
        loop {
            let ints: Vec<u64> = tuple.iter().map(|&i| levels[i]).collect();
            for &i in &corners {
                for &j in &corners {
                    vals.push(f64_of(&grid_point(i, grid_n), &grid_point(j, grid_n), &ints)?);
                }
            }
            let mut pos = 0;
            while pos < l && tuple[pos] == levels.len() - 1 {
                tuple[pos] = 0;
                pos += 1;
            }
            if pos == l {
                break;
            }
            tuple[pos] += 1;
        }
        match &spec.infinity_value {
            ExtReal::PosInf => {
                let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
                // divergence: values must already exceed 1/threshold
                (lo >= 1.0 / threshold, 1.0 / lo)
            }
            ExtReal::NegInf => {
                let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                (hi <= -1.0 / threshold, 1.0 / hi.abs())
            }
            ExtReal::Finite(i) => {
                let iv = i.to_f64();
                let dev = vals.iter().map(|v| (v - iv).abs()).fold(0.0, f64::max);
                let spread = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
                    - vals.iter().cloned().fold(f64::INFINITY, f64::min);
                let osc = dev.max(spread);
                (osc <= threshold, osc)
            }
        }
    };

    // (b) continuity in (α, β) for small integral tuples
    let small: Vec<Vec<u64>> = if l == 0 {
        vec![vec![]]
    } else {
        (1..=3u64).map(|v| vec![v; l]).collect()
    };
    let mut modulus: f64 = 0.0;
    for ints in &small {
        let mut grid = vec![vec![0.0; grid_n]; grid_n];
        for (i, row) in grid.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = f64_of(&grid_point(i, grid_n), &grid_point(j, grid_n), ints)?;
            }
        }
        for i in 0..grid_n {
            for j in 0..grid_n {
                if i + 1 < grid_n {
                    modulus = modulus.max((grid[i + 1][j] - grid[i][j]).abs());
                }
                if j + 1 < grid_n {
                    modulus = modulus.max((grid[i][j + 1] - grid[i][j]).abs());
                }
            }
        }
    }
    let clause_b_pass = modulus.is_finite() && modulus <= threshold.max(4.0 / (grid_n - 1) as f64);
    Ok(ContinuityReport {
        clause_a_pass,
        clause_a_oscillation: osc,
        clause_b_pass,
        clause_b_modulus: modulus,
        pass: clause_a_pass && clause_b_pass,
        note: "no violation found at this resolution; not a proof".into(),
    })
}

// ---------------------------------------------------------------------------
// Bidirectional accumulation sequences

/// A family `{a^{(j)}}` presented finitely.
#[derive(Clone)]
pub enum Family {
    /// Members repeat cyclically: member `j` is `list[j mod len]`.
    Cyclic(Vec<ExpansionSequence>),
    /// `member(j)`; from `start` on, `member(j + period)` agrees with `member(j)`
    /// except at the `divergent` offsets, where the term tends to ∞ with `j`.
    Rule {
        member: Arc<dyn Fn(u64) -> ExpansionSequence + Send + Sync>,
        start: u64,
        period: u64,
        divergent: Vec<i64>,
    },
    /// Only a finite prefix is known; terms are fixed from repeats inside it
    /// and flagged undecided.
    Prefix(Vec<ExpansionSequence>),
}

#[derive(Clone, Debug)]
pub struct AccumulationResult {
    /// `c_r` for the examined offsets (∞ allowed).
    pub terms: BTreeMap<i64, Term>,
    /// Witness member classes still matching after each offset was fixed.
    pub provenance: BTreeMap<i64, Vec<u64>>,
    /// Offsets whose value relied on an examined prefix only.
    pub undecided: Vec<i64>,
}

impl AccumulationResult {
    /// Two-sided sequence; a side ends at its first ∞.
    pub fn sequence(&self) -> ExpansionSequence {
        let mut right = Vec::new();
        let mut r_inf = false;
        for r in 0.. {
            match self.terms.get(&r) {
                Some(Term::Fin(n)) => right.push(*n),
                Some(Term::Inf) => {
                    r_inf = true;
                    break;
                }
                None => break,
            }
        }
        let mut left = Vec::new();
        let mut l_inf = false;
        for r in 1.. {
            match self.terms.get(&-r) {
                Some(Term::Fin(n)) => left.push(*n),
                Some(Term::Inf) => {
                    l_inf = true;
                    break;
                }
                None => break,
            }
        }
        ExpansionSequence::bi(OneSided::finite(left, l_inf), OneSided::finite(right, r_inf))
    }
}

/// `c_0, c_{−1}, c_1, c_{−2}, …` each taken as the least value recurring among
/// the members that match everything fixed so far, or ∞ when none recurs.
pub fn accumulation_sequence(family: &Family, window: usize) -> Result<AccumulationResult> {
    if window == 0 {
        return Err(Error::Invalid("window must be ≥ 1".into()));
    }
    // classes: (label, representative member, divergent offsets)
    let (classes, divergent, prefix_only): (Vec<(u64, ExpansionSequence)>, Vec<i64>, bool) = match family {
        Family::Cyclic(list) => {
            if list.is_empty() {
                return Err(Error::Invalid("empty family".into()));
            }
            (list.iter().cloned().enumerate().map(|(i, s)| (i as u64, s)).collect(), vec![], false)
        }
        Family::Rule { member, start, period, divergent } => {
            if *period == 0 {
                return Err(Error::Invalid("period must be ≥ 1".into()));
            }
            ((*start..start + period).map(|j| (j, member(j))).collect(), divergent.clone(), false)
        }
        Family::Prefix(list) => {
            if list.is_empty() {
                return Err(Error::Invalid("empty family".into()));
            }
            (list.iter().cloned().enumerate().map(|(i, s)| (i as u64, s)).collect(), vec![], true)
        }
    };
    let mut live: Vec<usize> = (0..classes.len()).collect();
    let mut out = AccumulationResult { terms: BTreeMap::new(), provenance: BTreeMap::new(), undecided: vec![] };
    let mut order = vec![0i64];
    for r in 1..=window as i64 {
        order.push(-r);
        if r < window as i64 {
            order.push(r);
        }
    }
    let (mut left_done, mut right_done) = (false, false);
    for r in order {
        if (r < 0 && left_done) || (r > 0 && right_done) {
            continue;
        }
        let value = if divergent.contains(&r) {
            Term::Inf
        } else {
            let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
            for &c in &live {
                if let Some(Term::Fin(v)) = classes[c].1.term_at(r) {
                    *counts.entry(v).or_default() += 1;
                }
            }
            let need = if prefix_only { 2 } else { 1 };
            match counts.iter().find(|(_, &n)| n >= need) {
                Some((&v, _)) => Term::Fin(v),
                None => Term::Inf,
            }
        };
        if let Term::Fin(v) = value {
            live.retain(|&c| classes[c].1.term_at(r) == Some(Term::Fin(v)));
            if prefix_only {
                out.undecided.push(r);
            }
        } else if r < 0 {
            left_done = true;
        } else if r > 0 {
            right_done = true;
        }
        out.terms.insert(r, value);
        out.provenance.insert(r, live.iter().map(|&c| classes[c].0).collect());
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Periodic spectral sets τ′

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Limit {
    Inf,
    Sup,
}

#[derive(Clone, Debug)]
pub struct TauEntry {
    pub value: Real,
    pub witness_period: Vec<u64>,
    pub offset: usize,
}

impl TauEntry {
    pub fn to_json(&self) -> Value {
        let value = match &self.value {
            Real::Exact(s) => serde_json::to_value(s).expect("serializable"),
            Real::Approx(_) => json!(self.value.to_decimal(30)),
        };
        json!({"value": value, "exact": self.value.to_string(), "decimal": self.value.to_decimal(15),
               "witness_period": self.witness_period, "offset": self.offset})
    }
}

/// Extremal `P_k` over one period of a purely periodic sequence.
pub fn period_extremum(spec: &PerronSpec, period: &[u64], limit: Limit) -> Result<(Real, usize)> {
    let seq = ExpansionSequence::periodic(period.to_vec());
    let mut best: Option<(Real, usize)> = None;
    for k in 0..period.len() {
        let v = match evaluate_p(spec, &seq, k as i64, crate::cfrac::DEFAULT_TAIL_DEPTH)? {
            ExtReal::Finite(v) => v,
            other => return Err(Error::Invalid(format!("non-finite value {other} on a periodic sequence"))),
        };
        let better = match &best {
            None => true,
            Some((b, _)) => {
                let c = v.try_cmp(b)?;
                (limit == Limit::Sup && c == Ordering::Greater) || (limit == Limit::Inf && c == Ordering::Less)
            }
        };
        if better {
            best = Some((v, k));
        }
    }
    best.ok_or_else(|| Error::Invalid("empty period".into()))
}

/// Periods up to rotation, shortest first then lexicographic.
pub fn necklaces(max_period: usize, max_entry: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for len in 1..=max_period {
        let mut cur = vec![1u64; len];
        loop {
            if shift_canonical(&cur) == cur && is_primitive(&cur) {
                out.push(cur.clone());
            }
            let mut i = len;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                if cur[i] < max_entry {
                    cur[i] += 1;
                    for c in cur.iter_mut().skip(i + 1) {
                        *c = 1;
                    }
                    break;
                }
                if i == 0 {
                    i = usize::MAX;
                    break;
                }
            }
            if i == usize::MAX {
                break;
            }
        }
    }
    out
}

fn is_primitive(p: &[u64]) -> bool {
    let n = p.len();
    (1..n).filter(|d| n % d == 0).all(|d| (0..n).any(|i| p[i] != p[i % d]))
}

pub const TAU_BUDGET: usize = 2_000_000;

/// The set τ′ over purely periodic sequences within the bounds, sorted, deduplicated.
pub fn tau_enumerate(spec: &PerronSpec, limit: Limit, max_period: usize, max_entry: u64) -> Result<Vec<TauEntry>> {
    if max_period == 0 || max_entry == 0 {
        return Err(Error::Invalid("bounds must be ≥ 1".into()));
    }
    if (max_entry as f64).powi(max_period as i32) > TAU_BUDGET as f64 {
        return Err(Error::BudgetExceeded(format!("{max_entry}^{max_period} periods")));
    }
    let mut entries: Vec<TauEntry> = Vec::new();
    for p in necklaces(max_period, max_entry) {
        let (v, k) = period_extremum(spec, &p, limit)?;
        entries.push(TauEntry { value: v, witness_period: p, offset: k });
    }
    // stable sort keeps the first (shortest, lexicographically least) witness first
    let mut err = None;
    entries.sort_by(|a, b| {
        a.value.try_cmp(&b.value).unwrap_or_else(|e| {
            err.get_or_insert(e);
            Ordering::Equal
        })
    });
    if let Some(e) = err {
        return Err(e);
    }
    let mut out: Vec<TauEntry> = Vec::new();
    for e in entries {
        match out.last() {
            Some(l) if l.value.try_cmp(&e.value)? == Ordering::Equal => {
                let better = (e.witness_period.len(), &e.witness_period) < (l.witness_period.len(), &l.witness_period);
                if better {
                    *out.last_mut().expect("nonempty") = e;
                }
            }
            _ => out.push(e),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::QuadraticSurd;

    fn surd(p: i64, q: i64, d: i64, r: i64) -> Real {
        Real::Exact(QuadraticSurd::new(p, q, d, r).unwrap())
    }

    #[test]
    fn evaluate_examples() {
        let m = PerronSpec::markov();
        let one = ExpansionSequence::periodic(vec![1]);
        assert_eq!(evaluate_p(&m, &one, 3, 64).unwrap(), ExtReal::Finite(surd(0, 1, 5, 1)));
        let mg = PerronSpec::mordell_gruber();
        let s = ExpansionSequence::periodic(vec![2, 1]);
        assert_eq!(evaluate_p(&mg, &s, 0, 64).unwrap(), ExtReal::Finite(surd(3, 1, 3, 6)));
        let inf = ExpansionSequence::finite(vec![2], true);
        assert_eq!(evaluate_p(&m, &inf, 1, 64).unwrap(), ExtReal::PosInf);
    }

    #[test]
    fn continuity_probes() {
        let r = probe_good_continuity(&PerronSpec::markov(), 11, 1000, 1e-2).unwrap();
        assert!(r.pass, "{r:?}");
        let r = probe_good_continuity(&PerronSpec::mordell_gruber(), 11, 1000, 1e-2).unwrap();
        assert!(r.clause_a_pass && r.pass);
        let alt = PerronSpec::new("alt", 1, ExtReal::Finite(Real::one()), |_, _, n| {
            Ok(Real::int(if n[0] % 2 == 0 { 1 } else { -1 }))
        });
        let r = probe_good_continuity(&alt, 11, 1000, 1e-2).unwrap();
        assert!(!r.clause_a_pass);
        assert_eq!(r.clause_a_oscillation, 2.0);
    }

    #[test]
    fn accumulation_examples() {
        let one = ExpansionSequence::periodic(vec![1]);
        let r = accumulation_sequence(&Family::Cyclic(vec![one.clone()]), 5).unwrap();
        assert!(r.terms.values().all(|t| *t == Term::Fin(1)));

        let fam = Family::Rule {
            member: Arc::new(|j| {
                ExpansionSequence::bi(OneSided::periodic(vec![], vec![1]), OneSided::periodic(vec![j.max(1)], vec![1]))
            }),
            start: 1,
            period: 1,
            divergent: vec![0],
        };
        let r = accumulation_sequence(&fam, 4).unwrap();
        assert_eq!(r.terms[&0], Term::Inf);
        assert!(r.terms.iter().filter(|(k, _)| **k != 0).all(|(_, t)| *t == Term::Fin(1)));

        let p = vec![3u64, 1, 2];
        let shifts = Family::Rule {
            member: Arc::new(move |j| {
                let r = (j as usize) % 3;
                let rot: Vec<u64> = p[r..].iter().chain(&p[..r]).copied().collect();
                ExpansionSequence::periodic(rot)
            }),
            start: 0,
            period: 3,
            divergent: vec![],
        };
        let r = accumulation_sequence(&shifts, 6).unwrap();
        let seq = r.sequence();
        let got: Vec<u64> = (0..3).map(|k| seq.term_at(k).unwrap().finite().unwrap()).collect();
        assert_eq!(got, vec![1, 2, 3]);
        assert_eq!(seq.term_at(-1), Some(Term::Fin(3)));
    }

    #[test]
    fn tau_sets() {
        let m = PerronSpec::markov();
        let t = tau_enumerate(&m, Limit::Sup, 2, 2).unwrap();
        for want in [surd(0, 1, 5, 1), surd(0, 2, 2, 1), surd(0, 2, 3, 1)] {
            assert!(t.iter().any(|e| e.value == want), "missing {want}");
        }
        let three = period_extremum(&m, &[3], Limit::Sup).unwrap().0;
        assert_eq!(three, surd(0, 1, 13, 1));
        let mg = tau_enumerate(&PerronSpec::mordell_gruber(), Limit::Sup, 4, 1).unwrap();
        assert_eq!(mg.len(), 1);
        assert_eq!(mg[0].value, surd(5, 1, 5, 10));
        assert_eq!(mg[0].witness_period, vec![1]);
    }

    #[test]
    fn necklace_counts() {
        // primitive binary necklaces of length ≤ 4: 2 + 1 + 2 + 3
        assert_eq!(necklaces(4, 2).len(), 8);
    }
}
