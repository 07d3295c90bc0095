//! Cantor sets, aperture ratios and the nested-rectangle interval solver.

use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{QuadraticSurd, Rational, Real};

/// `min F(4) = [0;(4,1)̄] = (√2−1)/2`.
pub fn f4_min() -> Real {
    Real::Exact(QuadraticSurd::new(-1, 1, 2, 2).expect("valid surd"))
}

/// `max F(4) = [0;(1,4)̄] = 2√2−2`.
pub fn f4_max() -> Real {
    Real::Exact(QuadraticSurd::new(-2, 2, 2, 1).expect("valid surd"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum NodeKey {
    Affine,
    /// Points `[0; prefix, d, …]` with `d ∈ [s.0, s.1]` and later digits in 1..=4;
    /// `m` is the matrix of `w ↦ [0; prefix, w]`.
    F4 { prefix: Vec<u64>, s: (u64, u64), m: [BigInt; 4] },
}

/// A closed interval of the `n`-th stage of a Cantor construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub lo: Real,
    pub hi: Real,
    pub depth: usize,
    key: NodeKey,
}

impl Node {
    pub fn width(&self) -> Real {
        self.hi.sub(&self.lo)
    }

    pub fn bounds_f64(&self) -> [f64; 2] {
        [self.lo.to_f64(), self.hi.to_f64()]
    }

    /// Digits `(preperiod, period)` of an endpoint when it has a periodic expansion.
    pub fn endpoint_expansion(&self, upper: bool) -> Option<(Vec<u64>, Vec<u64>)> {
        match &self.key {
            NodeKey::Affine => None,
            NodeKey::F4 { prefix, s, .. } => {
                // [0;P,w] is increasing in w iff |P| is odd
                let want_large_w = upper == (prefix.len() % 2 == 1);
                let mut pre = prefix.clone();
                if want_large_w {
                    pre.push(s.1);
                    Some((pre, vec![1, 4]))
                } else {
                    pre.push(s.0);
                    Some((pre, vec![4, 1]))
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CantorSet {
    /// Keep `[a, a + left·L]` and `[b − right·L, b]` of every interval.
    Affine { lo: Rational, hi: Rational, left: Rational, right: Rational },
    /// Bounded continued fractions with digits in 1..=4, widest gap removed first.
    F4,
}

fn rat(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

fn as_rational(x: &Real) -> Result<Rational> {
    x.as_surd()
        .and_then(|s| s.to_rational())
        .ok_or_else(|| Error::Invalid("affine Cantor endpoints must be rational".into()))
}

fn f4_eval(m: &[BigInt; 4], w: &Real) -> Result<Real> {
    let num = Real::big(m[0].clone()).mul(w).add(&Real::big(m[1].clone()));
    let den = Real::big(m[2].clone()).mul(w).add(&Real::big(m[3].clone()));
    num.div(&den)
}

fn f4_node(prefix: Vec<u64>, s: (u64, u64), m: [BigInt; 4], depth: usize) -> Result<Node> {
    let a = f4_eval(&m, &f4_min().add_int(s.0 as i64))?;
    let b = f4_eval(&m, &f4_max().add_int(s.1 as i64))?;
    let (lo, hi) = if a.try_cmp(&b)? == Ordering::Greater { (b, a) } else { (a, b) };
    Ok(Node { lo, hi, depth, key: NodeKey::F4 { prefix, s, m } })
}

impl CantorSet {
    pub fn ternary() -> Self {
        CantorSet::Affine { lo: rat(0, 1), hi: rat(1, 1), left: rat(1, 3), right: rat(1, 3) }
    }

    pub fn affine(lo: Rational, hi: Rational, left: Rational, right: Rational) -> Result<Self> {
        let z = Rational::zero();
        if lo >= hi || left <= z || right <= z || &left + &right >= Rational::one() {
            return Err(Error::Invalid("affine Cantor set needs lo < hi and 0 < left, right with left + right < 1".into()));
        }
        Ok(CantorSet::Affine { lo, hi, left, right })
    }

    pub fn name(&self) -> String {
        match self {
            CantorSet::F4 => "F(4)".into(),
            CantorSet::Affine { lo, hi, left, right } => format!("affine[{lo},{hi}]({left},{right})"),
        }
    }

    pub fn root(&self) -> Node {
        match self {
            CantorSet::Affine { lo, hi, .. } => {
                Node { lo: Real::rational(lo), hi: Real::rational(hi), depth: 0, key: NodeKey::Affine }
            }
            CantorSet::F4 => {
                let m = [BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero()];
                f4_node(vec![], (1, 4), m, 0).expect("root of F(4)")
            }
        }
    }

    /// The two pieces of the next stage, ordered by position.
    pub fn children(&self, node: &Node) -> Result<(Node, Node)> {
        let depth = node.depth + 1;
        let (a, b) = match (self, &node.key) {
            (CantorSet::Affine { left, right, .. }, NodeKey::Affine) => {
                let lo = as_rational(&node.lo)?;
                let hi = as_rational(&node.hi)?;
                let len = &hi - &lo;
                let l = Node {
                    lo: node.lo.clone(),
                    hi: Real::rational(&(&lo + &len * left)),
                    depth,
                    key: NodeKey::Affine,
                };
                let r = Node {
                    lo: Real::rational(&(&hi - &len * right)),
                    hi: node.hi.clone(),
                    depth,
                    key: NodeKey::Affine,
                };
                (l, r)
            }
            (CantorSet::F4, NodeKey::F4 { prefix, s, m }) => {
                if s.0 >= s.1 {
                    return Err(Error::Invalid("malformed F(4) node".into()));
                }
                // remove the widest gap between consecutive digit cylinders
                let mut cut = s.0;
                let mut widest: Option<Real> = None;
                for dgt in s.0..s.1 {
                    let a = f4_eval(m, &f4_max().add_int(dgt as i64))?;
                    let b = f4_eval(m, &f4_min().add_int(dgt as i64 + 1))?;
                    let gap = a.sub(&b);
                    let gap = if gap.try_cmp(&Real::zero())? == Ordering::Less { gap.neg() } else { gap };
                    if widest.as_ref().map_or(Ok(true), |w| gap.try_cmp(w).map(|o| o == Ordering::Greater))? {
                        widest = Some(gap);
                        cut = dgt;
                    }
                }
                let part = |lo: u64, hi: u64| {
                    if lo < hi {
                        return f4_node(prefix.clone(), (lo, hi), m.clone(), depth);
                    }
                    let mut p = prefix.clone();
                    p.push(lo);
                    let d = BigInt::from(lo);
                    let nm = [&m[0] * &d + &m[1], m[0].clone(), &m[2] * &d + &m[3], m[2].clone()];
                    f4_node(p, (1, 4), nm, depth)
                };
                (part(s.0, cut)?, part(cut + 1, s.1)?)
            }
            _ => return Err(Error::Invalid("node does not belong to this Cantor set".into())),
        };
        if a.lo.try_cmp(&b.lo)? == Ordering::Greater {
            Ok((b, a))
        } else {
            Ok((a, b))
        }
    }

    /// Membership of `x` in the depth-`depth` stage.
    pub fn contains(&self, x: &Real, depth: usize) -> Result<bool> {
        let mut node = self.root();
        let inside = |n: &Node| -> Result<bool> {
            Ok(x.try_cmp(&n.lo)? != Ordering::Less && x.try_cmp(&n.hi)? != Ordering::Greater)
        };
        if !inside(&node)? {
            return Ok(false);
        }
        for _ in 0..depth {
            let (l, r) = self.children(&node)?;
            node = if inside(&l)? {
                l
            } else if inside(&r)? {
                r
            } else {
                return Ok(false);
            };
        }
        Ok(true)
    }

    pub fn nodes_at(&self, depth: usize) -> Result<Vec<Node>> {
        let mut level = vec![self.root()];
        for _ in 0..depth {
            let mut next = Vec::with_capacity(level.len() * 2);
            for n in &level {
                let (l, r) = self.children(n)?;
                next.push(l);
                next.push(r);
            }
            level = next;
        }
        Ok(level)
    }

    /// Aperture ratio at the default depth, as a float (cached for F(4)).
    pub fn aperture_f64(&self) -> Result<f64> {
        static F4_AP: OnceLock<f64> = OnceLock::new();
        match self {
            CantorSet::F4 => {
                if let Some(v) = F4_AP.get() {
                    return Ok(*v);
                }
                let v = aperture_ratio(self, DEFAULT_APERTURE_DEPTH)?.sup.to_f64();
                Ok(*F4_AP.get_or_init(|| v))
            }
            _ => Ok(aperture_ratio(self, 1)?.sup.to_f64()),
        }
    }
}

impl fmt::Display for CantorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

pub fn f4_cantor() -> CantorSet {
    CantorSet::F4
}

pub const DEFAULT_APERTURE_DEPTH: usize = 12;

#[derive(Clone, Debug)]
pub struct ApertureReport {
    pub sup: Real,
    /// Largest split ratio among the nodes of each depth `0..depth`.
    pub per_level: Vec<Real>,
}

fn split_ratio(set: &CantorSet, node: &Node) -> Result<Real> {
    let (l, r) = set.children(node)?;
    let gap = r.lo.sub(&l.hi);
    let (pl, pr) = (l.width(), r.width());
    if pl.is_zero() || pr.is_zero() {
        return Err(Error::Invalid("degenerate subdivision".into()));
    }
    Ok(gap.div(&pl)?.max(gap.div(&pr)?))
}

/// `max (c−b)/(b−a), (c−b)/(d−c)` over every subdivision above `depth`.
pub fn aperture_ratio(set: &CantorSet, depth: usize) -> Result<ApertureReport> {
    if depth == 0 {
        return Err(Error::Invalid("depth must be ≥ 1".into()));
    }
    let mut per_level = Vec::with_capacity(depth);
    match set {
        CantorSet::Affine { .. } => {
            // every node at a level is similar to the root
            let mut node = set.root();
            for _ in 0..depth {
                per_level.push(split_ratio(set, &node)?);
                node = set.children(&node)?.0;
            }
        }
        CantorSet::F4 => {
            let mut level = vec![set.root()];
            for d in 0..depth {
                let mut best: Option<Real> = None;
                let mut next = Vec::new();
                for n in &level {
                    let r = split_ratio(set, n)?;
                    best = Some(match best {
                        None => r,
                        Some(b) => b.max(r),
                    });
                    if d + 1 < depth {
                        let (a, b) = set.children(n)?;
                        next.push(a);
                        next.push(b);
                    }
                }
                per_level.push(best.expect("nonempty level"));
                level = next;
            }
        }
    }
    let sup = per_level.iter().cloned().reduce(|a, b| a.max(b)).expect("depth ≥ 1");
    Ok(ApertureReport { sup, per_level })
}

// ---------------------------------------------------------------------------
// Solver

pub type CellBounds = Arc<dyn Fn([f64; 2], [f64; 2]) -> [f64; 2] + Send + Sync>;

/// `g(α, β)`, increasing in both arguments, with certified bounds on
/// `∂g/∂α ÷ ∂g/∂β` over a cell `[α₀,α₁]×[β₀,β₁]`.
#[derive(Clone)]
pub struct Bivariate {
    pub name: String,
    pub f: Arc<dyn Fn(&Real, &Real) -> Result<Real> + Send + Sync>,
    pub ratio: CellBounds,
}

impl fmt::Debug for Bivariate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bivariate({})", self.name)
    }
}

impl Bivariate {
    pub fn new(
        name: &str,
        f: impl Fn(&Real, &Real) -> Result<Real> + Send + Sync + 'static,
        ratio: impl Fn([f64; 2], [f64; 2]) -> [f64; 2] + Send + Sync + 'static,
    ) -> Self {
        Bivariate { name: name.into(), f: Arc::new(f), ratio: Arc::new(ratio) }
    }

    /// `p·α + q·β` with `p, q > 0`.
    pub fn linear(p: i64, q: i64) -> Self {
        let r = p as f64 / q as f64;
        Self::new(
            &format!("{p}α+{q}β"),
            move |a, b| Ok(a.mul(&Real::int(p)).add(&b.mul(&Real::int(q)))),
            move |_, _| [r, r],
        )
    }

    pub fn sum() -> Self {
        Self::linear(1, 1)
    }

    pub fn eval(&self, a: &Real, b: &Real) -> Result<Real> {
        (self.f)(a, b)
    }
}

#[derive(Clone, Debug)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_depth: usize,
    /// Maximum number of visited cells.
    pub budget: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { tol: 1e-9, max_depth: 200, budget: 200_000 }
    }
}

#[derive(Clone, Debug)]
pub struct SolverWitness {
    pub alpha: Real,
    pub beta: Real,
    pub alpha_node: Node,
    pub beta_node: Node,
    pub depth: usize,
    pub residual: f64,
    pub visited: usize,
}

impl SolverWitness {
    pub fn to_json(&self, h: &Real) -> Value {
        json!({
            "h": h.to_string(), "h_decimal": h.to_decimal(15),
            "alpha": self.alpha.to_string(), "alpha_decimal": self.alpha.to_decimal(15),
            "beta": self.beta.to_string(), "beta_decimal": self.beta.to_decimal(15),
            "depth": self.depth, "residual": self.residual,
        })
    }
}

fn ratio_ok(g: &Bivariate, ap: f64, a: &Node, b: &Node) -> bool {
    let r = (g.ratio)(a.bounds_f64(), b.bounds_f64());
    let eps = 1e-12;
    r[0].is_finite() && r[1].is_finite() && r[0] > 0.0 && r[0] >= ap - eps && r[1] <= 1.0 / ap + eps
}

fn apertures(c: &CantorSet, d: &CantorSet) -> Result<f64> {
    Ok(c.aperture_f64()?.max(d.aperture_f64()?))
}

/// Finds `(α, β) ∈ C × D` with `|g(α, β) − h| ≤ tol`.
pub fn interval_solver(g: &Bivariate, c: &CantorSet, d: &CantorSet, h: &Real, tol: f64) -> Result<SolverWitness> {
    let opts = SolverOptions { tol, ..Default::default() };
    interval_solver_from(g, c, d, (c.root(), d.root()), h, &opts)
}

/// Nested-cell descent starting from a product of two nodes.
pub fn interval_solver_from(
    g: &Bivariate,
    c: &CantorSet,
    d: &CantorSet,
    start: (Node, Node),
    h: &Real,
    opts: &SolverOptions,
) -> Result<SolverWitness> {
    if opts.tol <= 0.0 {
        return Err(Error::Invalid("tol must be positive".into()));
    }
    let ap = apertures(c, d)?;
    let lo = g.eval(&start.0.lo, &start.1.lo)?;
    let hi = g.eval(&start.0.hi, &start.1.hi)?;
    if h.try_cmp(&lo)? == Ordering::Less || h.try_cmp(&hi)? == Ordering::Greater {
        return Err(Error::OutOfRange(format!(
            "h = {} outside [{}, {}]",
            h.to_decimal(12),
            lo.to_decimal(12),
            hi.to_decimal(12)
        )));
    }
    let mut stack = vec![start];
    let (mut visited, mut refused, mut capped) = (0usize, 0usize, 0usize);
    while let Some((a, b)) = stack.pop() {
        visited += 1;
        if visited > opts.budget {
            return Err(Error::BudgetExceeded(format!("{} cells visited for h = {}", opts.budget, h.to_decimal(12))));
        }
        let glo = g.eval(&a.lo, &b.lo)?;
        let ghi = g.eval(&a.hi, &b.hi)?;
        let below = h.try_cmp(&glo)?;
        let above = h.try_cmp(&ghi)?;
        if below == Ordering::Less || above == Ordering::Greater {
            continue;
        }
        let done = |alpha: &Real, beta: &Real, v: &Real| -> Result<SolverWitness> {
            Ok(SolverWitness {
                alpha: alpha.clone(),
                beta: beta.clone(),
                alpha_node: a.clone(),
                beta_node: b.clone(),
                depth: a.depth.max(b.depth),
                residual: v.sub(h).to_f64().abs(),
                visited,
            })
        };
        if below == Ordering::Equal {
            return done(&a.lo, &b.lo, &glo);
        }
        if above == Ordering::Equal {
            return done(&a.hi, &b.hi, &ghi);
        }
        if !ratio_ok(g, ap, &a, &b) {
            refused += 1;
            continue;
        }
        if ghi.sub(&glo).to_f64() <= opts.tol {
            let (dl, dh) = (h.sub(&glo).to_f64(), ghi.sub(h).to_f64());
            return if dl <= dh { done(&a.lo, &b.lo, &glo) } else { done(&a.hi, &b.hi, &ghi) };
        }
        if a.depth.max(b.depth) >= opts.max_depth {
            capped += 1;
            continue;
        }
        let split_a = a.width().try_cmp(&b.width())? != Ordering::Less;
        let (al, ar) = c.children(&a)?;
        let (bl, br) = d.children(&b)?;
        let by_a = [(al, b.clone()), (ar, b.clone())];
        let by_b = [(a.clone(), bl), (a.clone(), br)];
        let (first, second) = if split_a { (by_a, by_b) } else { (by_b, by_a) };
        // popped in order: first[0], first[1], second[0], second[1]
        for cell in second.into_iter().rev().chain(first.into_iter().rev()) {
            stack.push(cell);
        }
    }
    if refused > 0 {
        Err(Error::RatioViolated(format!(
            "h = {}: derivative ratio outside [Ap, 1/Ap] = [{ap:.6}, {:.6}] on {refused} cells",
            h.to_decimal(12),
            1.0 / ap
        )))
    } else {
        Err(Error::CertificationFailed(format!(
            "h = {}: no cell reached tolerance ({capped} cells hit the depth cap)",
            h.to_decimal(12)
        )))
    }
}

/// Like [`interval_solver`], but on refusal at the root retries from node pairs
/// of depth `1..=max_start_depth` that satisfy the ratio condition themselves.
pub fn interval_solver_cover(
    g: &Bivariate,
    c: &CantorSet,
    d: &CantorSet,
    h: &Real,
    opts: &SolverOptions,
    max_start_depth: usize,
) -> Result<SolverWitness> {
    let first = interval_solver_from(g, c, d, (c.root(), d.root()), h, opts);
    match first {
        Err(Error::RatioViolated(_)) | Err(Error::CertificationFailed(_)) => {}
        other => return other,
    }
    let ap = apertures(c, d)?;
    for k in 1..=max_start_depth {
        let (cs, ds) = (c.nodes_at(k)?, d.nodes_at(k)?);
        for a in &cs {
            for b in &ds {
                if !ratio_ok(g, ap, a, b) {
                    continue;
                }
                let lo = g.eval(&a.lo, &b.lo)?;
                let hi = g.eval(&a.hi, &b.hi)?;
                if h.try_cmp(&lo)? == Ordering::Less || h.try_cmp(&hi)? == Ordering::Greater {
                    continue;
                }
                if let Ok(w) = interval_solver_from(g, c, d, (a.clone(), b.clone()), h, opts) {
                    return Ok(w);
                }
            }
        }
    }
    first
}

#[derive(Clone, Debug)]
pub struct CertificationReport {
    pub ratio_bracket: [f64; 2],
    pub aperture_c: f64,
    pub aperture_d: f64,
    pub range: (Real, Real),
    pub witnesses: Vec<(Real, SolverWitness)>,
}

impl CertificationReport {
    pub fn to_json(&self) -> Value {
        json!({
            "ratio_bracket": self.ratio_bracket,
            "aperture_C": self.aperture_c,
            "aperture_D": self.aperture_d,
            "interval": [self.range.0.to_string(), self.range.1.to_string()],
            "interval_decimal": [self.range.0.to_decimal(15), self.range.1.to_decimal(15)],
            "witnesses": self.witnesses.iter().map(|(h, w)| w.to_json(h)).collect::<Vec<_>>(),
        })
    }
}

/// Ratio bounds over a `grid × grid` partition of a rectangle.
pub fn ratio_grid(g: &Bivariate, a: [f64; 2], b: [f64; 2], grid: usize) -> [f64; 2] {
    let n = grid.max(1);
    let mut out = [f64::INFINITY, f64::NEG_INFINITY];
    for i in 0..n {
        for j in 0..n {
            let ca = [a[0] + (a[1] - a[0]) * i as f64 / n as f64, a[0] + (a[1] - a[0]) * (i + 1) as f64 / n as f64];
            let cb = [b[0] + (b[1] - b[0]) * j as f64 / n as f64, b[0] + (b[1] - b[0]) * (j + 1) as f64 / n as f64];
            let r = (g.ratio)(ca, cb);
            out[0] = out[0].min(r[0]);
            out[1] = out[1].max(r[1]);
        }
    }
    out
}

/// Checks the ratio condition, then solves for `grid` evenly spaced `h` across the image.
pub fn certify_hall_interval(g: &Bivariate, c: &CantorSet, d: &CantorSet, grid: usize, tol: f64) -> Result<CertificationReport> {
    if grid < 2 {
        return Err(Error::Invalid("grid must be ≥ 2".into()));
    }
    let (ra, rb) = (c.root(), d.root());
    let (apc, apd) = (c.aperture_f64()?, d.aperture_f64()?);
    let ap = apc.max(apd);
    let bracket = ratio_grid(g, ra.bounds_f64(), rb.bounds_f64(), grid);
    if !(bracket[0] >= ap - 1e-12 && bracket[1] <= 1.0 / ap + 1e-12) {
        return Err(Error::RatioViolated(format!(
            "ratio bracket [{:.6}, {:.6}] not within [{ap:.6}, {:.6}]",
            bracket[0],
            bracket[1],
            1.0 / ap
        )));
    }
    let lo = g.eval(&ra.lo, &rb.lo)?;
    let hi = g.eval(&ra.hi, &rb.hi)?;
    let span = hi.sub(&lo);
    let opts = SolverOptions { tol, ..Default::default() };
    let mut witnesses = Vec::with_capacity(grid);
    for k in 0..grid {
        let h = lo.add(&span.mul(&Real::ratio(k as i64, (grid - 1) as i64)));
        let w = interval_solver_from(g, c, d, (ra.clone(), rb.clone()), &h, &opts).map_err(|e| {
            Error::CertificationFailed(format!("h = {}: {e}", h.to_decimal(15)))
        })?;
        witnesses.push((h, w));
    }
    Ok(CertificationReport { ratio_bracket: bracket, aperture_c: apc, aperture_d: apd, range: (lo, hi), witnesses })
}
