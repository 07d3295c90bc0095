//! Planar lattices, pivot chains and the sequence ↔ lattice correspondence.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::cfrac::{ExpansionSequence, OneSided, Term};
use crate::error::{Error, Result};
use crate::exact::{parse_rational, rational_string, QuadraticSurd, Rational, Real};

pub type Vec2 = [Real; 2];

/// Lattice spanned by two vectors with exact-or-enclosed coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice2D {
    pub basis: [Vec2; 2],
}

/// Which coordinate axes carry nonzero lattice points.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatticeKind {
    /// No axis points.
    BiInfinite,
    /// Points on the x-axis only.
    MonoInfiniteX,
    /// Points on the y-axis only.
    MonoInfiniteY,
    /// Points on both axes.
    Finite,
    /// Coordinates are enclosures, rationality cannot be decided.
    Undecided,
}

/// Consecutive pivots `A_j`, listed with increasing `y`.
#[derive(Clone, Debug)]
pub struct PivotChain {
    pub pivots: Vec<Vec2>,
    /// Position of `A₀` inside `pivots`.
    pub origin: usize,
    /// The chain really ends at an axis point below / above (rather than at the window edge).
    pub ends: (bool, bool),
    /// Unnormalised pivots `√N · A_j` and `N`, when the chain came from a sequence.
    pub raw: Option<(Vec<Vec2>, Real)>,
}

/// `diag(sx·eᵗ, sy·e⁻ᵗ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroupElement {
    pub sx: i8,
    pub sy: i8,
    pub t: f64,
}

impl GroupElement {
    pub fn identity() -> Self {
        GroupElement { sx: 1, sy: 1, t: 0.0 }
    }

    pub fn apply(&self, p: [f64; 2]) -> [f64; 2] {
        [self.sx as f64 * self.t.exp() * p[0], self.sy as f64 * (-self.t).exp() * p[1]]
    }

    pub fn compose(&self, o: &GroupElement) -> GroupElement {
        GroupElement { sx: self.sx * o.sx, sy: self.sy * o.sy, t: self.t + o.t }
    }
}

fn det(a: &Vec2, b: &Vec2) -> Real {
    a[0].mul(&b[1]).sub(&a[1].mul(&b[0]))
}

fn axpy(a: &Real, x: &Vec2, y: &Vec2) -> Vec2 {
    [a.mul(&x[0]).add(&y[0]), a.mul(&x[1]).add(&y[1])]
}

impl Lattice2D {
    pub fn new(basis: [Vec2; 2]) -> Result<Self> {
        let l = Lattice2D { basis };
        if l.covolume_f64() <= 0.0 || l.det().is_zero() {
            return Err(Error::Invalid("degenerate basis".into()));
        }
        Ok(l)
    }

    pub fn from_f64(b: [[f64; 2]; 2]) -> Result<Self> {
        let c = |x: f64| Real::from_f64_exact(x).ok_or_else(|| Error::Invalid("non-finite coordinate".into()));
        Self::new([[c(b[0][0])?, c(b[0][1])?], [c(b[1][0])?, c(b[1][1])?]])
    }

    pub fn integer() -> Self {
        Lattice2D { basis: [[Real::one(), Real::zero()], [Real::zero(), Real::one()]] }
    }

    /// `span{(1,0), (1/2, √3/2)}` (covolume √3/2).
    pub fn hexagonal() -> Self {
        let h = Real::Exact(QuadraticSurd::new(0, 1, 3, 2).expect("valid"));
        Lattice2D { basis: [[Real::one(), Real::zero()], [Real::ratio(1, 2), h]] }
    }

    pub fn det(&self) -> Real {
        det(&self.basis[0], &self.basis[1])
    }

    pub fn covolume_f64(&self) -> f64 {
        self.det().to_f64().abs()
    }

    pub fn is_unimodular(&self) -> bool {
        let d = self.det();
        let one = Real::one();
        match &d {
            Real::Exact(_) => d == one || d == one.neg(),
            Real::Approx(i) => {
                i.contains(&Rational::one()) || i.contains(&-Rational::one())
            }
        }
    }

    pub fn to_f64(&self) -> [[f64; 2]; 2] {
        let b = &self.basis;
        [[b[0][0].to_f64(), b[0][1].to_f64()], [b[1][0].to_f64(), b[1][1].to_f64()]]
    }

    /// Image under `diag(e^t, e^-t)`, in floating point.
    pub fn flow_f64(&self, t: f64) -> [[f64; 2]; 2] {
        let b = self.to_f64();
        let (u, v) = (t.exp(), (-t).exp());
        [[b[0][0] * u, b[0][1] * v], [b[1][0] * u, b[1][1] * v]]
    }

    fn axis_ratio(&self, coord: usize) -> Option<Option<Rational>> {
        let (a, b) = (&self.basis[0][coord], &self.basis[1][coord]);
        if a.is_zero() || b.is_zero() {
            return Some(Some(Rational::zero()));
        }
        match a.div(b).ok()? {
            Real::Exact(s) => Some(s.to_rational()),
            Real::Approx(_) => None,
        }
    }

    pub fn kind(&self) -> LatticeKind {
        match (self.axis_ratio(1), self.axis_ratio(0)) {
            (None, _) | (_, None) => LatticeKind::Undecided,
            (Some(x), Some(y)) => match (x.is_some(), y.is_some()) {
                (false, false) => LatticeKind::BiInfinite,
                (true, false) => LatticeKind::MonoInfiniteX,
                (false, true) => LatticeKind::MonoInfiniteY,
                (true, true) => LatticeKind::Finite,
            },
        }
    }

    pub fn to_json(&self) -> Value {
        let coord = |r: &Real| match r {
            Real::Exact(s) if s.is_rational() => json!(rational_string(&s.to_rational().expect("rational"))),
            Real::Exact(s) => serde_json::to_value(s).expect("serializable"),
            Real::Approx(_) => json!(r.to_decimal(40)),
        };
        let b = &self.basis;
        json!({"basis": [[coord(&b[0][0]), coord(&b[0][1])], [coord(&b[1][0]), coord(&b[1][1])]]})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = || Error::Invalid("lattice JSON must be {\"basis\": [[x1,y1],[x2,y2]]}".into());
        let rows = v.get("basis").and_then(Value::as_array).ok_or_else(bad)?;
        if rows.len() != 2 {
            return Err(bad());
        }
        let coord = |c: &Value| -> Result<Real> {
            match c {
                Value::String(s) => parse_rational(s)
                    .map(|r| Real::rational(&r))
                    .ok_or_else(|| Error::Invalid(format!("bad coordinate {s:?}"))),
                Value::Number(n) => parse_rational(&n.to_string())
                    .map(|r| Real::rational(&r))
                    .ok_or_else(|| Error::Invalid(format!("bad coordinate {n}"))),
                Value::Object(_) => serde_json::from_value::<QuadraticSurd>(c.clone())
                    .map(Real::Exact)
                    .map_err(|e| Error::Invalid(e.to_string())),
                _ => Err(bad()),
            }
        };
        let vec = |r: &Value| -> Result<Vec2> {
            let a = r.as_array().filter(|a| a.len() == 2).ok_or_else(bad)?;
            Ok([coord(&a[0])?, coord(&a[1])?])
        };
        Self::new([vec(&rows[0])?, vec(&rows[1])?])
    }
}

// ---------------------------------------------------------------------------
// Reconstruction from index sequences

/// Lattice and pivot chain `A_{−depth} … A_depth` of a two-sided sequence.
pub fn reconstruct_biinfinite(seq: &ExpansionSequence, depth: usize) -> Result<(Lattice2D, PivotChain)> {
    let (left, right) = seq.to_bi();
    let a0 = match crate::cfrac::bi_term(&left, &right, 0) {
        Some(Term::Fin(n)) => n,
        _ => return Err(Error::Invalid("a₀ must be finite".into())),
    };
    let tails = crate::cfrac::tails_of(&left, &right, 0, crate::cfrac::DEFAULT_TAIL_DEPTH)?;
    let s = tails.alpha.add_int(a0 as i64);
    let norm = s.add(&tails.beta);
    // √N·A₀ = (−1, 1), √N·A₋₁ = (a₀ + α₀, β₀)
    let r0: Vec2 = [Real::int(-1), Real::one()];
    let rm1: Vec2 = [s, tails.beta.clone()];
    let term = |k: i64| crate::cfrac::bi_term(&left, &right, k);

    let mut up = vec![rm1.clone(), r0.clone()];
    let mut top_end = false;
    for j in 0..depth as i64 {
        match term(j) {
            Some(Term::Fin(a)) => {
                let n = up.len();
                let next = axpy(&Real::int(a as i64), &up[n - 1], &up[n - 2]);
                up.push(next);
            }
            Some(Term::Inf) => {
                top_end = true;
                break;
            }
            None => break,
        }
    }
    // going down: A_{j−1} = A_{j+1} − a_j A_j
    let mut down: Vec<Vec2> = vec![r0, rm1];
    let mut bottom_end = false;
    for j in (-(depth as i64)..=-1).rev() {
        match term(j) {
            Some(Term::Fin(a)) => {
                let n = down.len();
                let prev = axpy(&Real::int(-(a as i64)), &down[n - 1], &down[n - 2]);
                down.push(prev);
            }
            Some(Term::Inf) => {
                bottom_end = true;
                break;
            }
            None => break,
        }
    }
    // down = [A₀, A₋₁, A₋₂, …], up = [A₋₁, A₀, A₁, …]
    let mut raw: Vec<Vec2> = down[1..].iter().rev().cloned().collect();
    let origin = raw.len();
    raw.extend(up[1..].iter().cloned());
    let root = norm.sqrt()?;
    let pivots: Vec<Vec2> = raw
        .iter()
        .map(|p| Ok([p[0].div(&root)?, p[1].div(&root)?]))
        .collect::<Result<_>>()?;
    let lat = Lattice2D { basis: [pivots[origin].clone(), pivots[origin - 1].clone()] };
    Ok((lat, PivotChain { pivots, origin, ends: (bottom_end, top_end), raw: Some((raw, norm)) }))
}

fn round_index(q: &Real) -> Result<u64> {
    if let Some(n) = q.is_integer_valued() {
        return n.to_u64().filter(|&n| n >= 1).ok_or_else(|| Error::Invalid(format!("index {n} < 1")));
    }
    let e = q.enclosure();
    let mid = e.midpoint().ok_or_else(|| Error::PrecisionExhausted("unbounded index enclosure".into()))?;
    let n = mid.round().to_integer();
    let half = Rational::new(1.into(), 2.into());
    let lo = Rational::from_integer(n.clone()) - &half;
    let hi = Rational::from_integer(n.clone()) + &half;
    let inside = e.width().map_or(false, |w| w < half)
        && e.subset_of(&crate::exact::ValidatedInterval::from_rationals(lo, hi)?);
    if !inside {
        return Err(Error::PrecisionExhausted(format!("index enclosure {e} too wide to round")));
    }
    n.to_u64().filter(|&n| n >= 1).ok_or_else(|| Error::Invalid(format!("index {n} < 1")))
}

impl PivotChain {
    /// Index range `(j_min, j_max)` of the stored pivots.
    pub fn index_range(&self) -> (i64, i64) {
        let lo = -(self.origin as i64);
        (lo, lo + self.pivots.len() as i64 - 1)
    }

    pub fn pivot(&self, j: i64) -> Option<&Vec2> {
        let i = j + self.origin as i64;
        (0..self.pivots.len() as i64).contains(&i).then(|| &self.pivots[i as usize])
    }

    pub fn pivots_f64(&self) -> Vec<[f64; 2]> {
        self.pivots.iter().map(|p| [p[0].to_f64(), p[1].to_f64()]).collect()
    }

    /// The quadrant sign pattern alternates along the chain.
    pub fn alternates(&self) -> bool {
        let p = self.pivots_f64();
        p.windows(2).all(|w| w[0][0] == 0.0 || w[1][0] == 0.0 || (w[0][0] > 0.0) != (w[1][0] > 0.0))
    }
}

/// Recovers `a_j = (y_{j+1} − y_{j−1}) / y_j` along a chain.
pub fn indices_from_pivots(chain: &PivotChain) -> Result<ExpansionSequence> {
    if chain.pivots.len() < 3 {
        return Err(Error::Invalid("need at least three pivots".into()));
    }
    let pts = match &chain.raw {
        Some((raw, _)) => raw,
        None => &chain.pivots,
    };
    let (jmin, jmax) = chain.index_range();
    let mut right = Vec::new();
    let mut left = Vec::new();
    for j in (jmin + 1)..jmax {
        let i = (j - jmin) as usize;
        let q = pts[i + 1][1].sub(&pts[i - 1][1]).div(&pts[i][1])?;
        let a = round_index(&q)?;
        if j >= 0 {
            right.push(a);
        } else {
            left.push(a);
        }
    }
    left.reverse();
    let (bottom, top) = chain.ends;
    Ok(ExpansionSequence::bi(OneSided::finite(left, bottom), OneSided::finite(right, top)))
}

// ---------------------------------------------------------------------------
// Pivot walks on general bases (floating point decisions, integer bookkeeping)

#[derive(Clone, Copy, Debug)]
struct FPoint {
    m: i64,
    n: i64,
    x: f64,
    y: f64,
}

fn fpoint(b: &[[f64; 2]; 2], m: i64, n: i64) -> FPoint {
    FPoint { m, n, x: m as f64 * b[0][0] + n as f64 * b[1][0], y: m as f64 * b[0][1] + n as f64 * b[1][1] }
}

fn normalize_up(p: FPoint) -> FPoint {
    if p.y < 0.0 || (p.y == 0.0 && p.x < 0.0) {
        FPoint { m: -p.m, n: -p.n, x: -p.x, y: -p.y }
    } else {
        p
    }
}

/// Lagrange–Gauss reduction in the Euclidean norm, tracking coefficients.
fn gauss_reduce(b: &[[f64; 2]; 2]) -> (FPoint, FPoint) {
    let mut u = fpoint(b, 1, 0);
    let mut v = fpoint(b, 0, 1);
    let n2 = |p: &FPoint| p.x * p.x + p.y * p.y;
    if n2(&u) > n2(&v) {
        std::mem::swap(&mut u, &mut v);
    }
    for _ in 0..200 {
        let mu = ((u.x * v.x + u.y * v.y) / n2(&u)).round() as i64;
        if mu == 0 {
            break;
        }
        v = fpoint(b, v.m - mu * u.m, v.n - mu * u.n);
        if n2(&v) < n2(&u) {
            std::mem::swap(&mut u, &mut v);
        } else {
            break;
        }
    }
    (u, v)
}

fn small_points(b: &[[f64; 2]; 2]) -> Vec<FPoint> {
    let (u, v) = gauss_reduce(b);
    let mut out = Vec::new();
    for i in -3i64..=3 {
        for j in -3i64..=3 {
            if i != 0 || j != 0 {
                out.push(fpoint(b, i * u.m + j * v.m, i * u.n + j * v.n));
            }
        }
    }
    out
}

/// Minimum ℓ∞ norm over nonzero points, by Gauss reduction and enumeration.
pub fn sys_linf_f64(b: &[[f64; 2]; 2]) -> f64 {
    small_points(b).iter().map(|p| p.x.abs().max(p.y.abs())).fold(f64::INFINITY, f64::min)
}

/// Minimum Euclidean norm over nonzero points.
pub fn shortest_l2_f64(b: &[[f64; 2]; 2]) -> f64 {
    small_points(b).iter().map(|p| p.x.hypot(p.y)).fold(f64::INFINITY, f64::min)
}

fn coeff_bounds(b: &[[f64; 2]; 2], xr: f64, yr: f64) -> (i64, i64) {
    // (x, y) = m b₀ + n b₁  ⇒  (m, n) = (x, y) B⁻¹
    let d = b[0][0] * b[1][1] - b[0][1] * b[1][0];
    let mb = (b[1][1].abs() * xr + b[1][0].abs() * yr) / d.abs();
    let nb = (b[0][1].abs() * xr + b[0][0].abs() * yr) / d.abs();
    (mb.ceil() as i64 + 1, nb.ceil() as i64 + 1)
}

const REL_EPS: f64 = 1e-11;

/// Next pivot above `p`: smallest `y' > y` with `|x'| < |x|`.
fn upper_neighbor(b: &[[f64; 2]; 2], p: &FPoint) -> Option<FPoint> {
    if p.x == 0.0 {
        return None;
    }
    let covol = (b[0][0] * b[1][1] - b[0][1] * b[1][0]).abs();
    let ymax = p.y.max(covol / p.x.abs()) * (1.0 + 1e-9) + 1e-300;
    let (mb, nb) = coeff_bounds(b, p.x.abs(), ymax);
    let mut best: Option<FPoint> = None;
    for m in -mb..=mb {
        for n in -nb..=nb {
            let q = fpoint(b, m, n);
            let tol = REL_EPS * p.x.abs().max(p.y.abs());
            if q.y <= p.y + tol || q.x.abs() >= p.x.abs() - tol {
                continue;
            }
            let better = match &best {
                None => true,
                Some(c) => q.y < c.y - tol || ((q.y - c.y).abs() <= tol && q.x.abs() < c.x.abs()),
            };
            if better {
                best = Some(q);
            }
        }
    }
    best
}

/// Pivot chain of a general lattice: pivots with `y ≤ y_max` and `|x| ≤ y_max`.
///
/// For lattices with x-axis points and irrational slope otherwise, use
/// [`mono_pivots`] to get the forced-pivot convention.
pub fn pivots_of(lat: &Lattice2D, y_max: f64) -> Result<PivotChain> {
    let b = lat.to_f64();
    if lat.covolume_f64() == 0.0 || !b.iter().flatten().all(|v| v.is_finite()) {
        return Err(Error::Invalid("degenerate basis".into()));
    }
    let start = small_points(&b)
        .into_iter()
        .map(normalize_up)
        .min_by(|p, q| {
            let np = p.x.abs().max(p.y);
            let nq = q.x.abs().max(q.y);
            np.total_cmp(&nq).then(p.y.total_cmp(&q.y))
        })
        .expect("nonempty");
    let chain = walk_from(&b, start, y_max)?;
    let origin = chain.0.iter().position(|q| q.m == start.m && q.n == start.n).unwrap_or(0);
    Ok(to_chain(lat, chain, origin))
}

/// Chain through a given pivot `p = (m, n)` coefficients, which becomes `A₀`.
pub fn pivots_through(lat: &Lattice2D, coeffs: (i64, i64), y_max: f64) -> Result<PivotChain> {
    let b = lat.to_f64();
    let p = normalize_up(fpoint(&b, coeffs.0, coeffs.1));
    let flip = p.m != coeffs.0;
    let (chain, origin) = walk_from(&b, p, y_max).map(|c| {
        let pos = c.0.iter().position(|q| q.m == p.m && q.n == p.n).expect("start kept");
        (c, pos)
    })?;
    let mut out = to_chain(lat, chain, origin);
    if flip {
        for v in &mut out.pivots {
            *v = [v[0].neg(), v[1].neg()];
        }
    }
    Ok(out)
}

type Walk = (Vec<FPoint>, bool, bool);

fn walk_from(b: &[[f64; 2]; 2], start: FPoint, y_max: f64) -> Result<Walk> {
    let mut pts = vec![start];
    let (mut bottom_end, mut top_end) = (start.y == 0.0, start.x == 0.0);
    if !top_end {
        match upper_neighbor(b, &start) {
            Some(u) => pts.push(u),
            None => return Err(Error::PrecisionExhausted("no upper neighbour found".into())),
        }
    }
    // upward: A_{j+1} = A_{j−1} + a A_j with a = ⌊|x_{j−1}| / |x_j|⌋
    while pts.len() >= 2 && !top_end {
        let n = pts.len();
        let (p, q) = (pts[n - 2], pts[n - 1]);
        if q.x.abs() <= REL_EPS * q.y.abs().max(1.0) {
            top_end = true;
            break;
        }
        if q.y > y_max {
            break;
        }
        let a = (p.x.abs() / q.x.abs() + 1e-9).floor().max(1.0) as i64;
        let mut next = fpoint(b, p.m + a * q.m, p.n + a * q.n);
        if next.x.abs() <= REL_EPS * next.y.abs() {
            next.x = 0.0;
        }
        pts.push(next);
        if pts.len() > 100_000 {
            return Err(Error::BudgetExceeded("pivot walk too long".into()));
        }
    }
    // downward: A_{j−1} = A_{j+1} − a A_j with a = ⌊y_{j+1} / y_j⌋
    let mut low: Vec<FPoint> = Vec::new();
    if !bottom_end && pts.len() >= 2 {
        let (mut q, mut p) = (pts[1], pts[0]);
        loop {
            if p.y.abs() <= REL_EPS * p.x.abs().max(1.0) {
                bottom_end = true;
                break;
            }
            if p.x.abs() > y_max {
                break;
            }
            let a = (q.y / p.y + 1e-9).floor().max(1.0) as i64;
            let mut prev = fpoint(b, q.m - a * p.m, q.n - a * p.n);
            if prev.y.abs() <= REL_EPS * prev.x.abs() {
                prev.y = 0.0;
            }
            low.push(prev);
            q = p;
            p = prev;
            if low.len() > 100_000 {
                return Err(Error::BudgetExceeded("pivot walk too long".into()));
            }
        }
    } else if !bottom_end {
        // single pivot on the y-axis: walk down from it
        let top = pts[0];
        let below = lower_neighbor(b, &top);
        if let Some(p) = below {
            let mut inner = walk_from(b, p, y_max)?;
            inner.0.retain(|q| q.y < top.y);
            inner.0.push(top);
            return Ok((inner.0, inner.1, true));
        }
    }
    low.reverse();
    low.extend(pts);
    Ok((low, bottom_end, top_end))
}

fn lower_neighbor(b: &[[f64; 2]; 2], p: &FPoint) -> Option<FPoint> {
    // largest y' < y with |x'| > |x| minimal … equivalently the best box point below
    let covol = (b[0][0] * b[1][1] - b[0][1] * b[1][0]).abs();
    let xr = covol / p.y.max(1e-300) * (1.0 + 1e-9);
    let (mb, nb) = coeff_bounds(b, xr, p.y);
    let mut best: Option<FPoint> = None;
    for m in -mb..=mb {
        for n in -nb..=nb {
            let q = normalize_up(fpoint(b, m, n));
            if (m == 0 && n == 0) || q.y >= p.y || q.x.abs() <= p.x.abs() {
                continue;
            }
            if best.map_or(true, |c| q.x.abs() < c.x.abs() || (q.x.abs() == c.x.abs() && q.y < c.y)) {
                best = Some(q);
            }
        }
    }
    best
}

fn to_chain(lat: &Lattice2D, walk: Walk, origin: usize) -> PivotChain {
    let (pts, bottom, top) = walk;
    let pivots = pts
        .iter()
        .map(|p| {
            let (m, n) = (Real::int(p.m), Real::int(p.n));
            [
                m.mul(&lat.basis[0][0]).add(&n.mul(&lat.basis[1][0])),
                m.mul(&lat.basis[0][1]).add(&n.mul(&lat.basis[1][1])),
            ]
        })
        .collect();
    PivotChain { pivots, origin, ends: (bottom, top), raw: None }
}

// ---------------------------------------------------------------------------
// Group G

/// The unique `h ∈ G` moving `A` onto the ray `{(x, −x) : x < 0}`.
pub fn canonicalize_point(a: [f64; 2]) -> Result<GroupElement> {
    if a[0] == 0.0 || a[1] == 0.0 {
        return Err(Error::Invalid("point lies on an axis".into()));
    }
    let sx = if a[0] > 0.0 { -1 } else { 1 };
    let sy = if a[1] > 0.0 { 1 } else { -1 };
    Ok(GroupElement { sx, sy, t: 0.5 * (a[1].abs().ln() - a[0].abs().ln()) })
}

// ---------------------------------------------------------------------------
// Mono-infinite lattices

fn floor_real(x: &Real) -> Result<BigInt> {
    match x {
        Real::Exact(s) => Ok(s.floor_scaled(0)),
        Real::Approx(i) => {
            let (lo, hi) = match (i.lo(), i.hi()) {
                (crate::exact::Bound::Finite(a), crate::exact::Bound::Finite(b)) => (a.floor(), b.floor()),
                _ => return Err(Error::PrecisionExhausted("unbounded enclosure".into())),
            };
            if lo == hi {
                Ok(lo.to_integer())
            } else {
                Err(Error::PrecisionExhausted("floor undecided".into()))
            }
        }
    }
}

/// `(t, α)` with `g_t · lat = span{(1,0), (−α,1)}`; also returns `e^t = 1/a`.
pub fn mono_canonical(lat: &Lattice2D) -> Result<(f64, Real)> {
    let b = &lat.basis;
    let (y1, y2) = (&b[0][1], &b[1][1]);
    // find the primitive x-axis vector m b₀ + n b₁ from the rational ratio y₁ : y₂
    let (m, n) = if y1.is_zero() {
        (BigInt::one(), BigInt::zero())
    } else if y2.is_zero() {
        (BigInt::zero(), BigInt::one())
    } else {
        let r = match y1.div(y2)? {
            Real::Exact(s) => s.to_rational(),
            Real::Approx(_) => return Err(Error::PrecisionExhausted("cannot decide axis points".into())),
        };
        let r = r.ok_or_else(|| Error::Invalid("lattice has no x-axis points".into()))?;
        (r.denom().clone(), -r.numer().clone())
    };
    let (mr, nr) = (Real::big(m.clone()), Real::big(n.clone()));
    let ax = mr.mul(&b[0][0]).add(&nr.mul(&b[1][0]));
    let a = if ax.cmp_loose(&Real::zero()) == Ordering::Less { ax.neg() } else { ax };
    // a second vector completing (m, n) to a unimodular change of basis
    let eg = m.extended_gcd(&n);
    let (u, v) = (-eg.y, eg.x);
    // det [[m, n], [u, v]] = m v − n u = m x + n y = 1
    let (ur, vr) = (Real::big(u), Real::big(v));
    let mut px = ur.mul(&b[0][0]).add(&vr.mul(&b[1][0]));
    let py = ur.mul(&b[0][1]).add(&vr.mul(&b[1][1]));
    if py.cmp_loose(&Real::zero()) == Ordering::Less {
        px = px.neg();
    }
    if !lat.is_unimodular() {
        return Err(Error::Invalid("lattice is not unimodular".into()));
    }
    let x0 = px.div(&a)?;
    // α = frac(−x₀/a)
    let neg = x0.neg();
    let alpha = neg.sub(&Real::big(floor_real(&neg)?));
    let t = -a.to_f64().ln();
    Ok((t, alpha))
}

/// Pivots of `span{(1,0), (−α,1)}` starting with the forced pivots, as `(p, q)`
/// coefficients `A = p·(1,0) + q·(−α,1)`, up to `q ≤ q_max`.
pub fn mono_pivots(alpha: &Real, q_max: u64) -> Result<Vec<(BigInt, BigInt)>> {
    let x = |p: &BigInt, q: &BigInt| Real::big(p.clone()).sub(&Real::big(q.clone()).mul(alpha));
    let mut out = vec![(BigInt::one(), BigInt::zero()), (BigInt::zero(), BigInt::one())];
    loop {
        let n = out.len();
        let (p0, q0) = out[n - 2].clone();
        let (p1, q1) = out[n - 1].clone();
        let x1 = x(&p1, &q1);
        if x1.is_zero() {
            break;
        }
        let ratio = x(&p0, &q0).div(&x1)?;
        let a = floor_real(&ratio.neg())?;
        if a < BigInt::one() {
            return Err(Error::Invalid("α must lie in (0, 1)".into()));
        }
        let next = (p0 + &a * &p1, q0 + &a * &q1);
        if next.1 > BigInt::from(q_max) {
            break;
        }
        out.push(next);
    }
    Ok(out)
}

/// Best approximants of the second kind with `q ≤ q_max`, read off the pivots.
pub fn best_approximants(alpha: &Real, q_max: u64) -> Result<Vec<(BigInt, BigInt)>> {
    let zero = Real::zero();
    if alpha.cmp_loose(&zero) != Ordering::Greater || alpha.cmp_loose(&Real::one()) != Ordering::Less {
        return Err(Error::Invalid("α must lie in (0, 1)".into()));
    }
    let piv = mono_pivots(alpha, q_max)?;
    let mut out: Vec<(BigInt, BigInt)> = Vec::new();
    for (p, q) in piv.into_iter().skip(1) {
        // equal q: the later pivot is the closer one
        if out.last().map_or(false, |l| l.1 == q) {
            out.pop();
        }
        out.push((p, q));
    }
    Ok(out)
}

/// `A = (−α, 1)/√(1+αβ)`, `B = (1, β)/√(1+αβ)`.
pub fn reconstruct_general(alpha: &Real, beta: &Real) -> Result<Lattice2D> {
    let w = alpha.mul(beta).add_int(1).sqrt()?;
    let a = [alpha.neg().div(&w)?, Real::one().div(&w)?];
    let b = [Real::one().div(&w)?, beta.div(&w)?];
    Ok(Lattice2D { basis: [a, b] })
}

/// Lexicographically least rotation of a period.
pub fn shift_canonical(period: &[u64]) -> Vec<u64> {
    (0..period.len().max(1))
        .map(|r| period[r..].iter().chain(&period[..r]).copied().collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}

/// `shift_canonical` lifted to sequences (purely periodic only).
pub fn shift_canonical_seq(seq: &ExpansionSequence) -> Result<ExpansionSequence> {
    let p = seq.pure_period().ok_or_else(|| Error::Invalid("purely periodic sequence expected".into()))?;
    Ok(ExpansionSequence::periodic(shift_canonical(p)))
}

#[allow(dead_code)]
fn sign_of(x: &BigInt) -> i8 {
    if x.is_negative() {
        -1
    } else if x.is_zero() {
        0
    } else {
        1
    }
}
