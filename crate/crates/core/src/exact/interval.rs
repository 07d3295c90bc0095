use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{precision_bits, QuadraticSurd, Rational};
use crate::error::{Error, Result};

/// Endpoint of an interval: a dyadic rational or ±∞.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl Bound {
    fn rank(&self) -> u8 {
        match self {
            Bound::NegInf => 0,
            Bound::Finite(_) => 1,
            Bound::PosInf => 2,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Bound::NegInf => f64::NEG_INFINITY,
            Bound::PosInf => f64::INFINITY,
            Bound::Finite(x) => rational_to_f64(x),
        }
    }

    fn is_zero(&self) -> bool {
        matches!(self, Bound::Finite(x) if x.is_zero())
    }

    fn signum(&self) -> Ordering {
        match self {
            Bound::NegInf => Ordering::Less,
            Bound::PosInf => Ordering::Greater,
            Bound::Finite(x) => x.cmp(&Rational::zero()),
        }
    }
}

impl PartialOrd for Bound {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Bound {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Bound::Finite(a), Bound::Finite(b)) => a.cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

pub fn rational_to_f64(x: &Rational) -> f64 {
    match (x.numer().to_f64(), x.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() && d != 0.0 => n / d,
        _ => {
            // scale both down by a common power of two
            let shift = x.denom().bits().max(x.numer().bits()).saturating_sub(1000);
            let n = (x.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (x.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits
}

fn round_down(x: &Rational, bits: u32) -> Rational {
    let s = pow2(bits);
    if x.denom() <= &s && (&s % x.denom()).is_zero() {
        return x.clone();
    }
    Rational::new((x * Rational::from_integer(s.clone())).floor().to_integer(), s)
}

fn round_up(x: &Rational, bits: u32) -> Rational {
    -round_down(&-x, bits)
}

/// Closed interval with dyadic, outward-rounded endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidatedInterval {
    lo: Bound,
    hi: Bound,
}

impl ValidatedInterval {
    /// Interval `[lo, hi]` rounded outward; errors when `lo > hi`.
    pub fn new(lo: Bound, hi: Bound) -> Result<Self> {
        if lo > hi {
            return Err(Error::Invalid("interval with lo > hi".into()));
        }
        Ok(Self::rounded(lo, hi))
    }

    fn rounded(lo: Bound, hi: Bound) -> Self {
        let bits = precision_bits();
        let lo = match lo {
            Bound::Finite(x) => Bound::Finite(round_down(&x, bits)),
            b => b,
        };
        let hi = match hi {
            Bound::Finite(x) => Bound::Finite(round_up(&x, bits)),
            b => b,
        };
        ValidatedInterval { lo, hi }
    }

    pub fn from_rationals(lo: Rational, hi: Rational) -> Result<Self> {
        Self::new(Bound::Finite(lo), Bound::Finite(hi))
    }

    pub fn point(x: &Rational) -> Self {
        Self::rounded(Bound::Finite(x.clone()), Bound::Finite(x.clone()))
    }

    pub fn from_int(n: i64) -> Self {
        Self::point(&Rational::from_integer(n.into()))
    }

    pub fn entire() -> Self {
        ValidatedInterval { lo: Bound::NegInf, hi: Bound::PosInf }
    }

    /// Enclosure of a surd with width about `2^-bits`.
    pub fn from_surd(s: &QuadraticSurd, bits: u32) -> Self {
        let r = Rational::from_integer(s.r().clone());
        if s.is_rational() {
            return Self::point(&Rational::new(s.p().clone(), s.r().clone()));
        }
        let k = bits + s.q().bits() as u32 + s.r().bits() as u32 + 8;
        let n = s.d() * (BigInt::one() << (2 * k));
        let root = n.sqrt();
        let exact = &root * &root == n;
        let lo = Rational::new(root.clone(), pow2(k));
        let hi = if exact { lo.clone() } else { Rational::new(root + 1, pow2(k)) };
        let q = Rational::from_integer(s.q().clone());
        let p = Rational::from_integer(s.p().clone());
        let (a, b) = if s.q().is_negative() { (&q * &hi, &q * &lo) } else { (&q * &lo, &q * &hi) };
        Self::rounded(Bound::Finite((&p + a) / &r), Bound::Finite((&p + b) / &r))
    }

    pub fn lo(&self) -> &Bound {
        &self.lo
    }

    pub fn hi(&self) -> &Bound {
        &self.hi
    }

    pub fn is_bounded(&self) -> bool {
        matches!((&self.lo, &self.hi), (Bound::Finite(_), Bound::Finite(_)))
    }

    pub fn width(&self) -> Option<Rational> {
        match (&self.lo, &self.hi) {
            (Bound::Finite(a), Bound::Finite(b)) => Some(b - a),
            _ => None,
        }
    }

    pub fn width_f64(&self) -> f64 {
        self.width().map(|w| rational_to_f64(&w)).unwrap_or(f64::INFINITY)
    }

    pub fn midpoint(&self) -> Option<Rational> {
        match (&self.lo, &self.hi) {
            (Bound::Finite(a), Bound::Finite(b)) => Some((a + b) / Rational::from_integer(2.into())),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self.midpoint() {
            Some(m) => rational_to_f64(&m),
            None => match (&self.lo, &self.hi) {
                (Bound::PosInf, _) => f64::INFINITY,
                (_, Bound::NegInf) => f64::NEG_INFINITY,
                (Bound::Finite(a), _) if self.hi == Bound::PosInf && a.is_positive() => f64::INFINITY,
                _ => f64::NAN,
            },
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let b = Bound::Finite(x.clone());
        self.lo <= b && b <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&Rational::zero())
    }

    /// True when `self ⊆ other`.
    pub fn subset_of(&self, other: &Self) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn intersects(&self, other: &Self) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn hull(&self, other: &Self) -> Self {
        ValidatedInterval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    /// Order when the intervals are disjoint (or equal points).
    pub fn try_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if other.hi < self.lo {
            Some(Ordering::Greater)
        } else if self.lo == self.hi && other.lo == other.hi && self.lo == other.lo {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn neg(&self) -> Self {
        let flip = |b: &Bound| match b {
            Bound::NegInf => Bound::PosInf,
            Bound::PosInf => Bound::NegInf,
            Bound::Finite(x) => Bound::Finite(-x),
        };
        ValidatedInterval { lo: flip(&self.hi), hi: flip(&self.lo) }
    }

    pub fn add(&self, o: &Self) -> Self {
        let lo = match (&self.lo, &o.lo) {
            (Bound::Finite(a), Bound::Finite(b)) => Bound::Finite(a + b),
            (Bound::PosInf, Bound::PosInf) => Bound::PosInf,
            (Bound::PosInf, Bound::Finite(_)) | (Bound::Finite(_), Bound::PosInf) => Bound::PosInf,
            _ => Bound::NegInf,
        };
        let hi = match (&self.hi, &o.hi) {
            (Bound::Finite(a), Bound::Finite(b)) => Bound::Finite(a + b),
            (Bound::NegInf, Bound::NegInf) => Bound::NegInf,
            (Bound::NegInf, Bound::Finite(_)) | (Bound::Finite(_), Bound::NegInf) => Bound::NegInf,
            _ => Bound::PosInf,
        };
        Self::rounded(lo, hi)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    fn mul_bound(a: &Bound, b: &Bound) -> Bound {
        if a.is_zero() || b.is_zero() {
            return Bound::Finite(Rational::zero());
        }
        match (a, b) {
            (Bound::Finite(x), Bound::Finite(y)) => Bound::Finite(x * y),
            _ => {
                if a.signum() == b.signum() {
                    Bound::PosInf
                } else {
                    Bound::NegInf
                }
            }
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let products = [
            Self::mul_bound(&self.lo, &o.lo),
            Self::mul_bound(&self.lo, &o.hi),
            Self::mul_bound(&self.hi, &o.lo),
            Self::mul_bound(&self.hi, &o.hi),
        ];
        let lo = products.iter().min().cloned().unwrap_or(Bound::NegInf);
        let hi = products.iter().max().cloned().unwrap_or(Bound::PosInf);
        Self::rounded(lo, hi)
    }

    pub fn recip(&self) -> Result<Self> {
        if self.contains_zero() {
            return Err(Error::DivisionByZero);
        }
        let inv = |b: &Bound| match b {
            Bound::Finite(x) => Bound::Finite(x.recip()),
            _ => Bound::Finite(Rational::zero()),
        };
        Ok(Self::rounded(inv(&self.hi), inv(&self.lo)))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.recip()?))
    }

    /// Enclosure of the square root; negative parts are clipped at zero.
    pub fn sqrt(&self) -> Result<Self> {
        if self.hi < Bound::Finite(Rational::zero()) {
            return Err(Error::UnsupportedDomain("square root of a negative interval".into()));
        }
        let bits = precision_bits();
        let scale = pow2(2 * bits);
        let down = |x: &Rational| {
            let n = (x * Rational::from_integer(scale.clone())).floor().to_integer();
            Rational::new(n.sqrt(), pow2(bits))
        };
        let up = |x: &Rational| {
            let n = (x * Rational::from_integer(scale.clone())).ceil().to_integer();
            let r = n.sqrt();
            let r = if &r * &r == n { r } else { r + 1 };
            Rational::new(r, pow2(bits))
        };
        let lo = match &self.lo {
            Bound::Finite(x) if x.is_positive() => Bound::Finite(down(x)),
            _ => Bound::Finite(Rational::zero()),
        };
        let hi = match &self.hi {
            Bound::Finite(x) => Bound::Finite(up(x)),
            b => b.clone(),
        };
        Ok(Self::rounded(lo, hi))
    }
}

impl fmt::Display for ValidatedInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo.to_f64(), self.hi.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(a: i64, b: i64) -> ValidatedInterval {
        ValidatedInterval::from_rationals(Rational::from_integer(a.into()), Rational::from_integer(b.into()))
            .unwrap()
    }

    #[test]
    fn basic_ops() {
        assert_eq!(iv(1, 2).add(&iv(3, 4)), iv(4, 6));
        assert_eq!(iv(-1, 1).mul(&iv(-1, 1)), iv(-1, 1));
        assert_eq!(iv(1, 2).sub(&iv(3, 4)), iv(-3, -1));
        assert_eq!(iv(-1, 1).recip(), Err(Error::DivisionByZero));
        assert_eq!(iv(2, 4).recip().unwrap().to_f64(), 0.375);
    }

    #[test]
    fn golden_enclosure() {
        let phi = QuadraticSurd::new(1, 1, 5, 2).unwrap();
        let e = ValidatedInterval::from_surd(&phi, 100);
        assert!(e.width_f64() < 1e-29);
        let reference: Rational = Rational::new(
            "16180339887498948482045868343656".parse().unwrap(),
            BigInt::from(10u32).pow(31),
        );
        assert!(e.contains(&reference) || e.width_f64() < 1e-30);
        assert!((e.to_f64() - 1.618033988749895).abs() < 1e-15);
    }

    #[test]
    fn infinite_endpoints() {
        let a = ValidatedInterval::new(Bound::Finite(Rational::one()), Bound::PosInf).unwrap();
        let s = a.add(&iv(1, 1));
        assert_eq!(s.lo(), &Bound::Finite(Rational::from_integer(2.into())));
        assert_eq!(s.hi(), &Bound::PosInf);
        let r = a.recip().unwrap();
        assert_eq!(r.lo(), &Bound::Finite(Rational::zero()));
    }

    #[test]
    fn sqrt_encloses() {
        let two = iv(2, 2).sqrt().unwrap();
        let (lo, hi) = (two.lo().to_f64(), two.hi().to_f64());
        assert!(lo <= std::f64::consts::SQRT_2 && std::f64::consts::SQRT_2 <= hi);
        assert_eq!(iv(4, 9).sqrt().unwrap(), iv(2, 3));
    }
}
