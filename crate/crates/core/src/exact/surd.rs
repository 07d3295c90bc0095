use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Rational;
use crate::error::{Error, Result};

/// Exact real number `(p + q√d) / r`.
///
/// Canonical form: `d` square-free (or 0 for rationals), `q = 0` iff `d = 0`,
/// `r > 0` and `gcd(p, q, r) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticSurd {
    p: BigInt,
    q: BigInt,
    d: BigInt,
    r: BigInt,
}

// Trial division stops here; above it a square factor may survive in `d`.
const TRIAL_CAP: u64 = 1 << 22;

/// Splits `d` into `(s, m)` with `d = s² m`, `m` square-free whenever the
/// cube-root bound stays under the trial cap.
fn square_free_split(d: &BigInt) -> (BigInt, BigInt) {
    let mut m = d.clone();
    let mut s = BigInt::one();
    let mut single = BigInt::one();
    if m.is_zero() {
        return (s, m);
    }
    let limit = m.cbrt().to_u64().unwrap_or(u64::MAX).min(TRIAL_CAP) + 1;
    let mut f: u64 = 2;
    while f <= limit {
        let fb = BigInt::from(f);
        if &fb * &fb > m {
            break;
        }
        let f2 = &fb * &fb;
        while (&m % &f2).is_zero() {
            m /= &f2;
            s *= &fb;
        }
        if (&m % &fb).is_zero() {
            m /= &fb;
            single *= &fb;
        }
        f += if f == 2 { 1 } else { 2 };
    }
    // what is left has at most two prime factors
    let root = m.sqrt();
    if &root * &root == m {
        s *= &root;
        m = BigInt::one();
    }
    (s, m * single)
}

/// Sign of `p + q√d` for `d ≥ 0`.
pub(crate) fn sign_pq(p: &BigInt, q: &BigInt, d: &BigInt) -> Ordering {
    let sp = p.sign();
    let sq = if d.is_zero() { Sign::NoSign } else { q.sign() };
    let ord = |s: Sign| match s {
        Sign::Minus => Ordering::Less,
        Sign::NoSign => Ordering::Equal,
        Sign::Plus => Ordering::Greater,
    };
    if sq == Sign::NoSign {
        return ord(sp);
    }
    if sp == Sign::NoSign || sp == sq {
        return ord(sq);
    }
    let lhs = p * p;
    let rhs = q * q * d;
    match lhs.cmp(&rhs) {
        Ordering::Greater => ord(sp),
        Ordering::Less => ord(sq),
        Ordering::Equal => Ordering::Equal,
    }
}

impl QuadraticSurd {
    /// Builds the canonical surd equal to `(p + q√d) / r`.
    pub fn new(
        p: impl Into<BigInt>,
        q: impl Into<BigInt>,
        d: impl Into<BigInt>,
        r: impl Into<BigInt>,
    ) -> Result<Self> {
        let (p, q, d, r) = (p.into(), q.into(), d.into(), r.into());
        if r.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if d.is_negative() {
            return Err(Error::UnsupportedDomain(format!("negative radicand {d}")));
        }
        Ok(Self::canonical(p, q, d, r))
    }

    fn canonical(p: BigInt, q: BigInt, d: BigInt, r: BigInt) -> Self {
        let (s, d) = square_free_split(&d);
        Self::reduce(p, q * s, d, r)
    }

    // Like `canonical` but trusts `d` to be square-free already.
    fn reduce(mut p: BigInt, mut q: BigInt, mut d: BigInt, mut r: BigInt) -> Self {
        if d.is_one() {
            p += &q;
            q = BigInt::zero();
        }
        if q.is_zero() || d.is_zero() {
            q = BigInt::zero();
            d = BigInt::zero();
        }
        if r.is_negative() {
            p = -p;
            q = -q;
            r = -r;
        }
        let g = p.gcd(&q).gcd(&r);
        if !g.is_one() && !g.is_zero() {
            p /= &g;
            q /= &g;
            r /= &g;
        }
        if p.is_zero() && q.is_zero() {
            r = BigInt::one();
        }
        QuadraticSurd { p, q, d, r }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        QuadraticSurd { p: n.into(), q: BigInt::zero(), d: BigInt::zero(), r: BigInt::one() }
    }

    pub fn from_rational(x: &Rational) -> Self {
        Self::canonical(x.numer().clone(), BigInt::zero(), BigInt::zero(), x.denom().clone())
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// `√n` for a non-negative integer.
    pub fn sqrt_int(n: impl Into<BigInt>) -> Result<Self> {
        Self::new(0, 1, n, 1)
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }
    pub fn q(&self) -> &BigInt {
        &self.q
    }
    pub fn d(&self) -> &BigInt {
        &self.d
    }
    pub fn r(&self) -> &BigInt {
        &self.r
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| Rational::new(self.p.clone(), self.r.clone()))
    }

    /// Radicand shared by both operands, if any (rationals fit every field).
    pub fn common_radicand(&self, other: &Self) -> Option<BigInt> {
        match (self.is_rational(), other.is_rational()) {
            (true, true) => Some(BigInt::zero()),
            (true, false) => Some(other.d.clone()),
            (false, true) => Some(self.d.clone()),
            (false, false) => (self.d == other.d).then(|| self.d.clone()),
        }
    }

    pub fn signum(&self) -> Ordering {
        sign_pq(&self.p, &self.q, &self.d)
    }

    pub fn neg(&self) -> Self {
        QuadraticSurd { p: -&self.p, q: -&self.q, d: self.d.clone(), r: self.r.clone() }
    }

    /// Sum, or `None` when the radicands differ.
    pub fn checked_add(&self, o: &Self) -> Option<Self> {
        let d = self.common_radicand(o)?;
        Some(Self::reduce(
            &self.p * &o.r + &o.p * &self.r,
            &self.q * &o.r + &o.q * &self.r,
            d,
            &self.r * &o.r,
        ))
    }

    pub fn checked_sub(&self, o: &Self) -> Option<Self> {
        self.checked_add(&o.neg())
    }

    pub fn checked_mul(&self, o: &Self) -> Option<Self> {
        let d = self.common_radicand(o)?;
        Some(Self::reduce(
            &self.p * &o.p + &self.q * &o.q * &d,
            &self.p * &o.q + &o.p * &self.q,
            d,
            &self.r * &o.r,
        ))
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let norm = &self.p * &self.p - &self.q * &self.q * &self.d;
        Ok(Self::reduce(&self.r * &self.p, -(&self.r * &self.q), self.d.clone(), norm))
    }

    /// Quotient; `Ok(None)` when the radicands differ.
    pub fn checked_div(&self, o: &Self) -> Result<Option<Self>> {
        let inv = o.recip()?;
        Ok(self.checked_mul(&inv))
    }

    /// Exact ordering, valid for any pair of radicands.
    pub fn cmp_exact(&self, o: &Self) -> Ordering {
        if let Some(diff) = self.checked_sub(o) {
            return diff.signum();
        }
        // (P1 + Q1√d1) − (P2 + Q2√d2) after clearing the positive denominators
        let p = &self.p * &o.r - &o.p * &self.r;
        let q1 = &self.q * &o.r;
        let q2 = &o.q * &self.r;
        let sx = sign_pq(&p, &q1, &self.d);
        let sy = q2.sign();
        let sy = match sy {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        };
        match (sx, sy) {
            (Ordering::Equal, s) => s.reverse(),
            (s, Ordering::Equal) => s,
            (Ordering::Greater, Ordering::Less) => Ordering::Greater,
            (Ordering::Less, Ordering::Greater) => Ordering::Less,
            (s, _) => {
                // same sign: compare squares, X² = p² + q1²d1 + 2 p q1 √d1
                let x2p = &p * &p + &q1 * &q1 * &self.d;
                let x2q = BigInt::from(2) * &p * &q1;
                let y2 = &q2 * &q2 * &o.d;
                let c = sign_pq(&(x2p - y2), &x2q, &self.d);
                if s == Ordering::Greater {
                    c
                } else {
                    c.reverse()
                }
            }
        }
    }

    /// `floor(self · 10^digits)`, exact.
    pub fn floor_scaled(&self, digits: u32) -> BigInt {
        let scale = BigInt::from(10u32).pow(digits);
        let a = &self.p * &scale;
        let s = if self.q.is_zero() {
            BigInt::zero()
        } else {
            let n = &self.q * &self.q * &self.d * &scale * &scale;
            let root = n.sqrt();
            if self.q.is_positive() {
                root
            } else if &root * &root == n {
                -root
            } else {
                -root - 1
            }
        };
        (a + s).div_floor(&self.r)
    }

    /// Decimal expansion truncated toward −∞.
    pub fn to_decimal(&self, digits: u32) -> String {
        let f = self.floor_scaled(digits);
        let neg = f.is_negative();
        let mut s = f.abs().to_string();
        if digits == 0 {
            return if neg { format!("-{s}") } else { s };
        }
        while s.len() <= digits as usize {
            s.insert(0, '0');
        }
        let split = s.len() - digits as usize;
        let out = format!("{}.{}", &s[..split], &s[split..]);
        if neg {
            format!("-{out}")
        } else {
            out
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.to_decimal(30).parse().unwrap_or(f64::NAN)
    }
}

impl PartialOrd for QuadraticSurd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadraticSurd {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_exact(other)
    }
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_zero() {
            return if self.r.is_one() {
                write!(f, "{}", self.p)
            } else {
                write!(f, "{}/{}", self.p, self.r)
            };
        }
        let root = match self.q.to_i64() {
            Some(1) => format!("√{}", self.d),
            Some(-1) => format!("-√{}", self.d),
            _ => format!("{}√{}", self.q, self.d),
        };
        let num = if self.p.is_zero() {
            root
        } else if self.q.is_negative() {
            format!("{}{}", self.p, root)
        } else {
            format!("{}+{}", self.p, root)
        };
        if self.r.is_one() {
            write!(f, "{num}")
        } else if self.p.is_zero() {
            write!(f, "{num}/{}", self.r)
        } else {
            write!(f, "({num})/{}", self.r)
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Small(i64),
    Big(String),
}

fn to_repr(n: &BigInt) -> IntRepr {
    n.to_i64().map(IntRepr::Small).unwrap_or_else(|| IntRepr::Big(n.to_string()))
}

fn from_repr(r: IntRepr) -> std::result::Result<BigInt, String> {
    match r {
        IntRepr::Small(n) => Ok(n.into()),
        IntRepr::Big(s) => s.parse().map_err(|e| format!("bad integer {s:?}: {e}")),
    }
}

#[derive(Serialize, Deserialize)]
struct SurdRecord {
    p: IntRepr,
    q: IntRepr,
    d: IntRepr,
    r: IntRepr,
}

impl Serialize for QuadraticSurd {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SurdRecord { p: to_repr(&self.p), q: to_repr(&self.q), d: to_repr(&self.d), r: to_repr(&self.r) }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadraticSurd {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let rec = SurdRecord::deserialize(de)?;
        let p = from_repr(rec.p).map_err(D::Error::custom)?;
        let q = from_repr(rec.q).map_err(D::Error::custom)?;
        let d = from_repr(rec.d).map_err(D::Error::custom)?;
        let r = from_repr(rec.r).map_err(D::Error::custom)?;
        QuadraticSurd::new(p, q, d, r).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(p: i64, q: i64, d: i64, r: i64) -> QuadraticSurd {
        QuadraticSurd::new(p, q, d, r).unwrap()
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(s(2, 2, 4, 2), QuadraticSurd::from_int(3));
        assert_eq!(s(0, 0, 7, 3), QuadraticSurd::zero());
        let phi = s(1, 1, 5, 2);
        assert_eq!((phi.p().clone(), phi.q().clone(), phi.d().clone(), phi.r().clone()),
            (1.into(), 1.into(), 5.into(), 2.into()));
        assert_eq!(s(0, 1, 12, 1), s(0, 2, 3, 1));
        assert_eq!(s(3, 3, 5, -6), s(-1, -1, 5, 2));
    }

    #[test]
    fn errors() {
        assert_eq!(QuadraticSurd::new(1, 1, 5, 0), Err(Error::DivisionByZero));
        assert!(matches!(QuadraticSurd::new(1, 1, -5, 1), Err(Error::UnsupportedDomain(_))));
    }

    #[test]
    fn golden_identities() {
        let phi = s(1, 1, 5, 2);
        assert_eq!(phi.checked_mul(&phi).unwrap(), s(3, 1, 5, 2));
        let inv = phi.recip().unwrap();
        assert_eq!(phi.checked_sub(&QuadraticSurd::one()).unwrap(), inv);
        assert_eq!(inv, s(-1, 1, 5, 2));
    }

    #[test]
    fn mixed_cmp() {
        assert_eq!(s(-1, 1, 2, 1).cmp(&s(-1, 1, 5, 2)), Ordering::Less);
        assert_eq!(s(0, 1, 2, 1).cmp(&s(0, 1, 3, 1)), Ordering::Less);
        // 4/√3 − 2 vs 0.31
        let v = s(-6, 4, 3, 3);
        assert_eq!(v.cmp(&QuadraticSurd::new(31, 0, 0, 100).unwrap()), Ordering::Less);
        assert_eq!(s(1, 1, 2, 1).cmp(&s(1, 1, 2, 1)), Ordering::Equal);
    }

    #[test]
    fn display_and_decimal() {
        assert_eq!(s(5, 1, 5, 10).to_string(), "(5+√5)/10");
        assert_eq!(s(-1, 1, 3, 1).to_string(), "-1+√3");
        assert_eq!(s(0, 1, 2, 1).to_string(), "√2");
        assert_eq!(s(7, 0, 0, 10).to_string(), "7/10");
        assert_eq!(s(5, 1, 5, 10).to_decimal(6), "0.723606");
        assert_eq!(s(-1, 0, 0, 3).to_decimal(3), "-0.334");
        assert_eq!(s(1, -1, 2, 1).to_decimal(4), "-0.4143");
    }

    #[test]
    fn serde_round_trip() {
        let v = s(5, 1, 5, 10);
        let j = serde_json::to_string(&v).unwrap();
        assert_eq!(j, r#"{"p":5,"q":1,"d":5,"r":10}"#);
        let back: QuadraticSurd = serde_json::from_str(&j).unwrap();
        assert_eq!(back, v);
    }
}
