use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use super::{precision_bits, QuadraticSurd, Rational, ValidatedInterval};
use crate::error::{Error, Result};

/// A real number held exactly as a surd when possible, else as an enclosure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Real {
    Exact(QuadraticSurd),
    Approx(ValidatedInterval),
}

impl Real {
    pub fn int(n: i64) -> Self {
        Real::Exact(QuadraticSurd::from_int(n))
    }

    pub fn big(n: impl Into<BigInt>) -> Self {
        Real::Exact(QuadraticSurd::from_int(n))
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        Real::Exact(QuadraticSurd::from_rational(&Rational::new(p.into(), q.into())))
    }

    pub fn rational(x: &Rational) -> Self {
        Real::Exact(QuadraticSurd::from_rational(x))
    }

    pub fn zero() -> Self {
        Real::int(0)
    }

    pub fn one() -> Self {
        Real::int(1)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Real::Exact(_))
    }

    pub fn as_surd(&self) -> Option<&QuadraticSurd> {
        match self {
            Real::Exact(s) => Some(s),
            Real::Approx(_) => None,
        }
    }

    pub fn enclosure(&self) -> ValidatedInterval {
        self.enclosure_bits(precision_bits())
    }

    pub fn enclosure_bits(&self, bits: u32) -> ValidatedInterval {
        match self {
            Real::Exact(s) => ValidatedInterval::from_surd(s, bits),
            Real::Approx(i) => i.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Real::Exact(s) => s.to_f64(),
            Real::Approx(i) => i.to_f64(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Real::Exact(s) => s.is_zero(),
            Real::Approx(i) => i.width().map_or(false, |w| w.is_zero()) && i.contains_zero(),
        }
    }

    fn lift(
        &self,
        o: &Real,
        exact: impl Fn(&QuadraticSurd, &QuadraticSurd) -> Option<QuadraticSurd>,
        approx: impl Fn(&ValidatedInterval, &ValidatedInterval) -> ValidatedInterval,
    ) -> Real {
        if let (Real::Exact(a), Real::Exact(b)) = (self, o) {
            if let Some(v) = exact(a, b) {
                return Real::Exact(v);
            }
        }
        Real::Approx(approx(&self.enclosure(), &o.enclosure()))
    }

    pub fn add(&self, o: &Real) -> Real {
        self.lift(o, |a, b| a.checked_add(b), |a, b| a.add(b))
    }

    pub fn sub(&self, o: &Real) -> Real {
        self.lift(o, |a, b| a.checked_sub(b), |a, b| a.sub(b))
    }

    pub fn mul(&self, o: &Real) -> Real {
        self.lift(o, |a, b| a.checked_mul(b), |a, b| a.mul(b))
    }

    pub fn neg(&self) -> Real {
        match self {
            Real::Exact(s) => Real::Exact(s.neg()),
            Real::Approx(i) => Real::Approx(i.neg()),
        }
    }

    pub fn add_int(&self, n: i64) -> Real {
        self.add(&Real::int(n))
    }

    pub fn recip(&self) -> Result<Real> {
        match self {
            Real::Exact(s) => Ok(Real::Exact(s.recip()?)),
            Real::Approx(i) => Ok(Real::Approx(i.recip()?)),
        }
    }

    pub fn div(&self, o: &Real) -> Result<Real> {
        if let (Real::Exact(a), Real::Exact(b)) = (self, o) {
            if let Some(v) = a.checked_div(b)? {
                return Ok(Real::Exact(v));
            }
        }
        Ok(Real::Approx(self.enclosure().div(&o.enclosure())?))
    }

    /// Square root; exact when the result stays in a quadratic field.
    pub fn sqrt(&self) -> Result<Real> {
        if let Real::Exact(s) = self {
            if s.signum() == Ordering::Less {
                return Err(Error::UnsupportedDomain("square root of a negative number".into()));
            }
            if let Some(x) = s.to_rational() {
                // √(a/b) = √(ab)/b
                let ab = x.numer() * x.denom();
                return Ok(Real::Exact(QuadraticSurd::new(0, 1, ab, x.denom().clone())?));
            }
        }
        Ok(Real::Approx(self.enclosure().sqrt()?))
    }

    /// Exact ordering for surds; enclosures must separate otherwise.
    pub fn try_cmp(&self, o: &Real) -> Result<Ordering> {
        if let (Real::Exact(a), Real::Exact(b)) = (self, o) {
            return Ok(a.cmp_exact(b));
        }
        let bits = precision_bits();
        for extra in [0u32, 64, 256] {
            if let Some(ord) = self.enclosure_bits(bits + extra).try_cmp(&o.enclosure_bits(bits + extra)) {
                return Ok(ord);
            }
        }
        Err(Error::PrecisionExhausted(format!(
            "cannot separate {} and {}",
            self.enclosure(),
            o.enclosure()
        )))
    }

    /// Like `try_cmp` but resolves overlapping enclosures by midpoint.
    pub fn cmp_loose(&self, o: &Real) -> Ordering {
        self.try_cmp(o).unwrap_or_else(|_| self.to_f64().total_cmp(&o.to_f64()))
    }

    pub fn max(self, o: Real) -> Real {
        if self.cmp_loose(&o) == Ordering::Less {
            o
        } else {
            self
        }
    }

    pub fn min(self, o: Real) -> Real {
        if self.cmp_loose(&o) == Ordering::Greater {
            o
        } else {
            self
        }
    }

    /// Decimal string: exact digits for surds, midpoint for enclosures.
    pub fn to_decimal(&self, digits: u32) -> String {
        match self {
            Real::Exact(s) => s.to_decimal(digits),
            Real::Approx(i) => match i.midpoint() {
                Some(m) => QuadraticSurd::from_rational(&m).to_decimal(digits),
                None => format!("{}", i.to_f64()),
            },
        }
    }

    /// Width of the enclosure (zero for exact values).
    pub fn width(&self) -> f64 {
        match self {
            Real::Exact(_) => 0.0,
            Real::Approx(i) => i.width_f64(),
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        match self {
            Real::Exact(s) => s.signum() != Ordering::Less,
            Real::Approx(i) => i.lo() >= &super::Bound::Finite(Rational::zero()),
        }
    }

    pub fn from_f64_exact(x: f64) -> Option<Real> {
        Rational::from_float(x).map(|r| Real::rational(&r))
    }

    pub fn is_integer_valued(&self) -> Option<BigInt> {
        match self {
            Real::Exact(s) if s.is_rational() && (s.p() % s.r()).is_zero() => Some(s.p() / s.r()),
            _ => None,
        }
    }
}

impl From<QuadraticSurd> for Real {
    fn from(s: QuadraticSurd) -> Self {
        Real::Exact(s)
    }
}

impl From<ValidatedInterval> for Real {
    fn from(i: ValidatedInterval) -> Self {
        Real::Approx(i)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Exact(s) => write!(f, "{s}"),
            Real::Approx(i) => write!(f, "{i}"),
        }
    }
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_fields_fall_back() {
        let a = Real::Exact(QuadraticSurd::sqrt_int(2).unwrap());
        let b = Real::Exact(QuadraticSurd::sqrt_int(3).unwrap());
        let s = a.add(&b);
        assert!(!s.is_exact());
        assert!(s.width() < 1e-25);
        assert!((s.to_f64() - (2f64.sqrt() + 3f64.sqrt())).abs() < 1e-15);
        assert_eq!(a.try_cmp(&b).unwrap(), Ordering::Less);
    }

    #[test]
    fn sqrt_of_rational() {
        assert_eq!(Real::ratio(3, 4).sqrt().unwrap(), Real::Exact(QuadraticSurd::new(0, 1, 3, 2).unwrap()));
        assert_eq!(Real::int(9).sqrt().unwrap(), Real::int(3));
        let golden_sq = Real::Exact(QuadraticSurd::new(3, 1, 5, 2).unwrap()).sqrt().unwrap();
        assert!((golden_sq.to_f64() - 1.618033988749895).abs() < 1e-14);
    }
}
