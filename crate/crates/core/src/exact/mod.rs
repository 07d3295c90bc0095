//! Exact arithmetic: big rationals, quadratic surds and dyadic enclosures.

mod interval;
mod real;
mod surd;

use std::sync::atomic::{AtomicU32, Ordering};

pub use interval::{rational_to_f64, Bound, ValidatedInterval};
pub use real::Real;
pub use surd::QuadraticSurd;

/// Arbitrary-precision rational, always in lowest terms.
pub type Rational = num_rational::BigRational;

pub const DEFAULT_PRECISION_BITS: u32 = 160;

static PRECISION: AtomicU32 = AtomicU32::new(DEFAULT_PRECISION_BITS);

/// Working precision of enclosures, in bits after the binary point.
pub fn precision_bits() -> u32 {
    PRECISION.load(Ordering::Relaxed)
}

pub fn set_precision_bits(bits: u32) {
    PRECISION.store(bits.max(32), Ordering::Relaxed);
}

/// Formats a rational as `p/q` (or `p` when integral).
pub fn rational_string(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p/q`, an integer, or a finite decimal such as `-1.25`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: num_bigint::BigInt = p.trim().parse().ok()?;
        let q: num_bigint::BigInt = q.trim().parse().ok()?;
        if num_traits::Zero::is_zero(&q) {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        let n: num_bigint::BigInt = digits.parse().ok()?;
        let scale = num_bigint::BigInt::from(10u32).pow(frac.len() as u32);
        let v = Rational::new(n, scale);
        return Some(if neg { -v } else { v });
    }
    s.parse::<num_bigint::BigInt>().ok().map(Rational::from_integer)
}

pub mod rational_serde {
    //! Serde adapter writing a rational as the string `"p/q"`.
    use super::{parse_rational, rational_string, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rational_string(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}")))
    }
}
