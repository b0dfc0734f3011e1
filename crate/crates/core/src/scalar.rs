//! Scalar abstractions.
//!
//! [`Scalar`] is the coefficient field used by polynomials, difference
//! equations and the exact linear algebra. It is implemented for every type
//! with the usual field operations and ordering, so `BigRational`, `f64` and
//! the arbitrary-precision [`BigFloat`] all qualify.
//!
//! [`Real`] adds the transcendental functions needed by the generalized gamma
//! function and the regularized sums. It is implemented for `f64` and
//! [`BigFloat`].

use std::collections::HashMap;
use std::fmt::{Debug, Display};
use std::ops::Neg;
use std::sync::{Mutex, OnceLock};

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::{IBig, UBig};
use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always kept in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Binary arbitrary-precision float.
pub type BigFloat = FBig<HalfEven, 2>;

/// Ordered field used for polynomial coefficients.
pub trait Scalar:
    Clone + Debug + Display + PartialEq + PartialOrd + Num + Neg<Output = Self> + FromPrimitive
{
    fn from_int(n: i64) -> Self {
        <Self as FromPrimitive>::from_i64(n).expect("every field contains the integers")
    }
}

impl<T> Scalar for T where
    T: Clone + Debug + Display + PartialEq + PartialOrd + Num + Neg<Output = T> + FromPrimitive
{
}

/// Real scalar with the elementary transcendental functions.
///
/// `bits` arguments give the working precision for types that carry one;
/// `f64` ignores them.
pub trait Real: Scalar + Signed {
    fn from_rational(q: &Rational, bits: usize) -> Self;
    fn from_f64_value(v: f64, bits: usize) -> Self;
    fn ln(&self) -> Self;
    fn exp(&self) -> Self;
    fn pi(bits: usize) -> Self;
    fn to_f64(&self) -> f64;
    /// Decimal rendering with `digits` significant digits.
    fn to_decimal_string(&self, digits: usize) -> String;
}

impl Real for f64 {
    fn from_rational(q: &Rational, _bits: usize) -> Self {
        rational_to_f64(q)
    }

    fn from_f64_value(v: f64, _bits: usize) -> Self {
        v
    }

    fn ln(&self) -> Self {
        f64::ln(*self)
    }

    fn exp(&self) -> Self {
        f64::exp(*self)
    }

    fn pi(_bits: usize) -> Self {
        std::f64::consts::PI
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn to_decimal_string(&self, digits: usize) -> String {
        let digits = digits.clamp(1, 17);
        format!("{:.*e}", digits - 1, self)
    }
}

impl Real for BigFloat {
    fn from_rational(q: &Rational, bits: usize) -> Self {
        let num = BigFloat::from(bigint_to_ibig(q.numer())).with_precision(bits).value();
        if q.denom().is_one() {
            return num;
        }
        let den = BigFloat::from(bigint_to_ibig(q.denom())).with_precision(bits).value();
        num / den
    }

    fn from_f64_value(v: f64, bits: usize) -> Self {
        BigFloat::try_from(v)
            .expect("finite f64")
            .with_precision(bits)
            .value()
    }

    fn ln(&self) -> Self {
        assert!(*self > BigFloat::ZERO, "ln of a non-positive BigFloat");
        FBig::ln(self)
    }

    fn exp(&self) -> Self {
        FBig::exp(self)
    }

    fn pi(bits: usize) -> Self {
        static CACHE: OnceLock<Mutex<HashMap<usize, BigFloat>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("pi cache poisoned");
        guard.entry(bits).or_insert_with(|| machin_pi(bits)).clone()
    }

    fn to_f64(&self) -> f64 {
        FBig::to_f64(self).value()
    }

    fn to_decimal_string(&self, digits: usize) -> String {
        let d = self.to_decimal().value().with_precision(digits.max(1)).value();
        format!("{:e}", d)
    }
}

// pi = 16 atan(1/5) - 4 atan(1/239)
fn machin_pi(bits: usize) -> BigFloat {
    let work = bits + 32;
    let atan_inv = |n: i64| -> BigFloat {
        let one = BigFloat::from(1).with_precision(work).value();
        let n_f = BigFloat::from(n).with_precision(work).value();
        let n2 = &n_f * &n_f;
        let mut power = &one / &n_f;
        let mut sum = power.clone();
        let threshold = BigFloat::from_parts(IBig::ONE, -(work as isize) - 8);
        let mut k: i64 = 1;
        loop {
            power /= &n2;
            let term = &power / BigFloat::from(2 * k + 1);
            if term < threshold {
                break;
            }
            if k % 2 == 1 {
                sum -= term;
            } else {
                sum += term;
            }
            k += 1;
        }
        sum
    };
    let pi = atan_inv(5) * BigFloat::from(16) - atan_inv(239) * BigFloat::from(4);
    pi.with_precision(bits).value()
}

fn bigint_to_ibig(n: &BigInt) -> IBig {
    let (sign, bytes) = n.to_bytes_le();
    let mag = IBig::from(UBig::from_le_bytes(&bytes));
    match sign {
        Sign::Minus => -mag,
        _ => mag,
    }
}

/// Working precision expressed in significant decimal digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Precision {
    digits: u32,
}

impl Precision {
    pub const DEFAULT_DIGITS: u32 = 64;

    pub fn digits(digits: u32) -> Self {
        Precision { digits: digits.max(1) }
    }

    pub fn decimal_digits(&self) -> u32 {
        self.digits
    }

    /// Binary precision with a few guard bits.
    pub fn bits(&self) -> usize {
        (self.digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + 16
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision::digits(Self::DEFAULT_DIGITS)
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        if q.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Exact conversion of a finite `f64`.
pub fn rational_from_f64(v: f64) -> Result<Rational> {
    Rational::from_float(v).ok_or_else(|| Error::Parse(format!("non-finite value {v}")))
}

/// Parses `"p/q"`, an integer, or a decimal literal such as `"-1.25e-3"`.
///
/// The result is reduced, so `"2/4"` and `"0.5"` both give one half.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::Parse("empty rational literal".into()));
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("invalid numerator in {s:?}")))?;
        let d: BigInt = d
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("invalid denominator in {s:?}")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    parse_decimal(t).ok_or_else(|| Error::Parse(format!("invalid rational literal {s:?}")))
}

fn parse_decimal(t: &str) -> Option<Rational> {
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i64>().ok()?),
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: BigInt = format!("{int_part}{frac_part}0").parse().ok()?;
    let all = all / BigInt::from(10);
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let magnitude = if scale >= 0 {
        Rational::from_integer(all * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(all, num_traits::pow(ten, (-scale) as usize))
    };
    Some(if negative { -magnitude } else { magnitude })
}

/// Canonical `"p/q"` string (`"p"` for integers).
pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

/// Serde adapter storing a [`Rational`] as its canonical string.
pub mod serde_rational {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let raw = RationalLiteral::deserialize(d)?;
        raw.into_rational().map_err(serde::de::Error::custom)
    }

    /// Accepts either a string literal or a JSON integer.
    #[derive(Deserialize)]
    #[serde(untagged)]
    pub(crate) enum RationalLiteral {
        Text(String),
        Int(i64),
    }

    impl RationalLiteral {
        pub(crate) fn into_rational(self) -> Result<Rational> {
            match self {
                RationalLiteral::Text(s) => parse_rational(&s),
                RationalLiteral::Int(n) => Ok(int(n)),
            }
        }
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for q in v {
                seq.serialize_element(&format_rational(q))?;
            }
            seq.end()
        }

        /// Converts element by element so errors point at the offending entry.
        #[derive(Deserialize)]
        #[serde(transparent)]
        struct Element(#[serde(with = "super")] Rational);

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
            Ok(Vec::<Element>::deserialize(d)?.into_iter().map(|e| e.0).collect())
        }
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(q: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
            match q {
                Some(q) => s.serialize_some(&format_rational(q)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Rational>, D::Error> {
            let raw = Option::<RationalLiteral>::deserialize(d)?;
            raw.map(|r| r.into_rational().map_err(serde::de::Error::custom))
                .transpose()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_integers_and_decimals() {
        assert_eq!(parse_rational("2/4").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-7").unwrap(), int(-7));
        assert_eq!(parse_rational("0.125").unwrap(), rat(1, 8));
        assert_eq!(parse_rational("-1.5e-2").unwrap(), rat(-3, 200));
        assert_eq!(parse_rational("3e2").unwrap(), int(300));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn bigfloat_from_rational_matches_f64() {
        let q = rat(-22, 7);
        let b = BigFloat::from_rational(&q, 200);
        assert!((Real::to_f64(&b) - (-22.0 / 7.0)).abs() < 1e-15);
    }

    #[test]
    fn machin_pi_is_accurate() {
        let pi = <BigFloat as Real>::pi(300);
        let s = pi.to_decimal_string(60);
        assert!(s.starts_with("3.14159265358979323846264338327950288419716939937510582097494"), "{s}");
    }

    #[test]
    fn precision_bits_cover_digits() {
        assert!(Precision::digits(64).bits() >= 213);
        assert_eq!(Precision::default().decimal_digits(), 64);
    }
}
