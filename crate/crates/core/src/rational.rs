//! Exact rational numbers for weights, scores and thresholds.
//!
//! Values are carried as reduced `i64` fractions. In JSON they appear as a
//! plain number whenever the value has a terminating decimal expansion that
//! survives an `f64` round trip, and as a `"p/q"` string otherwise, so that
//! serialization never loses precision.

use alloc::format;
use alloc::string::{String, ToString};
use core::fmt;
use core::iter::Sum;
use core::ops::{Add, Div, Mul, Sub};
use core::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedMul, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Longest decimal expansion we are willing to print exactly.
const MAX_DECIMAL_DIGITS: usize = 18;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(Ratio<i64>);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational `{0}`")]
pub struct ParseRationalError(pub String);

impl Rational {
    pub const ZERO: Rational = Rational(Ratio::new_raw(0, 1));
    pub const ONE: Rational = Rational(Ratio::new_raw(1, 1));

    /// Panics if `denom` is zero.
    pub fn new(numer: i64, denom: i64) -> Self {
        Rational(Ratio::new(numer, denom))
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(Ratio::from_integer(n))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.numer() > 0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Converts an `f64` through its shortest round-trip decimal form, so
    /// `0.1` becomes exactly `1/10`.
    pub fn from_f64(value: f64) -> Result<Self, ParseRationalError> {
        if !value.is_finite() {
            return Err(ParseRationalError(format!("{value}")));
        }
        parse_decimal(&format!("{value}"))
    }

    pub fn checked_add(&self, other: &Rational) -> Option<Rational> {
        self.0.checked_add(&other.0).map(Rational)
    }

    pub fn checked_mul(&self, other: &Rational) -> Option<Rational> {
        self.0.checked_mul(&other.0).map(Rational)
    }

    /// Exact decimal expansion if the denominator only has factors 2 and 5.
    pub fn to_decimal_string(&self) -> Option<String> {
        let numer = self.numer();
        let denom = self.denom();
        let mut d = denom;
        while d % 2 == 0 {
            d /= 2;
        }
        while d % 5 == 0 {
            d /= 5;
        }
        if d != 1 {
            return None;
        }
        let negative = numer < 0;
        let n = numer.unsigned_abs();
        let den = denom.unsigned_abs();
        let int_part = n / den;
        let mut rem = n % den;
        let mut out = String::new();
        if negative {
            out.push('-');
        }
        out.push_str(&int_part.to_string());
        if rem != 0 {
            out.push('.');
            let mut digits = 0;
            while rem != 0 {
                if digits == MAX_DECIMAL_DIGITS {
                    return None;
                }
                rem *= 10;
                out.push(char::from(b'0' + (rem / den) as u8));
                rem %= den;
                digits += 1;
            }
        }
        Some(out)
    }

    /// Fixed two-decimal rendering with half-up rounding, for display only.
    pub fn display_2dp(&self) -> String {
        let scaled = self.0 * Ratio::from_integer(100);
        let rounded = if scaled.numer() >= &0 {
            (scaled + Ratio::new(1, 2)).floor()
        } else {
            (scaled - Ratio::new(1, 2)).ceil()
        };
        let cents = rounded.to_integer();
        let sign = if cents < 0 { "-" } else { "" };
        let abs = cents.unsigned_abs();
        format!("{sign}{}.{:02}", abs / 100, abs % 100)
    }
}

fn checked_pow10(exp: u32) -> Option<i64> {
    10i64.checked_pow(exp)
}

fn parse_decimal(text: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(text.to_string());
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = text[pos + 1..].parse().map_err(|_| err())?;
            (&text[..pos], exp)
        }
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(err());
    }
    let frac_trimmed = frac_part.trim_end_matches('0');
    let mut all_digits = String::with_capacity(int_part.len() + frac_trimmed.len());
    all_digits.push_str(int_part);
    all_digits.push_str(frac_trimmed);
    let all_digits = all_digits.trim_start_matches('0');
    let numer: i64 = if all_digits.is_empty() {
        0
    } else {
        all_digits.parse().map_err(|_| err())?
    };
    let scale = frac_trimmed.len() as i32 - exponent;
    let value = if scale >= 0 {
        let denom = checked_pow10(scale as u32).ok_or_else(err)?;
        Ratio::new(numer, denom)
    } else {
        let factor = checked_pow10((-scale) as u32).ok_or_else(err)?;
        Ratio::from_integer(numer.checked_mul(factor).ok_or_else(err)?)
    };
    Ok(Rational(if negative { -value } else { value }))
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    /// Accepts `p/q` fractions and decimal literals (with optional exponent).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let err = || ParseRationalError(s.to_string());
            let n: i64 = n.trim().parse().map_err(|_| err())?;
            let d: i64 = d.trim().parse().map_err(|_| err())?;
            if d == 0 {
                return Err(err());
            }
            return Ok(Rational::new(n, d));
        }
        parse_decimal(s)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_decimal_string() {
            Some(s) => f.write_str(&s),
            None => write!(f, "{}/{}", self.numer(), self.denom()),
        }
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<u8> for Rational {
    fn from(n: u8) -> Self {
        Rational::from_integer(i64::from(n))
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        Rational(self.0 + rhs.0)
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        Rational(self.0 - rhs.0)
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        Rational(self.0 * rhs.0)
    }
}

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        Rational(self.0 / rhs.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::ZERO, |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::ZERO, |acc, x| acc + *x)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.denom() == 1 {
            return serializer.serialize_i64(self.numer());
        }
        if let Some(decimal) = self.to_decimal_string() {
            if let Ok(float) = decimal.parse::<f64>() {
                if format!("{float}") == decimal {
                    return serializer.serialize_f64(float);
                }
            }
        }
        serializer.collect_str(&format_args!("{}/{}", self.numer(), self.denom()))
    }
}

struct RationalVisitor;

impl<'de> Visitor<'de> for RationalVisitor {
    type Value = Rational;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("a number or a \"p/q\" fraction string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rational, E> {
        Ok(Rational::from_integer(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rational, E> {
        i64::try_from(v)
            .map(Rational::from_integer)
            .map_err(|_| E::custom("integer out of range"))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Rational, E> {
        Rational::from_f64(v).map_err(E::custom)
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Rational, E> {
        v.parse().map_err(E::custom)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Rational, D::Error> {
        deserializer.deserialize_any(RationalVisitor)
    }
}

/// Exact median of a non-empty slice; the mean of the two middle values for
/// even lengths.
pub fn median(values: &[Rational]) -> Option<Rational> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort();
    let mid = sorted.len() / 2;
    if sorted.len().is_odd() {
        Some(sorted[mid])
    } else {
        Some((sorted[mid - 1] + sorted[mid]) / Rational::from_integer(2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!("0.1".parse::<Rational>().unwrap(), Rational::new(1, 10));
        assert_eq!("2.50".parse::<Rational>().unwrap(), Rational::new(5, 2));
        assert_eq!("-3".parse::<Rational>().unwrap(), Rational::from_integer(-3));
        assert_eq!("1e2".parse::<Rational>().unwrap(), Rational::from_integer(100));
        assert_eq!("2.5e-1".parse::<Rational>().unwrap(), Rational::new(1, 4));
        assert_eq!("1/3".parse::<Rational>().unwrap(), Rational::new(1, 3));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("abc".parse::<Rational>().is_err());
        assert!(".".parse::<Rational>().is_err());
    }

    #[test]
    fn from_f64_uses_shortest_repr() {
        assert_eq!(Rational::from_f64(0.1).unwrap(), Rational::new(1, 10));
        assert_eq!(Rational::from_f64(20.5).unwrap(), Rational::new(41, 2));
        assert!(Rational::from_f64(f64::NAN).is_err());
    }

    #[test]
    fn decimal_expansion() {
        assert_eq!(Rational::new(5, 2).to_decimal_string().as_deref(), Some("2.5"));
        assert_eq!(Rational::new(-1, 8).to_decimal_string().as_deref(), Some("-0.125"));
        assert_eq!(Rational::new(1, 3).to_decimal_string(), None);
        assert_eq!(Rational::new(1, 3).to_string(), "1/3");
    }

    #[test]
    fn two_decimal_display_rounds_half_up() {
        assert_eq!(Rational::new(7, 3).display_2dp(), "2.33");
        assert_eq!(Rational::new(1, 8).display_2dp(), "0.13");
        assert_eq!(Rational::from_integer(3).display_2dp(), "3.00");
        assert_eq!(Rational::new(-1, 8).display_2dp(), "-0.13");
    }

    #[test]
    fn json_round_trip_is_exact() {
        for r in [
            Rational::new(5, 2),
            Rational::new(7, 3),
            Rational::from_integer(4),
            Rational::new(1, 1024),
        ] {
            let text = serde_json::to_string(&r).unwrap();
            let back: Rational = serde_json::from_str(&text).unwrap();
            assert_eq!(back, r, "{text}");
        }
        assert_eq!(serde_json::to_string(&Rational::new(5, 2)).unwrap(), "2.5");
        assert_eq!(serde_json::to_string(&Rational::new(7, 3)).unwrap(), "\"7/3\"");
    }

    #[test]
    fn median_of_even_and_odd() {
        let v = vec![Rational::from(3u8), Rational::from(1u8), Rational::from(2u8)];
        assert_eq!(median(&v), Some(Rational::from(2u8)));
        let v = vec![Rational::from(1u8), Rational::from(4u8)];
        assert_eq!(median(&v), Some(Rational::new(5, 2)));
        assert_eq!(median(&[]), None);
    }
}
