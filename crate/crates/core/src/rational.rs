//! Exact rationals and their canonical `num/den` text form.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Arbitrary-precision rational number used for every probability and payoff.
pub type Rational = num_rational::BigRational;

/// Shorthand constructor for small rationals. Panics on a zero denominator.
pub fn q(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Integer-valued rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational {input:?}: {reason}")]
pub struct ParseRationalError {
    pub input: String,
    pub reason: &'static str,
}

/// `Σ xᵢ·yᵢ`, accumulated over a common denominator and reduced once.
pub fn dot<'a>(
    xs: impl IntoIterator<Item = &'a Rational>,
    ys: impl IntoIterator<Item = &'a Rational>,
) -> Rational {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for (x, y) in xs.into_iter().zip(ys) {
        if x.is_zero() || y.is_zero() {
            continue;
        }
        let (n, d) = (x.numer() * y.numer(), x.denom() * y.denom());
        if d == den {
            num += n;
        } else {
            num = num * &d + n * &den;
            den *= d;
        }
    }
    Rational::new(num, den)
}

/// Parses `"n"` or `"n/d"` with optional leading `-` on the numerator.
///
/// Decimal points, exponents, whitespace and signed denominators are rejected
/// so that every accepted string denotes exactly one rational.
pub fn parse_rational(input: &str) -> Result<Rational, ParseRationalError> {
    let err = |reason| ParseRationalError { input: input.to_string(), reason };
    let (num, den) = match input.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (input, None),
    };
    let numerator = parse_integer(num, true).ok_or_else(|| err("malformed numerator"))?;
    let denominator = match den {
        Some(d) => parse_integer(d, false).ok_or_else(|| err("malformed denominator"))?,
        None => BigInt::one(),
    };
    if denominator.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(Rational::new(numerator, denominator))
}

fn parse_integer(s: &str, allow_sign: bool) -> Option<BigInt> {
    let digits = match s.strip_prefix('-') {
        Some(rest) if allow_sign => rest,
        Some(_) => return None,
        None => s,
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str(s).ok()
}

/// Canonical text: lowest terms, sign on the numerator, `n` when integral.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

/// Formats a vector as `(a, b, c)`.
pub fn format_vector(values: &[Rational]) -> String {
    let parts: Vec<String> = values.iter().map(format_rational).collect();
    format!("({})", parts.join(", "))
}

/// Rational that serializes as its canonical string.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exact(pub Rational);

impl From<Rational> for Exact {
    fn from(value: Rational) -> Self {
        Exact(value)
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Exact {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_rational(s).map(Exact)
    }
}

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse_rational(&s).map(Exact).map_err(serde::de::Error::custom)
    }
}

pub fn to_exact(values: &[Rational]) -> Vec<Exact> {
    values.iter().cloned().map(Exact).collect()
}

pub fn from_exact(values: &[Exact]) -> Vec<Rational> {
    values.iter().map(|e| e.0.clone()).collect()
}
