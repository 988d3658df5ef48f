//! Exact rational numbers.
//!
//! Every real-valued quantity of a game (costs, thresholds, motivations,
//! contributions, utilities and scores) is held as a [`Rational`]. Equilibrium
//! membership hinges on weak-vs-strict comparisons such as `1/3 + 1/3 + 1/3 >= 1`,
//! which binary floating point gets wrong, so nothing in the analysis path
//! touches `f64`.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// An exact, always-normalized fraction with a positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid character {found:?} at offset {offset} in rational literal {literal:?}")]
    InvalidCharacter {
        literal: String,
        found: char,
        offset: usize,
    },
    #[error("malformed rational literal {0:?}")]
    Malformed(String),
    #[error("zero denominator in rational literal {0:?}")]
    ZeroDenominator(String),
}

impl Rational {
    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn from_integer(value: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(value)))
    }

    /// Builds `numer / denom`, normalizing sign and common factors.
    ///
    /// Returns `None` when `denom` is zero.
    pub fn new(numer: i64, denom: i64) -> Option<Self> {
        if denom == 0 {
            return None;
        }
        Some(Rational(BigRational::new(
            BigInt::from(numer),
            BigInt::from(denom),
        )))
    }

    /// Shorthand for literals known to be valid; panics on a zero denominator.
    pub fn frac(numer: i64, denom: i64) -> Self {
        Self::new(numer, denom).expect("zero denominator")
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// Lossy conversion for display and plotting only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Always `p/q`, including integers (`1/1`, `0/1`).
    pub fn to_exact_string(&self) -> String {
        format!("{}/{}", self.0.numer(), self.0.denom())
    }

    /// Fixed-point rendering with `places` decimals, rounding half away from zero.
    pub fn to_fixed(&self, places: u32) -> String {
        let scale = BigInt::from(10u32).pow(places);
        let scaled = (&self.0 * BigRational::from_integer(scale.clone())).round();
        let digits = scaled.to_integer();
        let negative = digits.is_negative();
        let (int_part, frac_part) = digits.abs().div_rem(&scale);
        let sign = if negative { "-" } else { "" };
        if places == 0 {
            format!("{sign}{int_part}")
        } else {
            format!(
                "{sign}{int_part}.{frac:0>width$}",
                frac = frac_part.to_string(),
                width = places as usize
            )
        }
    }

    /// Like [`Rational::to_fixed`] with trailing zeros (and a bare point) removed.
    pub fn to_trimmed(&self, max_places: u32) -> String {
        let s = self.to_fixed(max_places);
        if !s.contains('.') {
            return s;
        }
        let s = s.trim_end_matches('0').trim_end_matches('.');
        if s == "-0" {
            "0".to_string()
        } else {
            s.to_string()
        }
    }

    pub fn min_of<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Option<Rational> {
        values.into_iter().min().cloned()
    }

    pub fn max_of<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Option<Rational> {
        values.into_iter().max().cloned()
    }
}

fn parse_digits(
    literal: &str,
    part: &str,
    base_offset: usize,
) -> Result<BigInt, ParseRationalError> {
    if let Some((offset, found)) = part.char_indices().find(|(_, c)| !c.is_ascii_digit()) {
        return Err(ParseRationalError::InvalidCharacter {
            literal: literal.to_string(),
            found,
            offset: base_offset + offset,
        });
    }
    if part.is_empty() {
        return Ok(BigInt::zero());
    }
    part.parse::<BigInt>()
        .map_err(|_| ParseRationalError::Malformed(literal.to_string()))
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    /// Accepts an optional sign followed by either a base-10 decimal numeral
    /// (`12`, `0.25`, `.5`) or a fraction `p/q` with `q > 0`.
    fn from_str(literal: &str) -> Result<Self, Self::Err> {
        let trimmed = literal.trim();
        if trimmed.is_empty() {
            return Err(ParseRationalError::Empty);
        }
        let lead = literal.len() - literal.trim_start().len();
        let (negative, body, body_offset) = match trimmed.as_bytes()[0] {
            b'-' => (true, &trimmed[1..], lead + 1),
            b'+' => (false, &trimmed[1..], lead + 1),
            _ => (false, trimmed, lead),
        };
        if body.is_empty() {
            return Err(ParseRationalError::Malformed(literal.to_string()));
        }

        let value = if let Some((num, den)) = body.split_once('/') {
            if num.is_empty() || den.is_empty() {
                return Err(ParseRationalError::Malformed(literal.to_string()));
            }
            let n = parse_digits(literal, num, body_offset)?;
            let d = parse_digits(literal, den, body_offset + num.len() + 1)?;
            if d.is_zero() {
                return Err(ParseRationalError::ZeroDenominator(literal.to_string()));
            }
            BigRational::new(n, d)
        } else {
            let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
            if int_part.is_empty() && frac_part.is_empty() {
                return Err(ParseRationalError::Malformed(literal.to_string()));
            }
            let i = parse_digits(literal, int_part, body_offset)?;
            let f = parse_digits(literal, frac_part, body_offset + int_part.len() + 1)?;
            let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
            BigRational::new(i * &scale + f, scale)
        };
        Ok(Rational(if negative { -value } else { value }))
    }
}

impl fmt::Display for Rational {
    /// Integers print bare, everything else as `p/q`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<i64> for Rational {
    fn from(value: i64) -> Self {
        Rational::from_integer(value)
    }
}

impl From<BigInt> for Rational {
    fn from(value: BigInt) -> Self {
        Rational(BigRational::from_integer(value))
    }
}

impl From<usize> for Rational {
    fn from(value: usize) -> Self {
        Rational(BigRational::from_integer(BigInt::from(value)))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl<'a> $trait<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
        impl<'a, 'b> $trait<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'b Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
// Division by zero panics, as for integers.
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::one(), |acc, x| acc * x)
    }
}

impl<'a> Product<&'a Rational> for Rational {
    fn product<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::one(), |acc, x| acc * x)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

struct RationalVisitor;

impl Visitor<'_> for RationalVisitor {
    type Value = Rational;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("a rational string such as \"1/3\" or \"0.25\", or an integer")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Rational, E> {
        v.parse().map_err(E::custom)
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rational, E> {
        Ok(Rational::from_integer(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rational, E> {
        Ok(Rational(BigRational::from_integer(BigInt::from(v))))
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        deserializer.deserialize_any(RationalVisitor)
    }
}
