//! Coefficient field abstraction.
//!
//! Every series coefficient is a [`Scalar`]: either an exact arbitrary-precision
//! rational ([`Rational`]) or an IEEE-754 double. The backend is a type
//! parameter, so mixing backends inside one computation cannot compile.

use std::fmt::{Debug, Display};
use std::ops::{AddAssign, DivAssign, MulAssign, Neg, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact rational number, always normalized (lowest terms, positive denominator).
pub type Rational = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    Exact,
    Float,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Exact => "exact",
            Backend::Float => "float",
        }
    }
}

impl Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Backend {
    type Err = ParseScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Backend::Exact),
            "float" => Ok(Backend::Float),
            other => Err(ParseScalarError(format!("unknown backend `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse scalar: {0}")]
pub struct ParseScalarError(pub String);

/// Relative tolerance used for float-backend zero verdicts.
pub const FLOAT_VERDICT_TOLERANCE: f64 = 1e-10;

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Neg<Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
    + for<'a> DivAssign<&'a Self>
{
    const BACKEND: Backend;

    fn from_i64(v: i64) -> Self;

    fn from_rational(v: &Rational) -> Self;

    fn to_f64(&self) -> f64;

    fn abs(&self) -> Self;

    /// Parses `p/q`, an integer literal or a decimal literal.
    fn parse(s: &str) -> Result<Self, ParseScalarError>;

    /// Lossless text form: `p/q` (or `p` when integral) for exact values,
    /// 17 significant digits for floats.
    fn to_text(&self) -> String;

    /// Zero test used by residual verdicts. Exact values must be exactly zero;
    /// floats must satisfy `|self| <= tol * scale`.
    fn is_negligible(&self, scale: f64) -> bool;

    fn product(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        out *= rhs;
        out
    }

    fn quotient(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        out /= rhs;
        out
    }

    fn sum(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        out += rhs;
        out
    }

    fn difference(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        out -= rhs;
        out
    }

    fn scaled_by(&self, k: i64) -> Self {
        self.product(&Self::from_i64(k))
    }

    fn ratio(num: i64, den: i64) -> Self {
        Self::from_rational(&Rational::new(BigInt::from(num), BigInt::from(den)))
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, ParseScalarError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(ParseScalarError("empty string".into()));
    }
    let bad = || ParseScalarError(format!("`{s}` is not p/q, an integer or a decimal"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(ParseScalarError(format!("`{s}` has a zero denominator")));
        }
        return Ok(Rational::new(p, q));
    }
    if let Ok(n) = s.parse::<BigInt>() {
        return Ok(Rational::from_integer(n));
    }
    parse_decimal(s).ok_or_else(bad)
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let all: BigInt = format!("{int_part}{frac_part}").parse().ok()?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        Rational::from_integer(all * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(all, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Some(value)
}

impl Scalar for Rational {
    const BACKEND: Backend = Backend::Exact;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_rational(v: &Rational) -> Self {
        v.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn parse(s: &str) -> Result<Self, ParseScalarError> {
        parse_rational(s)
    }

    fn to_text(&self) -> String {
        if self.denom().is_one() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }

    fn is_negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }

    fn product(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn sum(&self, rhs: &Self) -> Self {
        self + rhs
    }
}

impl Scalar for f64 {
    const BACKEND: Backend = Backend::Float;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_rational(v: &Rational) -> Self {
        ToPrimitive::to_f64(v).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn parse(s: &str) -> Result<Self, ParseScalarError> {
        let s = s.trim();
        if s.contains('/') {
            return parse_rational(s).map(|r| <f64 as Scalar>::from_rational(&r));
        }
        s.parse::<f64>()
            .map_err(|_| ParseScalarError(format!("`{s}` is not a number")))
    }

    fn to_text(&self) -> String {
        format!("{:.16e}", self)
    }

    fn is_negligible(&self, scale: f64) -> bool {
        f64::abs(*self) <= FLOAT_VERDICT_TOLERANCE * (1.0 + scale)
    }
}
