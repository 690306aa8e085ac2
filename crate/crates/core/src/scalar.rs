//! Exact scalars: arbitrary-precision rationals extended by `-inf` and `+inf`.
//!
//! [`ExtScalar`] carries both max-plus (`⊕ = max`, `⊗ = +`, neutral `-inf`)
//! and min-plus (`⊕′ = min`, `⊗′ = +`, neutral `+inf`) arithmetic. The sum
//! `-inf + +inf` is never evaluated silently: [`ExtScalar::checked_mul`]
//! reports it and the infallible helpers panic on it.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Shorthand for an integer-valued [`Rational`].
pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Shorthand for `num / den`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Largest integer multiple of `1/den` that is `<= v`.
pub fn floor_to(v: &Rational, den: u64) -> Rational {
    let d = BigInt::from(den);
    let scaled = (v * Rational::from_integer(d.clone())).floor();
    scaled / Rational::from_integer(d)
}

/// Smallest integer multiple of `1/den` that is `>= v`.
pub fn ceil_to(v: &Rational, den: u64) -> Rational {
    let d = BigInt::from(den);
    let scaled = (v * Rational::from_integer(d.clone())).ceil();
    scaled / Rational::from_integer(d)
}

/// Formats a rational as `"num/den"`, or as a bare integer when the denominator is 1.
pub fn format_rational(v: &Rational) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Parses `"7"`, `"-3/4"` (reduced on the fly). Zero denominators are rejected.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::BadRational(s.to_string());
    match s.split_once('/') {
        None => BigInt::from_str(s).map(Rational::from_integer).map_err(|_| bad()),
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
    }
}

/// Least common multiple of the denominators of `values`.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Element of `ℝ ∪ {-inf, +inf}` over exact rationals.
///
/// The derived order is the natural one: `NegInf < Finite(_) < PosInf`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtScalar {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl ExtScalar {
    /// Multiplicative unit of both semirings.
    pub fn zero() -> Self {
        ExtScalar::Finite(Rational::zero())
    }

    pub fn int(v: i64) -> Self {
        ExtScalar::Finite(int(v))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        ExtScalar::Finite(ratio(num, den))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtScalar::Finite(_))
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtScalar::Finite(v) => Some(v),
            _ => None,
        }
    }

    /// Conjugate `a⁻`: negation with the two infinities swapped.
    pub fn conj(&self) -> Self {
        match self {
            ExtScalar::NegInf => ExtScalar::PosInf,
            ExtScalar::PosInf => ExtScalar::NegInf,
            ExtScalar::Finite(v) => ExtScalar::Finite(-v),
        }
    }

    /// Max-plus sum `a ⊕ b = max(a, b)`.
    pub fn sup(&self, other: &Self) -> Self {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    /// Min-plus sum `a ⊕′ b = min(a, b)`.
    pub fn inf(&self, other: &Self) -> Self {
        if self <= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    /// `a ⊗ b = a + b`; fails on `-inf + +inf`.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        use ExtScalar::*;
        match (self, other) {
            (NegInf, PosInf) | (PosInf, NegInf) => Err(Error::UndefinedInfinitySum),
            (NegInf, _) | (_, NegInf) => Ok(NegInf),
            (PosInf, _) | (_, PosInf) => Ok(PosInf),
            (Finite(a), Finite(b)) => Ok(Finite(a + b)),
        }
    }

    /// Infallible `⊗`; panics on `-inf + +inf`, which typed matrices never produce.
    pub fn mul(&self, other: &Self) -> Self {
        self.checked_mul(other)
            .expect("-inf + +inf is undefined; matrix typing should prevent it")
    }

    /// Adds a finite rational.
    pub fn shift(&self, by: &Rational) -> Self {
        match self {
            ExtScalar::Finite(v) => ExtScalar::Finite(v + by),
            other => other.clone(),
        }
    }

    /// `t^{⊗1/2}`, i.e. `t / 2`.
    pub fn half(&self) -> Self {
        match self {
            ExtScalar::Finite(v) => ExtScalar::Finite(v / int(2)),
            other => other.clone(),
        }
    }

    /// Largest absolute finite value, as used for magnitude bounds.
    pub fn abs_finite(&self) -> Option<Rational> {
        self.finite().map(|v| v.abs())
    }

    /// Whether the value is an integer or infinite.
    pub fn is_integral(&self) -> bool {
        self.finite().is_none_or(|v| v.is_integer())
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExtScalar::NegInf => f64::NEG_INFINITY,
            ExtScalar::PosInf => f64::INFINITY,
            ExtScalar::Finite(v) => v.to_f64().unwrap_or(f64::NAN),
        }
    }
}

impl From<Rational> for ExtScalar {
    fn from(v: Rational) -> Self {
        ExtScalar::Finite(v)
    }
}

impl From<i64> for ExtScalar {
    fn from(v: i64) -> Self {
        ExtScalar::int(v)
    }
}

impl fmt::Display for ExtScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtScalar::NegInf => f.write_str("-inf"),
            ExtScalar::PosInf => f.write_str("+inf"),
            ExtScalar::Finite(v) => f.write_str(&format_rational(v)),
        }
    }
}

impl FromStr for ExtScalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "-inf" => Ok(ExtScalar::NegInf),
            "+inf" | "inf" => Ok(ExtScalar::PosInf),
            other => parse_rational(other).map(ExtScalar::Finite),
        }
    }
}
