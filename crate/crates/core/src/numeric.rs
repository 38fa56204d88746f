//! Rates and probabilities.
//!
//! Probabilities are kept as exact decimal fractions so that complementing
//! (`1 - r`) and multiplying them never drifts. Every value that can be built
//! through this API has a terminating decimal expansion, which is what the
//! printer emits.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::Mul;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Time parameter of an action: a strictly positive real or the passive `inf`.
#[derive(Debug, Clone, Copy)]
pub enum Rate {
    Finite(f64),
    Infinite,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumericError {
    #[error("rate must be a finite number greater than 0, got {0}")]
    InvalidRate(String),
    #[error("probability must lie in [0,1], got {0}")]
    InvalidProbability(String),
    #[error("malformed number `{0}`")]
    Malformed(String),
}

impl Rate {
    pub fn finite(value: f64) -> Result<Self, NumericError> {
        if value.is_finite() && value > 0.0 {
            Ok(Rate::Finite(value))
        } else {
            Err(NumericError::InvalidRate(value.to_string()))
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Rate::Infinite)
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            Rate::Finite(v) => Some(*v),
            Rate::Infinite => None,
        }
    }
}

impl PartialEq for Rate {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Rate::Finite(a), Rate::Finite(b)) => a.to_bits() == b.to_bits(),
            (Rate::Infinite, Rate::Infinite) => true,
            _ => false,
        }
    }
}

impl Eq for Rate {}

impl Hash for Rate {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Rate::Finite(v) => {
                0u8.hash(state);
                v.to_bits().hash(state);
            }
            Rate::Infinite => 1u8.hash(state),
        }
    }
}

impl PartialOrd for Rate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `Infinite` is the top element; finite values compare numerically.
impl Ord for Rate {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Rate::Finite(a), Rate::Finite(b)) => a.total_cmp(b),
            (Rate::Finite(_), Rate::Infinite) => Ordering::Less,
            (Rate::Infinite, Rate::Finite(_)) => Ordering::Greater,
            (Rate::Infinite, Rate::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            // `{}` on f64 is the shortest representation that round-trips.
            Rate::Finite(v) => write!(f, "{}", v),
            Rate::Infinite => f.write_str("inf"),
        }
    }
}

/// A probability in `[0,1]`, stored exactly.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Probability(BigRational);

impl Probability {
    pub fn zero() -> Self {
        Probability(BigRational::zero())
    }

    pub fn one() -> Self {
        Probability(BigRational::one())
    }

    /// Parses a non-negative decimal literal (`0.25`, `1`, `2.5e-1`).
    pub fn parse(text: &str) -> Result<Self, NumericError> {
        let value = parse_decimal(text).ok_or_else(|| NumericError::Malformed(text.to_string()))?;
        Self::from_ratio(value).map_err(|_| NumericError::InvalidProbability(text.to_string()))
    }

    /// Converts through the shortest decimal spelling of `value`, so
    /// `from_f64(0.1)` is exactly one tenth.
    pub fn from_f64(value: f64) -> Result<Self, NumericError> {
        if !value.is_finite() {
            return Err(NumericError::InvalidProbability(value.to_string()));
        }
        let text = format!("{}", value);
        let ratio = parse_decimal(text.trim_start_matches('-'))
            .ok_or_else(|| NumericError::Malformed(text.clone()))?;
        let ratio = if value < 0.0 { -ratio } else { ratio };
        Self::from_ratio(ratio).map_err(|_| NumericError::InvalidProbability(text))
    }

    fn from_ratio(value: BigRational) -> Result<Self, BigRational> {
        if value.is_negative() || value > BigRational::one() {
            Err(value)
        } else {
            Ok(Probability(value))
        }
    }

    /// `1 - self`.
    pub fn complement(&self) -> Self {
        Probability(BigRational::one() - &self.0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Sum of two probabilities. Returns `None` if the result exceeds 1.
    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        Self::from_ratio(&self.0 + &other.0).ok()
    }
}

impl Mul for &Probability {
    type Output = Probability;

    fn mul(self, rhs: &Probability) -> Probability {
        Probability(&self.0 * &rhs.0)
    }
}

impl PartialOrd for Probability {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Probability {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&decimal_string(&self.0))
    }
}

fn parse_decimal(text: &str) -> Option<BigRational> {
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(i) => (&text[..i], text[i + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if int_part.is_empty() || !int_part.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    if !frac_part.bytes().all(|b| b.is_ascii_digit()) || (mantissa.contains('.') && frac_part.is_empty()) {
        return None;
    }
    let digits: BigInt = format!("{}{}", int_part, frac_part).parse().ok()?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let value = if scale >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    Some(value)
}

/// Exact decimal expansion. Only called on values whose reduced denominator
/// is of the form 2^a * 5^b, so the expansion terminates.
fn decimal_string(value: &BigRational) -> String {
    let mut denom = value.denom().clone();
    let two = BigInt::from(2u32);
    let five = BigInt::from(5u32);
    let (mut twos, mut fives) = (0usize, 0usize);
    while (&denom % &two).is_zero() {
        denom /= &two;
        twos += 1;
    }
    while (&denom % &five).is_zero() {
        denom /= &five;
        fives += 1;
    }
    if !denom.is_one() {
        // Not reachable through the public constructors.
        return value.to_f64().map(|v| v.to_string()).unwrap_or_default();
    }
    let digits = twos.max(fives);
    let scaled = value.numer() * num_traits::pow(BigInt::from(10u32), digits) / value.denom();
    let mut text = scaled.abs().to_string();
    if digits > 0 {
        if text.len() <= digits {
            text = format!("{}{}", "0".repeat(digits + 1 - text.len()), text);
        }
        text.insert(text.len() - digits, '.');
        let trimmed = text.trim_end_matches('0').trim_end_matches('.');
        text = trimmed.to_string();
    }
    if value.is_negative() {
        text.insert(0, '-');
    }
    text
}
