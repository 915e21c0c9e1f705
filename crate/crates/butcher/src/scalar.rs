//! Coefficient scalars for tree maps.
//!
//! The default scalar is the arbitrary-precision rational [`Rational`], under
//! which every formula in this crate is exact. `f64` is supported as a
//! cross-check mode for finite-difference tests, and polynomials over a
//! scalar are again scalars, which lets group operations run with
//! polynomial-valued coefficients.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

/// Exact rational coefficients, the default scalar type.
pub type Rational = BigRational;

/// Commutative ring of coefficients.
///
/// This is everything the group formulas consume: ring arithmetic, small
/// integer constants for decomposition multiplicities, and exact division by
/// a positive integer for the antiderivatives of the triangular ODE solves.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
    /// Embeds a nonnegative integer.
    fn from_count(n: u64) -> Self;

    /// Divides by a positive integer.
    fn div_nat(&self, n: u64) -> Self;
}

impl Scalar for Rational {
    fn from_count(n: u64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }

    fn div_nat(&self, n: u64) -> Self {
        self / Rational::from_integer(BigInt::from(n))
    }
}

impl Scalar for f64 {
    fn from_count(n: u64) -> Self {
        n as f64
    }

    fn div_nat(&self, n: u64) -> Self {
        self / n as f64
    }
}

/// `value * n^exp`, used by the grading dilation.
pub fn scale_pow<F: Scalar>(value: &F, base: &F, exp: usize) -> F {
    let mut out = value.clone();
    for _ in 0..exp {
        out = out * base.clone();
    }
    out
}

/// Error produced when a rational literal cannot be parsed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed rational `{token}`: {reason}")]
pub struct ParseRationalError {
    /// The offending token, verbatim.
    pub token: String,
    /// What went wrong with it.
    pub reason: String,
}

impl ParseRationalError {
    fn new(token: &str, reason: impl Into<String>) -> Self {
        ParseRationalError {
            token: token.to_string(),
            reason: reason.into(),
        }
    }
}

/// Parses a rational literal of the form `p/q` or a bare integer `p`.
///
/// The denominator must be nonzero; the result is reduced, with a positive
/// denominator.
pub fn parse_rational(token: &str) -> Result<Rational, ParseRationalError> {
    let token = token.trim();
    if token.is_empty() {
        return Err(ParseRationalError::new(token, "empty token"));
    }
    let (num_str, den_str) = match token.split_once('/') {
        Some((n, d)) => (n, d),
        None => (token, "1"),
    };
    let num: BigInt = num_str
        .parse()
        .map_err(|_| ParseRationalError::new(token, "invalid numerator"))?;
    let den: BigInt = den_str
        .parse()
        .map_err(|_| ParseRationalError::new(token, "invalid denominator"))?;
    if den.is_zero() {
        return Err(ParseRationalError::new(token, "division by zero"));
    }
    Ok(Rational::new(num, den))
}

/// Formats a rational as `p/q` with a positive denominator, reduced.
pub fn format_rational(value: &Rational) -> String {
    let (mut num, mut den) = (value.numer().clone(), value.denom().clone());
    if den.is_negative() {
        num = -num;
        den = -den;
    }
    format!("{}/{}", num, den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_reduced_and_signed() {
        assert_eq!(parse_rational("4/6").unwrap(), parse_rational("2/3").unwrap());
        assert_eq!(parse_rational("-1/2").unwrap(), -parse_rational("1/2").unwrap());
        assert_eq!(parse_rational("1/-2").unwrap(), -parse_rational("1/2").unwrap());
        assert_eq!(parse_rational("7").unwrap(), Rational::from_integer(7.into()));
    }

    #[test]
    fn parse_rejects_bad_tokens() {
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("a/b").is_err());
        assert!(parse_rational("1.5").is_err());
    }

    #[test]
    fn format_round_trips() {
        for s in ["0/1", "2/3", "-5/7", "11/1"] {
            let v = parse_rational(s).unwrap();
            assert_eq!(format_rational(&v), s);
            assert_eq!(parse_rational(&format_rational(&v)).unwrap(), v);
        }
    }

    #[test]
    fn div_nat_is_exact_division() {
        let v = parse_rational("3/4").unwrap();
        assert_eq!(v.div_nat(6), parse_rational("1/8").unwrap());
    }
}
