//! The exact scalar used throughout the crate.
//!
//! [`Rational`] is an arbitrary-precision fraction stored in lowest terms
//! with a positive denominator, so structural equality is numeric equality.
//! The helpers here cover construction, parsing of `p/q` text and the
//! floor/ceiling conversions needed by the lattice code.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

/// Exact arbitrary-precision rational number.
pub type Rational = BigRational;

/// Failure to read a rational number from text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationalParseError {
    #[error("`{0}` is not a rational number of the form p or p/q")]
    Malformed(String),
    #[error("`{0}` has a zero denominator")]
    ZeroDenominator(String),
}

/// The integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// The fraction `n/d`, normalized.
///
/// # Panics
///
/// Panics if `d` is zero.
pub fn frac(n: i64, d: i64) -> Rational {
    assert!(d != 0, "zero denominator");
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p` or `p/q` (optional leading minus on `p`).
pub fn parse_rational(text: &str) -> Result<Rational, RationalParseError> {
    let trimmed = text.trim();
    let (num, den) = match trimmed.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (trimmed, "1"),
    };
    let malformed = || RationalParseError::Malformed(text.to_string());
    let num: BigInt = num.parse().map_err(|_| malformed())?;
    let den: BigInt = den.parse().map_err(|_| malformed())?;
    if den.is_zero() {
        return Err(RationalParseError::ZeroDenominator(text.to_string()));
    }
    Ok(Rational::new(num, den))
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

/// Largest integer not exceeding `value`, as `i64`.
///
/// # Panics
///
/// Panics if the result does not fit in an `i64`; lattice coordinates in
/// this crate are always far below that range.
pub fn floor_i64(value: &Rational) -> i64 {
    value
        .numer()
        .div_floor(value.denom())
        .to_i64()
        .expect("lattice coordinate exceeds i64")
}

/// Smallest integer not below `value`, as `i64`.
///
/// # Panics
///
/// Panics if the result does not fit in an `i64`.
pub fn ceil_i64(value: &Rational) -> i64 {
    value
        .numer()
        .div_ceil(value.denom())
        .to_i64()
        .expect("lattice coordinate exceeds i64")
}

/// The integer value of `value` when it is an integer fitting in `i64`.
pub fn as_i64(value: &Rational) -> Option<i64> {
    if value.is_integer() {
        value.numer().to_i64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational("-6/4").unwrap(), frac(-3, 2));
        assert_eq!(parse_rational(" 5 / 10 ").unwrap(), frac(1, 2));
    }

    #[test]
    fn rejects_bad_text() {
        assert!(matches!(
            parse_rational("1/0"),
            Err(RationalParseError::ZeroDenominator(_))
        ));
        assert!(matches!(
            parse_rational("1.5"),
            Err(RationalParseError::Malformed(_))
        ));
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn formats_canonically() {
        assert_eq!(format_rational(&frac(4, 2)), "2");
        assert_eq!(format_rational(&frac(-2, 6)), "-1/3");
    }

    #[test]
    fn floors_and_ceilings() {
        assert_eq!(floor_i64(&frac(-1, 3)), -1);
        assert_eq!(ceil_i64(&frac(-1, 3)), 0);
        assert_eq!(floor_i64(&frac(7, 2)), 3);
        assert_eq!(ceil_i64(&frac(7, 2)), 4);
        assert_eq!(floor_i64(&int(5)), 5);
        assert_eq!(as_i64(&frac(6, 3)), Some(2));
        assert_eq!(as_i64(&frac(1, 3)), None);
    }
}
