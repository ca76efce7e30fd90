//! Arbitrary-precision rational scalars.
//!
//! Coefficients throughout the crate are [`BigRational`] values: always
//! reduced, denominator positive. Construction and normalization are
//! delegated to `num-rational`; this module adds the small parsing and
//! formatting surface the rest of the crate needs.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Error produced when a string is not a valid rational literal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalParseError(pub String);

impl fmt::Display for RationalParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid rational literal: {}", self.0)
    }
}

impl std::error::Error for RationalParseError {}

/// Rational from an integer.
pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Rational `p/q`. Panics if `q == 0`.
pub fn ratio(p: i64, q: i64) -> BigRational {
    assert!(q != 0, "zero denominator");
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `p` or `p/q` with an optional leading sign. Rejects zero
/// denominators.
pub fn parse_rational(text: &str) -> Result<BigRational, RationalParseError> {
    let s = text.trim();
    let err = || RationalParseError(text.to_string());
    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let num: BigInt = num_str.parse().map_err(|_| err())?;
    let den: BigInt = match den_str {
        Some(d) => d.parse().map_err(|_| err())?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(err());
    }
    Ok(BigRational::new(num, den))
}

/// Renders a rational as `p` or `p/q` (reduced, sign on the numerator).
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `r^k` for a signed exponent; `r` must be nonzero when `k < 0`.
pub fn pow_signed(r: &BigRational, k: i64) -> BigRational {
    if k >= 0 {
        pow_unsigned(r, k as u64)
    } else {
        assert!(!r.is_zero(), "negative power of zero");
        pow_unsigned(&r.recip(), (-k) as u64)
    }
}

fn pow_unsigned(r: &BigRational, mut k: u64) -> BigRational {
    let mut base = r.clone();
    let mut acc = BigRational::one();
    while k > 0 {
        if k & 1 == 1 {
            acc *= &base;
        }
        k >>= 1;
        if k > 0 {
            base = &base * &base;
        }
    }
    acc
}

/// True iff `r` is a (positive or negative) integer.
pub fn is_integer(r: &BigRational) -> bool {
    r.denom().is_one()
}

/// Absolute value.
pub fn abs(r: &BigRational) -> BigRational {
    if r.is_negative() {
        -r.clone()
    } else {
        r.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!(parse_rational("5").unwrap(), int(5));
        assert_eq!(parse_rational("-5").unwrap(), int(-5));
        assert_eq!(parse_rational("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("-3/2").unwrap(), ratio(-3, 2));
        assert_eq!(parse_rational(" 7 / 3 ").unwrap(), ratio(7, 3));
    }

    #[test]
    fn rejects_malformed_literals() {
        assert!(parse_rational("").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1/2/3").is_err());
    }

    #[test]
    fn formatting_round_trips() {
        for r in [int(0), int(-7), ratio(22, 7), ratio(-1, 2)] {
            assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
        }
    }

    #[test]
    fn signed_powers() {
        assert_eq!(pow_signed(&int(2), 10), int(1024));
        assert_eq!(pow_signed(&int(2), -2), ratio(1, 4));
        assert_eq!(pow_signed(&ratio(-2, 3), 3), ratio(-8, 27));
        assert_eq!(pow_signed(&int(5), 0), int(1));
    }
}
