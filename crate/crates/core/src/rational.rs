//! Exact rational helpers shared by every module.
//!
//! All quantities in this crate (interval endpoints, spectrum residues,
//! root-of-unity exponents) are arbitrary-precision rationals. Exponents of
//! roots of unity are always kept reduced into `[0, 1)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// Parse error for the `p/q` text form.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed rational `{0}`")]
pub struct RationalParseError(pub String);

/// Parses `"p"` or `"p/q"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational, RationalParseError> {
    let text = text.trim();
    let bad = || RationalParseError(text.to_string());
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (text, None),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = match den {
        Some(d) => d.parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Formats a rational as `p` or `p/q` (reduced, denominator positive).
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Representative of `x` modulo 1 lying in `[0, 1)`.
pub fn mod_one(x: &Rational) -> Rational {
    let f = x - x.floor();
    debug_assert!(!f.is_negative() && f < Rational::one());
    f
}

/// Denominator of a reduced rational as `u64`.
///
/// Panics if the denominator exceeds `u64`; field orders of that size are
/// far outside anything this engine can process anyway.
pub fn denominator_u64(x: &Rational) -> u64 {
    x.denom()
        .to_u64()
        .expect("rational denominator exceeds u64; cyclotomic order out of range")
}

/// Returns `Some(n)` when `x` is an integer that fits in `i64`.
pub fn as_integer(x: &Rational) -> Option<i64> {
    if x.denom().is_one() {
        x.numer().to_i64()
    } else {
        None
    }
}

pub fn rational_from_u64(n: u64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// lcm of two positive integers.
pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_both_forms() {
        assert_eq!(parse_rational("3/4").unwrap(), ratio(3, 4));
        assert_eq!(parse_rational("5").unwrap(), ratio(5, 1));
        assert_eq!(parse_rational("-7/2").unwrap(), ratio(-7, 2));
        assert_eq!(parse_rational(" 1/3 ").unwrap(), ratio(1, 3));
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("a/b").is_err());
        assert!(parse_rational("1/2/3").is_err());
    }

    #[test]
    fn mod_one_lands_in_unit_interval() {
        assert_eq!(mod_one(&ratio(7, 4)), ratio(3, 4));
        assert_eq!(mod_one(&ratio(-1, 4)), ratio(3, 4));
        assert_eq!(mod_one(&ratio(2, 1)), ratio(0, 1));
    }

    #[test]
    fn formats_reduced() {
        assert_eq!(format_rational(&ratio(2, 4)), "1/2");
        assert_eq!(format_rational(&ratio(8, 2)), "4");
    }
}
