use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n/d`; panics on a zero denominator.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn invalid(text: &str, reason: &str) -> Error {
    Error::InvalidRational {
        text: text.to_string(),
        reason: reason.to_string(),
    }
}

fn parse_digits(text: &str, digits: &str) -> Result<BigInt> {
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(invalid(text, "expected decimal digits"));
    }
    digits
        .parse::<BigInt>()
        .map_err(|_| invalid(text, "expected decimal digits"))
}

/// Parses `[+-]int`, `[+-]p/q`, or a finite decimal `[+-]int.frac`.
///
/// Decimals are converted exactly (`"0.25"` is `1/4`). Exponents, `NaN`, and
/// infinities are rejected.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let (negative, body) = match s.as_bytes().first() {
        Some(b'-') => (true, &s[1..]),
        Some(b'+') => (false, &s[1..]),
        Some(_) => (false, s),
        None => return Err(invalid(text, "empty")),
    };
    let value = if let Some((p, q)) = body.split_once('/') {
        let numer = parse_digits(text, p)?;
        let denom = parse_digits(text, q)?;
        if denom.is_zero() {
            return Err(invalid(text, "zero denominator"));
        }
        Rational::new(numer, denom)
    } else if let Some((whole, frac)) = body.split_once('.') {
        if whole.is_empty() && frac.is_empty() {
            return Err(invalid(text, "expected digits"));
        }
        let whole = if whole.is_empty() {
            BigInt::zero()
        } else {
            parse_digits(text, whole)?
        };
        let frac_value = if frac.is_empty() {
            BigInt::zero()
        } else {
            parse_digits(text, frac)?
        };
        let denom = num_traits::pow(BigInt::from(10), frac.len());
        Rational::new(whole * &denom + frac_value, denom)
    } else {
        Rational::from_integer(parse_digits(text, body)?)
    };
    Ok(if negative { -value } else { value })
}

/// Canonical text form: `p/q`, or just `p` when the denominator is one.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses a comma-separated list of rationals, e.g. `"-1/2,2"`.
pub fn parse_point(text: &str) -> Result<Vec<Rational>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(parse_rational).collect()
}
