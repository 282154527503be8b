use num_bigint::BigInt;
use num_traits::{Pow, Zero};
use thiserror::Error;

use crate::Rational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid rational literal `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Parses a rational literal: an optional sign followed by an integer,
/// a fraction `p/q` with q > 0, or a decimal string converted exactly
/// (`0.5` becomes 1/2). No exponents, no whitespace.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let invalid = || ParseRationalError::Invalid(s.to_string());

    let (sign, body) = match s.as_bytes()[0] {
        b'+' => (1, &s[1..]),
        b'-' => (-1, &s[1..]),
        _ => (1, s),
    };
    if body.is_empty() {
        return Err(invalid());
    }

    let apply_sign = |r: Rational| if sign < 0 { -r } else { r };

    if let Some((num, den)) = body.split_once('/') {
        // Only the leading sign is allowed; both parts are plain digit runs.
        if num.is_empty()
            || den.is_empty()
            || !num.bytes().all(|b| b.is_ascii_digit())
            || !den.bytes().all(|b| b.is_ascii_digit())
        {
            return Err(invalid());
        }
        let num: BigInt = num.parse().map_err(|_| invalid())?;
        let den: BigInt = den.parse().map_err(|_| invalid())?;
        if den.is_zero() {
            return Err(ParseRationalError::ZeroDenominator(s.to_string()));
        }
        return Ok(apply_sign(Rational::new(num, den)));
    }

    if let Some((int_part, frac_part)) = body.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(invalid());
        }
        let int_part = if int_part.is_empty() { "0" } else { int_part };
        if !int_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(invalid());
        }
        let scale: BigInt = BigInt::from(10u8).pow(frac_part.len() as u32);
        let num = int_part.parse::<BigInt>().map_err(|_| invalid())? * &scale
            + frac_part.parse::<BigInt>().map_err(|_| invalid())?;
        return Ok(apply_sign(Rational::new(num, scale)));
    }

    if !body.bytes().all(|b| b.is_ascii_digit()) {
        return Err(invalid());
    }
    let num: BigInt = body.parse().map_err(|_| invalid())?;
    Ok(apply_sign(Rational::from_integer(num)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{int, rat};

    #[test]
    fn parses_integers_fractions_and_decimals() {
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(parse_rational("-7").unwrap(), int(-7));
        assert_eq!(parse_rational("+3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("-6/4").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("0.5").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-0.125").unwrap(), rat(-1, 8));
        assert_eq!(parse_rational("2.50").unwrap(), rat(5, 2));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("1/3").unwrap(), rat(1, 3));
    }

    #[test]
    fn rejects_malformed_literals() {
        for bad in ["", "x", "1/0", "1/-2", "--1", "1.2.3", "1.", "1e3", "1 / 2"] {
            assert!(parse_rational(bad).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn display_round_trips() {
        for r in [rat(1, 3), rat(-22, 7), int(0), int(-41), rat(5, 2)] {
            assert_eq!(parse_rational(&r.to_string()).unwrap(), r);
        }
    }
}
