//! Exact rational scalars and bit-exact directed rounding to binary64.
//!
//! Every number that matters is a [`Rational`]; doubles only ever appear as
//! one-sided approximations obtained through [`round_up`] / [`round_down`].
//! The directed operations ([`safe_add_up`], [`safe_sum_down`], ...) compute
//! the exact rational result and round once, which is bit-identical to
//! correctly-rounded hardware arithmetic under a directed rounding mode but
//! needs no global floating-point state.

mod parse;
mod round;

pub use parse::{parse_rational, ParseRationalError};
pub use round::{
    f64_to_rational, round_down, round_nearest, round_up, safe_add_down, safe_add_up,
    safe_mul_down, safe_mul_up, safe_sum_down, safe_sum_up,
};

/// The universal exact scalar. Always canonical: gcd(num, den) = 1, den > 0.
pub type Rational = num_rational::BigRational;

/// Shorthand for a small integer rational.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Shorthand for an integer as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}
