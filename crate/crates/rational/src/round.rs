use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::Rational;

const MANTISSA_BITS: u64 = 52;
const MIN_NORMAL_EXP: i64 = -1022;
const MAX_EXP: i64 = 1023;
const SUBNORMAL_SCALE: i64 = -1074;

/// Converts a finite double to the rational it represents, exactly.
pub fn f64_to_rational(x: f64) -> Rational {
    assert!(x.is_finite(), "non-finite value has no rational form: {x}");
    Rational::from_float(x).expect("finite doubles convert exactly")
}

/// Smallest double `>= x`, or `+inf` when `x` exceeds the largest finite double.
/// Values already representable are returned unchanged.
pub fn round_up(x: &Rational) -> f64 {
    round_directed(x, true)
}

/// Largest double `<= x`, or `-inf` when `x` is below the most negative finite
/// double. Values already representable are returned unchanged.
pub fn round_down(x: &Rational) -> f64 {
    round_directed(x, false)
}

/// Nearest double, ties to even mantissa. Saturates to the finite range.
pub fn round_nearest(x: &Rational) -> f64 {
    let lo = round_down(x);
    let hi = round_up(x);
    if lo == hi {
        return lo;
    }
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    if hi == f64::INFINITY {
        return lo;
    }
    let below = x - f64_to_rational(lo);
    let above = f64_to_rational(hi) - x;
    match below.cmp(&above) {
        std::cmp::Ordering::Less => lo,
        std::cmp::Ordering::Greater => hi,
        std::cmp::Ordering::Equal => {
            if lo.to_bits() & 1 == 0 {
                lo
            } else {
                hi
            }
        }
    }
}

fn max_finite_rational() -> Rational {
    // (2^53 - 1) * 2^971
    let m = (BigInt::from(1) << 53u32) - 1;
    Rational::from_integer(m << 971u32)
}

fn round_directed(x: &Rational, up: bool) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    if x.is_negative() {
        return -round_directed(&-x.clone(), !up);
    }
    if *x > max_finite_rational() {
        return if up { f64::INFINITY } else { f64::MAX };
    }

    let p = x.numer().magnitude();
    let q = x.denom().magnitude();

    // exponent e with 2^e <= x < 2^(e+1)
    let mut e = p.bits() as i64 - q.bits() as i64;
    if !ge_pow2(p, q, e) {
        e -= 1;
    }
    debug_assert!(ge_pow2(p, q, e) && !ge_pow2(p, q, e + 1));

    let scale = if e < MIN_NORMAL_EXP {
        SUBNORMAL_SCALE
    } else {
        e - MANTISSA_BITS as i64
    };

    // mantissa = floor(x / 2^scale)
    let (m, rem) = if scale <= 0 {
        (p << (-scale) as u64).div_rem(q)
    } else {
        p.div_rem(&(q.clone() << scale as u64))
    };
    let exact = rem.is_zero();
    let m = m.to_u64().expect("mantissa fits 54 bits");

    if m == 0 {
        // positive but below the smallest subnormal
        debug_assert!(!exact && scale == SUBNORMAL_SCALE);
        return if up { compose(1, scale) } else { 0.0 };
    }
    if exact || !up {
        compose(m, scale)
    } else {
        compose(m + 1, scale)
    }
}

/// True iff p/q >= 2^e.
fn ge_pow2(p: &BigUint, q: &BigUint, e: i64) -> bool {
    if e >= 0 {
        *p >= (q.clone() << e as u64)
    } else {
        (p.clone() << (-e) as u64) >= *q
    }
}

/// Builds `m * 2^scale` as a double. `m <= 2^53`; the value is required to be
/// representable or beyond the finite range (then +inf).
fn compose(mut m: u64, mut scale: i64) -> f64 {
    debug_assert!(m > 0 && m <= (1 << 53));
    if m == 1 << 53 {
        m >>= 1;
        scale += 1;
    }
    if m >= 1 << MANTISSA_BITS {
        let e = scale + MANTISSA_BITS as i64;
        if e > MAX_EXP {
            return f64::INFINITY;
        }
        debug_assert!(e >= MIN_NORMAL_EXP);
        let bits = (((e + MAX_EXP) as u64) << MANTISSA_BITS) | (m - (1 << MANTISSA_BITS));
        f64::from_bits(bits)
    } else {
        debug_assert_eq!(scale, SUBNORMAL_SCALE);
        // Exponent field 0; m == 2^52 would spill into the exponent bit and
        // produce exactly the smallest normal, which is the right value.
        f64::from_bits(m)
    }
}

fn check_operand(x: f64) {
    assert!(!x.is_nan(), "NaN is not a legal directed-rounding operand");
}

fn add_exact(a: f64, b: f64) -> Result<Rational, f64> {
    check_operand(a);
    check_operand(b);
    if a.is_infinite() || b.is_infinite() {
        assert!(
            !(a.is_infinite() && b.is_infinite() && a.signum() != b.signum()),
            "indeterminate form inf - inf in directed addition"
        );
        return Err(if a.is_infinite() { a } else { b });
    }
    Ok(f64_to_rational(a) + f64_to_rational(b))
}

fn mul_exact(a: f64, b: f64) -> Result<Rational, f64> {
    check_operand(a);
    check_operand(b);
    if a.is_infinite() || b.is_infinite() {
        assert!(
            !(a == 0.0 || b == 0.0),
            "indeterminate form 0 * inf in directed multiplication"
        );
        let sign = a.signum() * b.signum();
        return Err(sign * f64::INFINITY);
    }
    Ok(f64_to_rational(a) * f64_to_rational(b))
}

/// `round_up` of the exact sum. Panics on `inf - inf`.
pub fn safe_add_up(a: f64, b: f64) -> f64 {
    match add_exact(a, b) {
        Ok(r) => round_up(&r),
        Err(inf) => inf,
    }
}

/// `round_down` of the exact sum. Panics on `inf - inf`.
pub fn safe_add_down(a: f64, b: f64) -> f64 {
    match add_exact(a, b) {
        Ok(r) => round_down(&r),
        Err(inf) => inf,
    }
}

/// `round_up` of the exact product. Panics on `0 * inf`.
pub fn safe_mul_up(a: f64, b: f64) -> f64 {
    match mul_exact(a, b) {
        Ok(r) => round_up(&r),
        Err(inf) => inf,
    }
}

/// `round_down` of the exact product. Panics on `0 * inf`.
pub fn safe_mul_down(a: f64, b: f64) -> f64 {
    match mul_exact(a, b) {
        Ok(r) => round_down(&r),
        Err(inf) => inf,
    }
}

/// Right-to-left pairwise sum, rounding up after each addition.
/// The empty sum is 0. The caller fixes the term order.
pub fn safe_sum_up(terms: &[f64]) -> f64 {
    terms.iter().rev().fold(0.0, |acc, &t| safe_add_up(t, acc))
}

/// Right-to-left pairwise sum, rounding down after each addition.
pub fn safe_sum_down(terms: &[f64]) -> f64 {
    terms.iter().rev().fold(0.0, |acc, &t| safe_add_down(t, acc))
}
