//! Best rational approximation with a bounded denominator, by continued
//! fractions. Convergents alternate sides of the target (even index below,
//! odd above); under a denominator cap the best approximation is either the
//! last admissible convergent or the intermediate fraction between the last
//! two convergents with the largest admissible denominator.

use exactcuts_rational::Rational;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Minimize |p/q - r| over q <= M; ties prefer the smaller q.
    TwoSided,
    /// Best approximation with p/q <= r.
    AtMost,
    /// Best approximation with p/q >= r.
    AtLeast,
}

/// Continued-fraction expansion data for `r`: partial quotients and the
/// convergent sequence, stopped as soon as a convergent denominator exceeds
/// `max_denom` (the overshooting convergent is kept).
#[derive(Debug, Clone)]
pub struct Expansion {
    pub quotients: Vec<BigInt>,
    /// Convergents p_i/q_i, one per quotient.
    pub convergents: Vec<(BigInt, BigInt)>,
    /// True when the expansion reached `r` exactly before overshooting.
    pub complete: bool,
}

/// Expands `r` until the convergent denominator exceeds `max_denom`, or the
/// expansion terminates. With `max_denom = None` the full expansion.
pub fn expand(r: &Rational, max_denom: Option<&BigInt>) -> Expansion {
    let mut quotients = Vec::new();
    let mut convergents: Vec<(BigInt, BigInt)> = Vec::new();
    // recurrence seeds: (p_-2, q_-2) = (0, 1), (p_-1, q_-1) = (1, 0)
    let (mut p_pp, mut q_pp) = (BigInt::zero(), BigInt::one());
    let (mut p_p, mut q_p) = (BigInt::one(), BigInt::zero());
    let mut rest = r.clone();
    loop {
        let a = rest.floor().to_integer();
        let frac = &rest - Rational::from_integer(a.clone());
        let p = &a * &p_p + &p_pp;
        let q = &a * &q_p + &q_pp;
        quotients.push(a);
        convergents.push((p.clone(), q.clone()));
        (p_pp, q_pp) = (std::mem::replace(&mut p_p, p), std::mem::replace(&mut q_p, q));
        if frac.is_zero() {
            return Expansion {
                quotients,
                convergents,
                complete: true,
            };
        }
        if let Some(m) = max_denom {
            if q_p > *m {
                return Expansion {
                    quotients,
                    convergents,
                    complete: false,
                };
            }
        }
        rest = frac.recip();
    }
}

fn ratio(p: &BigInt, q: &BigInt) -> Rational {
    Rational::new(p.clone(), q.clone())
}

/// Best one-sided approximation with denominator at most `m`, where `below`
/// selects the side p/q <= r. Assumes the expansion overshot (`!complete`).
fn one_sided(exp: &Expansion, r: &Rational, m: &BigInt, below: bool) -> Rational {
    let n = exp.convergents.len() - 1; // overshooting index: q_n > m
    let (p_last, q_last) = &exp.convergents[n - 1];
    // even-index convergents are <= r, odd-index >= r
    let last_on_side = (n - 1) % 2 == if below { 0 } else { 1 };
    if last_on_side {
        ratio(p_last, q_last)
    } else {
        // intermediate fractions of index n share n's side; take the one with
        // the largest admissible denominator. j = 0 degenerates to the
        // convergent n-2, which lies on the requested side.
        let (p_pp, q_pp) = if n >= 2 {
            exp.convergents[n - 2].clone()
        } else {
            (BigInt::one(), BigInt::zero())
        };
        let j = (m - &q_pp) / q_last;
        debug_assert!(!j.is_negative());
        ratio(&(&j * p_last + p_pp), &(&j * q_last + q_pp))
    }
}

/// Best approximation of `r` by a rational with denominator at most
/// `max_denom`, in the requested direction. Values already within the limit
/// are returned unchanged.
pub fn best_approx(r: &Rational, max_denom: u64, direction: Direction) -> Rational {
    assert!(max_denom >= 1, "denominator limit must be positive");
    let m = BigInt::from(max_denom);
    if *r.denom() <= m {
        return r.clone();
    }
    let exp = expand(r, Some(&m));
    debug_assert!(!exp.complete);
    match direction {
        Direction::AtMost => one_sided(&exp, r, &m, true),
        Direction::AtLeast => one_sided(&exp, r, &m, false),
        Direction::TwoSided => {
            let lo = one_sided(&exp, r, &m, true);
            let hi = one_sided(&exp, r, &m, false);
            let dl = (r - &lo).abs();
            let dh = (&hi - r).abs();
            match dl.cmp(&dh) {
                std::cmp::Ordering::Less => lo,
                std::cmp::Ordering::Greater => hi,
                std::cmp::Ordering::Equal => {
                    if lo.denom() <= hi.denom() {
                        lo
                    } else {
                        hi
                    }
                }
            }
        }
    }
}

/// Smallest-denominator approximation within `tolerance`, by walking
/// convergents. Used when hunting for near-integer scalings.
pub fn approx_within(r: &Rational, tolerance: &Rational) -> Rational {
    let exp = expand(r, None);
    for (p, q) in &exp.convergents {
        let cand = ratio(p, q);
        if (r - &cand).abs() <= *tolerance {
            return cand;
        }
    }
    r.clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use exactcuts_rational::{int, rat};

    /// Brute force over every denominator up to the cap.
    fn brute(r: &Rational, m: u64, direction: Direction) -> Rational {
        let mut best: Option<Rational> = None;
        for q in 1..=m {
            let scaled = r * Rational::from_integer(q.into());
            let candidates = [scaled.floor().to_integer(), scaled.ceil().to_integer()];
            for p in candidates {
                let cand = Rational::new(p, q.into());
                let ok = match direction {
                    Direction::TwoSided => true,
                    Direction::AtMost => cand <= *r,
                    Direction::AtLeast => cand >= *r,
                };
                if !ok {
                    continue;
                }
                let better = match &best {
                    None => true,
                    Some(b) => {
                        let (db, dc) = ((r - b).abs(), (r - &cand).abs());
                        dc < db || (dc == db && cand.denom() < b.denom())
                    }
                };
                if better {
                    best = Some(cand);
                }
            }
        }
        best.unwrap()
    }

    #[test]
    fn worked_examples() {
        let r = rat(13, 11);
        assert_eq!(best_approx(&r, 4, Direction::TwoSided), rat(5, 4));
        assert_eq!(best_approx(&r, 4, Direction::AtMost), int(1));
        assert_eq!(best_approx(&rat(3, 7), 100, Direction::TwoSided), rat(3, 7));
        assert_eq!(best_approx(&int(9), 1, Direction::TwoSided), int(9));
        assert_eq!(best_approx(&int(-4), 7, Direction::AtLeast), int(-4));
    }

    #[test]
    fn matches_brute_force_on_a_grid() {
        for n in -40i64..=40 {
            for d in 1i64..=17 {
                let r = rat(n, d);
                for m in [1u64, 2, 3, 5, 8, 13] {
                    for dir in [Direction::TwoSided, Direction::AtMost, Direction::AtLeast] {
                        assert_eq!(
                            best_approx(&r, m, dir),
                            brute(&r, m, dir),
                            "r={r} m={m} dir={dir:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn one_sided_results_sit_on_the_requested_side() {
        for n in [-123i64, -17, 5, 89, 211] {
            for d in [7i64, 64, 97] {
                let r = rat(n, d);
                for m in [1u64, 3, 10] {
                    assert!(best_approx(&r, m, Direction::AtMost) <= r);
                    assert!(best_approx(&r, m, Direction::AtLeast) >= r);
                }
            }
        }
    }

    #[test]
    fn intermediate_fraction_threshold() {
        // For each consecutive convergent pair, fractions with
        // j >= floor(a_{i+1}/2) + 1 are strictly better than the previous
        // convergent on that side, and the one just below the threshold is
        // not. Checked directly on a handful of expansions.
        for r in [rat(415, 93), rat(649, 200), rat(1393, 972), rat(-415, 93)] {
            let exp = expand(&r, None);
            for i in 1..exp.convergents.len().saturating_sub(1) {
                let a_next = &exp.quotients[i + 1];
                let (p_i, q_i) = &exp.convergents[i];
                let (p_prev, q_prev) = &exp.convergents[i - 1];
                let conv_err = (&r - ratio(p_i, q_i)).abs();
                let half: BigInt = a_next / 2;
                let threshold = &half + 1;
                let mk = |j: &BigInt| {
                    ratio(&(j * p_i + p_prev), &(j * q_i + q_prev))
                };
                if threshold <= *a_next {
                    let good = (&r - mk(&threshold)).abs();
                    assert!(good < conv_err, "j at threshold must beat convergent {i} for {r}");
                }
                if !half.is_zero() {
                    let bad = (&r - mk(&half)).abs();
                    assert!(bad >= conv_err, "j below threshold must not beat convergent {i} for {r}");
                }
            }
        }
    }

    #[test]
    fn approx_within_finds_small_denominators() {
        let noisy = rat(333333, 1000000); // close to 1/3
        assert_eq!(approx_within(&noisy, &rat(1, 100000)), rat(1, 3));
        assert_eq!(approx_within(&rat(1, 3), &rat(1, 1000000)), rat(1, 3));
    }
}
