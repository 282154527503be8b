use std::collections::BTreeSet;

use exactcuts_rational::Rational;
use num_traits::{Signed, Zero};

use crate::format::{Certificate, Constraint, Rtp, Rule, Sense, SparseVec};

/// Outcome of checking a certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Accepted,
    Rejected {
        /// Global constraint index the failure was detected at, when one exists.
        index: Option<usize>,
        reason: String,
    },
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::Accepted)
    }
}

/// Details accumulated during a check, for reporting.
#[derive(Debug, Default)]
pub struct CheckReport {
    pub derivations_checked: usize,
    pub solutions_checked: usize,
}

macro_rules! reject {
    ($idx:expr, $($arg:tt)*) => {
        return Verdict::Rejected { index: $idx, reason: format!($($arg)*) }
    };
}

/// Exact aggregation of earlier constraints oriented toward `target` sense.
/// Returns the aggregated coefficients and right-hand side, or an error string
/// when a multiplier sign is incompatible with its referenced sense.
fn aggregate(
    cert: &Certificate,
    refs: &[(usize, Rational)],
    target: Sense,
) -> Result<(SparseVec, Rational), String> {
    let mut coeffs = SparseVec::new();
    let mut rhs = Rational::zero();
    for (idx, mult) in refs {
        if mult.is_zero() {
            continue;
        }
        let c = cert
            .constraint(*idx)
            .ok_or_else(|| format!("reference {idx} out of range"))?;
        let ok = match (c.sense, target) {
            (Sense::Eq, _) => true,
            (Sense::Le, Sense::Le) | (Sense::Ge, Sense::Ge) => mult.is_positive(),
            (Sense::Le, Sense::Ge) | (Sense::Ge, Sense::Le) => mult.is_negative(),
            (_, Sense::Eq) => false,
        };
        if !ok {
            return Err(format!(
                "multiplier {mult} on {} constraint {idx} cannot derive a {target} constraint",
                c.sense
            ));
        }
        coeffs.add_scaled(&c.coeffs, mult);
        rhs += mult * &c.rhs;
    }
    Ok((coeffs, rhs))
}

/// True when an aggregation oriented as `sense` is unsatisfiable on its own
/// (e.g. `0 >= 1`). Such an aggregation dominates every stated constraint.
fn aggregation_absurd(coeffs: &SparseVec, rhs: &Rational, sense: Sense) -> bool {
    coeffs.is_empty()
        && match sense {
            Sense::Le => rhs.is_negative(),
            Sense::Ge => rhs.is_positive(),
            Sense::Eq => !rhs.is_zero(),
        }
}

fn rhs_dominates(agg_rhs: &Rational, stated: &Rational, sense: Sense) -> bool {
    match sense {
        Sense::Le => agg_rhs <= stated,
        Sense::Ge => agg_rhs >= stated,
        Sense::Eq => agg_rhs == stated,
    }
}

fn same_constraint(a: &Constraint, b: &Constraint) -> bool {
    a.sense == b.sense && a.rhs == b.rhs && a.coeffs == b.coeffs
}

fn solution_satisfies(c: &Constraint, values: &SparseVec) -> bool {
    let mut lhs = Rational::zero();
    for (i, coef) in c.coeffs.iter() {
        if let Some(v) = values.get(*i) {
            lhs += coef * v;
        }
    }
    match c.sense {
        Sense::Le => lhs <= c.rhs,
        Sense::Ge => lhs >= c.rhs,
        Sense::Eq => lhs == c.rhs,
    }
}

/// Verifies a certificate in one forward pass using exact arithmetic.
/// Certificates containing `weak` derivations are rejected; complete them
/// first.
pub fn check(cert: &Certificate) -> Verdict {
    let ncons = cert.constraints.len();

    // Solution section: exact feasibility and objective consistency.
    for sol in &cert.solutions {
        for (i, v) in sol.values.iter() {
            if cert.integer_vars.contains(i) && !v.is_integer() {
                reject!(
                    None,
                    "solution {}: variable {} must be integral, got {v}",
                    sol.name,
                    cert.var_names[*i]
                );
            }
        }
        for (ci, c) in cert.constraints.iter().enumerate() {
            if !solution_satisfies(c, &sol.values) {
                reject!(
                    Some(ci),
                    "solution {} violates constraint {}",
                    sol.name,
                    c.name
                );
            }
        }
        let obj = cert.objective.iter().fold(Rational::zero(), |acc, (i, c)| {
            acc + c * sol.values.get(*i).cloned().unwrap_or_else(Rational::zero)
        });
        if obj != sol.objective {
            reject!(
                None,
                "solution {} claims objective {}, computed {obj}",
                sol.name,
                sol.objective
            );
        }
    }
    match &cert.rtp {
        Rtp::Infeasible => {
            if !cert.solutions.is_empty() {
                reject!(None, "infeasibility certificate lists a solution");
            }
        }
        Rtp::Range { upper, .. } => {
            if !cert.solutions.iter().any(|s| s.objective <= *upper) {
                reject!(
                    None,
                    "no solution witnesses the claimed upper bound {upper}"
                );
            }
        }
    }

    // Forward pass over derivations, tracking active assumptions.
    let mut assumptions: Vec<BTreeSet<usize>> = Vec::with_capacity(cert.derivations.len());
    for (k, der) in cert.derivations.iter().enumerate() {
        let idx = ncons + k;
        let stated = &der.constraint;
        let asms = match &der.rule {
            Rule::Asm => BTreeSet::from([idx]),
            Rule::Lin(refs) | Rule::Rnd(refs) => {
                if stated.sense == Sense::Eq {
                    reject!(Some(idx), "derived equality constraints are not supported");
                }
                let (coeffs, rhs) = match aggregate(cert, refs, stated.sense) {
                    Ok(x) => x,
                    Err(e) => reject!(Some(idx), "{e}"),
                };
                let is_rnd = matches!(der.rule, Rule::Rnd(_));
                if is_rnd {
                    for (i, c) in coeffs.iter() {
                        if !c.is_integer() {
                            reject!(Some(idx), "rounding requires integer coefficients, got {c}");
                        }
                        if !cert.integer_vars.contains(i) {
                            reject!(
                                Some(idx),
                                "rounding requires integer variables, {} is continuous",
                                cert.var_names[*i]
                            );
                        }
                    }
                    let rounded = match stated.sense {
                        Sense::Le => rhs.floor(),
                        Sense::Ge => rhs.ceil(),
                        Sense::Eq => unreachable!(),
                    };
                    if stated.coeffs != coeffs || stated.rhs != rounded {
                        reject!(Some(idx), "rounded conclusion mismatch");
                    }
                } else {
                    let absurd = aggregation_absurd(&coeffs, &rhs, stated.sense);
                    let dominates = stated.coeffs == coeffs
                        && rhs_dominates(&rhs, &stated.rhs, stated.sense);
                    if !absurd && !dominates {
                        reject!(
                            Some(idx),
                            "aggregation does not dominate the stated constraint"
                        );
                    }
                }
                let mut set = BTreeSet::new();
                for (r, m) in refs {
                    if m.is_zero() {
                        continue;
                    }
                    if *r >= ncons {
                        set.extend(assumptions[*r - ncons].iter().copied());
                    }
                }
                set
            }
            Rule::Uns { i1, a1, i2, a2 } => {
                let asm1 = match cert.derivations.get(a1.wrapping_sub(ncons)) {
                    Some(d) if *a1 >= ncons && matches!(d.rule, Rule::Asm) => &d.constraint,
                    _ => reject!(Some(idx), "uns reference {a1} is not an assumption"),
                };
                let asm2 = match cert.derivations.get(a2.wrapping_sub(ncons)) {
                    Some(d) if *a2 >= ncons && matches!(d.rule, Rule::Asm) => &d.constraint,
                    _ => reject!(Some(idx), "uns reference {a2} is not an assumption"),
                };
                // complementary split pair: same integer row, a <= d vs a >= d+1
                if asm1.coeffs != asm2.coeffs {
                    reject!(Some(idx), "unsplit assumptions differ in coefficients");
                }
                for (i, c) in asm1.coeffs.iter() {
                    if !c.is_integer() || !cert.integer_vars.contains(i) {
                        reject!(Some(idx), "split row is not integral");
                    }
                }
                let (le, ge) = match (asm1.sense, asm2.sense) {
                    (Sense::Le, Sense::Ge) => (&asm1.rhs, &asm2.rhs),
                    (Sense::Ge, Sense::Le) => (&asm2.rhs, &asm1.rhs),
                    _ => reject!(Some(idx), "unsplit assumptions are not a <=/>= pair"),
                };
                if !le.is_integer() || *ge != le + Rational::from_integer(1.into()) {
                    reject!(
                        Some(idx),
                        "unsplit assumptions are not complementary integer sides"
                    );
                }
                let c1 = match cert.constraint(*i1) {
                    Some(c) if *i1 >= ncons => c,
                    _ => reject!(Some(idx), "uns reference {i1} is not a derivation"),
                };
                let c2 = match cert.constraint(*i2) {
                    Some(c) if *i2 >= ncons => c,
                    _ => reject!(Some(idx), "uns reference {i2} is not a derivation"),
                };
                if !same_constraint(c1, c2) || !same_constraint(c1, stated) {
                    reject!(Some(idx), "unsplit sides conclude different constraints");
                }
                let mut s1 = assumptions[*i1 - ncons].clone();
                if !s1.remove(a1) {
                    reject!(Some(idx), "side 1 does not depend on assumption {a1}");
                }
                let mut s2 = assumptions[*i2 - ncons].clone();
                if !s2.remove(a2) {
                    reject!(Some(idx), "side 2 does not depend on assumption {a2}");
                }
                if s1 != s2 {
                    reject!(
                        Some(idx),
                        "assumption sets differ by more than the split pair"
                    );
                }
                s1
            }
            Rule::Weak { .. } => {
                reject!(Some(idx), "weak record at DER {k}; run completion first");
            }
        };
        assumptions.push(asms);
    }

    // Final derivation proves the claim under no assumptions.
    let Some(last) = cert.derivations.last() else {
        reject!(None, "certificate derives nothing");
    };
    let last_idx = ncons + cert.derivations.len() - 1;
    if !assumptions.last().unwrap().is_empty() {
        reject!(Some(last_idx), "undischarged assumptions remain");
    }
    match &cert.rtp {
        Rtp::Infeasible => {
            if !last.constraint.is_absurd() {
                reject!(
                    Some(last_idx),
                    "final derivation does not establish infeasibility"
                );
            }
        }
        Rtp::Range { lower, .. } => {
            let c = &last.constraint;
            if c.sense != Sense::Ge || c.coeffs != cert.objective || c.rhs < *lower {
                reject!(
                    Some(last_idx),
                    "final derivation does not establish the objective lower bound {lower}"
                );
            }
        }
    }

    Verdict::Accepted
}
