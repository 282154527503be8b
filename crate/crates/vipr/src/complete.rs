use std::collections::BTreeMap;

use exactcuts_rational::Rational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::format::{Certificate, Constraint, Rule, Sense, SparseVec};

#[derive(Debug, Error)]
pub enum CompletionError {
    #[error("derivation {index}: no usable {side} bound constraint for variable {var}")]
    MissingBound {
        index: usize,
        var: String,
        side: &'static str,
    },
    #[error("derivation {index}: payload aggregation disagrees with the recorded exact coefficients")]
    ExactMismatch { index: usize },
    #[error("derivation {index}: completed aggregation does not dominate the stated constraint")]
    NotDominated { index: usize },
    #[error("derivation {index}: {reason}")]
    Unprovable { index: usize, reason: String },
    #[error("derivation {index}: {reason}")]
    BadPayload { index: usize, reason: String },
}

/// Proves `maximize target.coeffs subject to the problem constraints <= bound`
/// and returns aggregation multipliers over problem-constraint indices, or an
/// error message when the LP cannot certify the target.
pub type LpProver<'a> =
    &'a dyn Fn(&Certificate, &Constraint) -> Result<Vec<(usize, Rational)>, String>;

#[derive(Debug, Clone)]
struct BoundEntry {
    /// Global index of the singleton constraint.
    index: usize,
    /// Coefficient of the variable in that constraint.
    coeff: Rational,
    /// The implied bound value on the variable.
    value: Rational,
}

#[derive(Debug, Default)]
struct BoundsIndex {
    lower: BTreeMap<usize, Vec<BoundEntry>>,
    upper: BTreeMap<usize, Vec<BoundEntry>>,
}

impl BoundsIndex {
    /// Tightest usable bound with constraint index strictly below `before`.
    fn tightest(&self, var: usize, upper: bool, before: usize) -> Option<&BoundEntry> {
        let list = if upper {
            self.upper.get(&var)?
        } else {
            self.lower.get(&var)?
        };
        list.iter().filter(|e| e.index < before).min_by(|a, b| {
            let ord = if upper {
                a.value.cmp(&b.value)
            } else {
                b.value.cmp(&a.value)
            };
            ord.then(a.index.cmp(&b.index))
        })
    }
}

/// Loose assumption tracking: enough to know which derivations are
/// assumption-free and therefore usable as bound references. Validity is the
/// checker's job.
fn assumption_free(cert: &Certificate) -> Vec<bool> {
    let ncons = cert.constraints.len();
    let mut free = Vec::with_capacity(cert.derivations.len());
    for der in &cert.derivations {
        let f = match &der.rule {
            Rule::Asm => false,
            Rule::Lin(refs) | Rule::Rnd(refs) | Rule::Weak { payload: refs, .. } => refs
                .iter()
                .all(|(r, _)| *r < ncons || free.get(*r - ncons).copied().unwrap_or(false)),
            // Unsplit discharges assumptions; conservatively require the
            // remaining set to be empty via both sides referencing only the
            // split pair, which we cannot see here. Treat as not usable.
            Rule::Uns { .. } => false,
        };
        free.push(f);
    }
    free
}

fn collect_bounds(cert: &Certificate) -> BoundsIndex {
    let mut idx = BoundsIndex::default();
    let free = assumption_free(cert);
    let ncons = cert.constraints.len();
    for gi in 0..cert.num_indices() {
        if gi >= ncons && !free[gi - ncons] {
            continue;
        }
        let c = cert.constraint(gi).unwrap();
        if c.coeffs.len() != 1 || c.sense == Sense::Eq {
            continue;
        }
        let (var, coeff) = c.coeffs.iter().next().map(|(i, c)| (*i, c.clone())).unwrap();
        let value = &c.rhs / &coeff;
        let is_upper = match c.sense {
            Sense::Le => coeff.is_positive(),
            Sense::Ge => coeff.is_negative(),
            Sense::Eq => unreachable!(),
        };
        let entry = BoundEntry {
            index: gi,
            coeff,
            value,
        };
        if is_upper {
            idx.upper.entry(var).or_default().push(entry);
        } else {
            idx.lower.entry(var).or_default().push(entry);
        }
    }
    idx
}

/// Exact aggregation of a payload, oriented by the stated sense. No
/// sign-sense validation here; the strict checker performs it afterwards.
fn raw_aggregate(cert: &Certificate, refs: &[(usize, Rational)]) -> (SparseVec, Rational) {
    let mut coeffs = SparseVec::new();
    let mut rhs = Rational::zero();
    for (idx, mult) in refs {
        if let Some(c) = cert.constraint(*idx) {
            coeffs.add_scaled(&c.coeffs, mult);
            rhs += mult * &c.rhs;
        }
    }
    (coeffs, rhs)
}

fn fix_weak(
    cert: &Certificate,
    bounds: &BoundsIndex,
    global_index: usize,
    stated: &Constraint,
    payload: &[(usize, Rational)],
    exact_coeffs: &SparseVec,
) -> Result<Vec<(usize, Rational)>, CompletionError> {
    if stated.sense == Sense::Eq {
        return Err(CompletionError::BadPayload {
            index: global_index,
            reason: "weak equality records are not supported".into(),
        });
    }
    let (agg_coeffs, agg_rhs) = raw_aggregate(cert, payload);
    if agg_coeffs != *exact_coeffs {
        return Err(CompletionError::ExactMismatch {
            index: global_index,
        });
    }

    let mut extra: Vec<(usize, Rational)> = Vec::new();
    let mut fixed_rhs = agg_rhs;
    let vars: Vec<usize> = {
        let mut v: Vec<usize> = stated
            .coeffs
            .indices()
            .chain(agg_coeffs.indices())
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    for var in vars {
        let stated_c = stated.coeffs.get(var).cloned().unwrap_or_else(Rational::zero);
        let agg_c = agg_coeffs.get(var).cloned().unwrap_or_else(Rational::zero);
        let delta = &stated_c - &agg_c;
        if delta.is_zero() {
            continue;
        }
        // For a <= conclusion: raising a coefficient leans on an upper bound,
        // lowering it on a lower bound. Mirrored for >=.
        let needs_upper = match stated.sense {
            Sense::Le => delta.is_positive(),
            Sense::Ge => delta.is_negative(),
            Sense::Eq => unreachable!(),
        };
        let entry = bounds
            .tightest(var, needs_upper, global_index)
            .ok_or_else(|| CompletionError::MissingBound {
                index: global_index,
                var: cert
                    .var_names
                    .get(var)
                    .cloned()
                    .unwrap_or_else(|| format!("#{var}")),
                side: if needs_upper { "upper" } else { "lower" },
            })?;
        let mult = &delta / &entry.coeff;
        fixed_rhs += &delta * &entry.value;
        extra.push((entry.index, mult));
    }

    let dominated = match stated.sense {
        Sense::Le => fixed_rhs <= stated.rhs,
        Sense::Ge => fixed_rhs >= stated.rhs,
        Sense::Eq => unreachable!(),
    };
    if !dominated {
        return Err(CompletionError::NotDominated {
            index: global_index,
        });
    }

    let mut payload: Vec<(usize, Rational)> =
        payload.iter().filter(|(_, m)| !m.is_zero()).cloned().collect();
    payload.extend(extra);
    Ok(payload)
}

fn complete_bounds_impl(
    cert: &Certificate,
    parallel: bool,
) -> Result<Certificate, CompletionError> {
    let bounds = collect_bounds(cert);
    let ncons = cert.constraints.len();

    let jobs: Vec<(usize, &Constraint, &Vec<(usize, Rational)>, &SparseVec)> = cert
        .derivations
        .iter()
        .enumerate()
        .filter_map(|(k, d)| match &d.rule {
            Rule::Weak {
                payload,
                exact_coeffs,
            } => Some((k, &d.constraint, payload, exact_coeffs)),
            _ => None,
        })
        .collect();

    let run = |&(k, stated, payload, exact): &(
        usize,
        &Constraint,
        &Vec<(usize, Rational)>,
        &SparseVec,
    )| {
        fix_weak(cert, &bounds, ncons + k, stated, payload, exact).map(|p| (k, p))
    };

    #[cfg(feature = "parallel")]
    let fixes: Result<Vec<(usize, Vec<(usize, Rational)>)>, CompletionError> = if parallel {
        use rayon::prelude::*;
        jobs.par_iter().map(run).collect()
    } else {
        jobs.iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let fixes: Result<Vec<(usize, Vec<(usize, Rational)>)>, CompletionError> = {
        let _ = parallel;
        jobs.iter().map(run).collect()
    };

    let mut out = cert.clone();
    for (k, payload) in fixes? {
        out.derivations[k].rule = Rule::Lin(payload);
    }
    Ok(out)
}

/// Turns every weak derivation into a strict aggregation by adding bound
/// multipliers for the coefficient differences. Conclusions are unchanged;
/// only justifications are rewritten.
pub fn complete_bounds(cert: &Certificate) -> Result<Certificate, CompletionError> {
    complete_bounds_impl(cert, cfg!(feature = "parallel"))
}

/// Sequential variant, primarily for benchmarking against the parallel path.
pub fn complete_bounds_serial(cert: &Certificate) -> Result<Certificate, CompletionError> {
    complete_bounds_impl(cert, false)
}

/// Completion through an exact LP: each weak conclusion is re-proved from the
/// problem constraints by the supplied prover, replacing the payload with the
/// returned dual multipliers.
pub fn complete_exact_lp(
    cert: &Certificate,
    prover: LpProver<'_>,
) -> Result<Certificate, CompletionError> {
    let ncons = cert.constraints.len();
    let mut out = cert.clone();
    for (k, der) in cert.derivations.iter().enumerate() {
        let Rule::Weak { .. } = &der.rule else {
            continue;
        };
        let stated = &der.constraint;
        let payload = prover(cert, stated).map_err(|reason| CompletionError::Unprovable {
            index: ncons + k,
            reason,
        })?;
        let (coeffs, rhs) = raw_aggregate(cert, &payload);
        let dominated = coeffs == stated.coeffs
            && match stated.sense {
                Sense::Le => rhs <= stated.rhs,
                Sense::Ge => rhs >= stated.rhs,
                Sense::Eq => rhs == stated.rhs,
            };
        if !dominated {
            return Err(CompletionError::NotDominated { index: ncons + k });
        }
        out.derivations[k].rule = Rule::Lin(payload);
    }
    Ok(out)
}
