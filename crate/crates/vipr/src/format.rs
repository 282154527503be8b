use std::collections::BTreeSet;
use std::fmt;

use exactcuts_rational::Rational;
use num_traits::Zero;

/// Sparse rational vector over variable indices, sorted, no explicit zeros.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparseVec(Vec<(usize, Rational)>);

impl SparseVec {
    pub fn new() -> Self {
        SparseVec(Vec::new())
    }

    /// Builds from possibly unsorted entries; merges duplicates, drops zeros.
    pub fn from_entries(entries: impl IntoIterator<Item = (usize, Rational)>) -> Self {
        let mut v: Vec<(usize, Rational)> = entries.into_iter().collect();
        v.sort_by_key(|(i, _)| *i);
        let mut out: Vec<(usize, Rational)> = Vec::with_capacity(v.len());
        for (i, c) in v {
            match out.last_mut() {
                Some((j, acc)) if *j == i => *acc += c,
                _ => out.push((i, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        SparseVec(out)
    }

    pub fn iter(&self) -> impl Iterator<Item = &(usize, Rational)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, idx: usize) -> Option<&Rational> {
        self.0
            .binary_search_by_key(&idx, |(i, _)| *i)
            .ok()
            .map(|p| &self.0[p].1)
    }

    /// self += scale * other
    pub fn add_scaled(&mut self, other: &SparseVec, scale: &Rational) {
        if scale.is_zero() {
            return;
        }
        let merged = SparseVec::from_entries(
            self.0
                .iter()
                .cloned()
                .chain(other.0.iter().map(|(i, c)| (*i, c * scale))),
        );
        *self = merged;
    }

    pub fn dot(&self, dense: &[Rational]) -> Rational {
        self.0
            .iter()
            .map(|(i, c)| c * &dense[*i])
            .fold(Rational::zero(), |a, b| a + b)
    }

    pub fn scaled(&self, scale: &Rational) -> SparseVec {
        if scale.is_zero() {
            return SparseVec::new();
        }
        SparseVec(self.0.iter().map(|(i, c)| (*i, c * scale)).collect())
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|(i, _)| *i)
    }
}

impl FromIterator<(usize, Rational)> for SparseVec {
    fn from_iter<T: IntoIterator<Item = (usize, Rational)>>(iter: T) -> Self {
        SparseVec::from_entries(iter)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        })
    }
}

/// A named linear constraint `coeffs <sense> rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub name: String,
    pub sense: Sense,
    pub rhs: Rational,
    pub coeffs: SparseVec,
}

impl Constraint {
    /// A constraint no point satisfies, e.g. `0 >= 1`.
    pub fn is_absurd(&self) -> bool {
        self.coeffs.is_empty()
            && match self.sense {
                Sense::Le => self.rhs < Rational::zero(),
                Sense::Ge => self.rhs > Rational::zero(),
                Sense::Eq => !self.rhs.is_zero(),
            }
    }
}

/// The claim a certificate proves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rtp {
    Infeasible,
    Range { lower: Rational, upper: Rational },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub name: String,
    pub objective: Rational,
    pub values: SparseVec,
}

/// Justification of a derived constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    /// Introduce an assumption (one side of a split disjunction).
    Asm,
    /// Exact aggregation of earlier constraints: (index, multiplier) pairs.
    Lin(Vec<(usize, Rational)>),
    /// Aggregation followed by integer rounding of the right-hand side.
    Rnd(Vec<(usize, Rational)>),
    /// Discharge a split: derivations `i1`/`i2` under assumptions `a1`/`a2`.
    Uns {
        i1: usize,
        a1: usize,
        i2: usize,
        a2: usize,
    },
    /// Aggregation with per-variable rounding slack; must be completed before
    /// strict checking. Carries the solver's exact aggregation coefficients.
    Weak {
        payload: Vec<(usize, Rational)>,
        exact_coeffs: SparseVec,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub constraint: Constraint,
    pub rule: Rule,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub var_names: Vec<String>,
    pub integer_vars: BTreeSet<usize>,
    /// Minimization objective.
    pub objective: SparseVec,
    pub constraints: Vec<Constraint>,
    pub rtp: Rtp,
    pub solutions: Vec<Solution>,
    pub derivations: Vec<Derivation>,
}

impl Certificate {
    /// Constraint by global index: the problem constraints first, then the
    /// derived ones.
    pub fn constraint(&self, idx: usize) -> Option<&Constraint> {
        if idx < self.constraints.len() {
            self.constraints.get(idx)
        } else {
            self.derivations
                .get(idx - self.constraints.len())
                .map(|d| &d.constraint)
        }
    }

    pub fn num_indices(&self) -> usize {
        self.constraints.len() + self.derivations.len()
    }

    pub fn contains_weak(&self) -> bool {
        self.derivations
            .iter()
            .any(|d| matches!(d.rule, Rule::Weak { .. }))
    }
}

fn write_sparse(f: &mut fmt::Formatter<'_>, v: &SparseVec) -> fmt::Result {
    write!(f, "{}", v.len())?;
    for (i, c) in v.iter() {
        write!(f, " {i} {c}")?;
    }
    Ok(())
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "VER 1.1")?;
        writeln!(f, "VAR {}", self.var_names.len())?;
        for name in &self.var_names {
            writeln!(f, "{name}")?;
        }
        write!(f, "INT {}", self.integer_vars.len())?;
        for i in &self.integer_vars {
            write!(f, " {i}")?;
        }
        writeln!(f)?;
        writeln!(f, "OBJ min")?;
        write_sparse(f, &self.objective)?;
        writeln!(f)?;
        writeln!(f, "CON {}", self.constraints.len())?;
        for c in &self.constraints {
            write!(f, "{} {} {} ", c.name, c.sense, c.rhs)?;
            write_sparse(f, &c.coeffs)?;
            writeln!(f)?;
        }
        match &self.rtp {
            Rtp::Infeasible => writeln!(f, "RTP infeas")?,
            Rtp::Range { lower, upper } => writeln!(f, "RTP range {lower} {upper}")?,
        }
        writeln!(f, "SOL {}", self.solutions.len())?;
        for s in &self.solutions {
            write!(f, "{} {} ", s.name, s.objective)?;
            write_sparse(f, &s.values)?;
            writeln!(f)?;
        }
        writeln!(f, "DER {}", self.derivations.len())?;
        for (k, d) in self.derivations.iter().enumerate() {
            let idx = self.constraints.len() + k;
            let c = &d.constraint;
            write!(f, "{idx} {} {} {} ", c.name, c.sense, c.rhs)?;
            write_sparse(f, &c.coeffs)?;
            match &d.rule {
                Rule::Asm => write!(f, " asm")?,
                Rule::Lin(refs) => {
                    write!(f, " lin {}", refs.len())?;
                    for (r, m) in refs {
                        write!(f, " {r} {m}")?;
                    }
                }
                Rule::Rnd(refs) => {
                    write!(f, " rnd {}", refs.len())?;
                    for (r, m) in refs {
                        write!(f, " {r} {m}")?;
                    }
                }
                Rule::Uns { i1, a1, i2, a2 } => write!(f, " uns {i1} {a1} {i2} {a2}")?,
                Rule::Weak {
                    payload,
                    exact_coeffs,
                } => {
                    write!(f, " weak {}", payload.len())?;
                    for (r, m) in payload {
                        write!(f, " {r} {m}")?;
                    }
                    write!(f, " ")?;
                    write_sparse(f, exact_coeffs)?;
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
