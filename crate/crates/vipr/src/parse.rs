use std::collections::BTreeSet;

use exactcuts_rational::{parse_rational, Rational};
use thiserror::Error;

use crate::format::{
    Certificate, Constraint, Derivation, Rtp, Rule, Sense, Solution, SparseVec,
};

#[derive(Debug, Error)]
pub enum CertParseError {
    #[error("line {line}: expected {expected}, found `{found}`")]
    Unexpected {
        line: usize,
        expected: &'static str,
        found: String,
    },
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("unexpected end of file while reading {0}")]
    Eof(&'static str),
}

struct Tokens<'a> {
    toks: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Tokens<'a> {
    fn new(text: &'a str) -> Self {
        let mut toks = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("");
            for t in line.split_whitespace() {
                toks.push((ln + 1, t));
            }
        }
        Tokens { toks, pos: 0 }
    }

    fn line(&self) -> usize {
        self.toks
            .get(self.pos.min(self.toks.len().saturating_sub(1)))
            .map(|(l, _)| *l)
            .unwrap_or(0)
    }

    fn next(&mut self, what: &'static str) -> Result<&'a str, CertParseError> {
        let t = self.toks.get(self.pos).ok_or(CertParseError::Eof(what))?;
        self.pos += 1;
        Ok(t.1)
    }

    fn expect(&mut self, lit: &'static str) -> Result<(), CertParseError> {
        let line = self.line();
        let t = self.next(lit)?;
        if t != lit {
            return Err(CertParseError::Unexpected {
                line,
                expected: lit,
                found: t.to_string(),
            });
        }
        Ok(())
    }

    fn usize(&mut self, what: &'static str) -> Result<usize, CertParseError> {
        let line = self.line();
        let t = self.next(what)?;
        t.parse().map_err(|_| CertParseError::Unexpected {
            line,
            expected: what,
            found: t.to_string(),
        })
    }

    fn rational(&mut self, what: &'static str) -> Result<Rational, CertParseError> {
        let line = self.line();
        let t = self.next(what)?;
        parse_rational(t).map_err(|_| CertParseError::Unexpected {
            line,
            expected: what,
            found: t.to_string(),
        })
    }

    fn sense(&mut self) -> Result<Sense, CertParseError> {
        let line = self.line();
        let t = self.next("sense")?;
        match t {
            "<=" => Ok(Sense::Le),
            ">=" => Ok(Sense::Ge),
            "=" => Ok(Sense::Eq),
            _ => Err(CertParseError::Unexpected {
                line,
                expected: "<=, >= or =",
                found: t.to_string(),
            }),
        }
    }

    fn sparse(&mut self, nvars: usize) -> Result<SparseVec, CertParseError> {
        let nnz = self.usize("nonzero count")?;
        let mut entries = Vec::with_capacity(nnz);
        for _ in 0..nnz {
            let line = self.line();
            let idx = self.usize("variable index")?;
            if idx >= nvars {
                return Err(CertParseError::Malformed {
                    line,
                    msg: format!("variable index {idx} out of range ({nvars} variables)"),
                });
            }
            let coef = self.rational("coefficient")?;
            entries.push((idx, coef));
        }
        Ok(SparseVec::from_entries(entries))
    }

    fn multipliers(&mut self, max_idx: usize) -> Result<Vec<(usize, Rational)>, CertParseError> {
        let k = self.usize("multiplier count")?;
        let mut refs = Vec::with_capacity(k);
        for _ in 0..k {
            let line = self.line();
            let idx = self.usize("constraint index")?;
            if idx >= max_idx {
                return Err(CertParseError::Malformed {
                    line,
                    msg: format!("reference {idx} is not an earlier constraint (< {max_idx})"),
                });
            }
            refs.push((idx, self.rational("multiplier")?));
        }
        Ok(refs)
    }
}

pub fn parse_certificate(text: &str) -> Result<Certificate, CertParseError> {
    let mut t = Tokens::new(text);

    t.expect("VER")?;
    let ver_line = t.line();
    let ver = t.next("version")?;
    if ver != "1.1" {
        return Err(CertParseError::Malformed {
            line: ver_line,
            msg: format!("unsupported version {ver}"),
        });
    }

    t.expect("VAR")?;
    let nvars = t.usize("variable count")?;
    let mut var_names = Vec::with_capacity(nvars);
    for _ in 0..nvars {
        var_names.push(t.next("variable name")?.to_string());
    }

    t.expect("INT")?;
    let nint = t.usize("integer count")?;
    let mut integer_vars = BTreeSet::new();
    for _ in 0..nint {
        let line = t.line();
        let idx = t.usize("integer variable index")?;
        if idx >= nvars {
            return Err(CertParseError::Malformed {
                line,
                msg: format!("integer index {idx} out of range"),
            });
        }
        integer_vars.insert(idx);
    }

    t.expect("OBJ")?;
    t.expect("min")?;
    let objective = t.sparse(nvars)?;

    t.expect("CON")?;
    let ncons = t.usize("constraint count")?;
    let mut constraints = Vec::with_capacity(ncons);
    for _ in 0..ncons {
        let name = t.next("constraint name")?.to_string();
        let sense = t.sense()?;
        let rhs = t.rational("rhs")?;
        let coeffs = t.sparse(nvars)?;
        constraints.push(Constraint {
            name,
            sense,
            rhs,
            coeffs,
        });
    }

    t.expect("RTP")?;
    let line = t.line();
    let rtp = match t.next("rtp kind")? {
        "infeas" => Rtp::Infeasible,
        "range" => Rtp::Range {
            lower: t.rational("range lower bound")?,
            upper: t.rational("range upper bound")?,
        },
        other => {
            return Err(CertParseError::Unexpected {
                line,
                expected: "infeas or range",
                found: other.to_string(),
            })
        }
    };

    t.expect("SOL")?;
    let nsol = t.usize("solution count")?;
    let mut solutions = Vec::with_capacity(nsol);
    for _ in 0..nsol {
        let name = t.next("solution name")?.to_string();
        let objective = t.rational("solution objective")?;
        let values = t.sparse(nvars)?;
        solutions.push(Solution {
            name,
            objective,
            values,
        });
    }

    t.expect("DER")?;
    let nder = t.usize("derivation count")?;
    let mut derivations = Vec::with_capacity(nder);
    for k in 0..nder {
        let line = t.line();
        let idx = t.usize("derivation index")?;
        let expected_idx = ncons + k;
        if idx != expected_idx {
            return Err(CertParseError::Malformed {
                line,
                msg: format!("derivation index {idx}, expected {expected_idx}"),
            });
        }
        let name = t.next("derivation name")?.to_string();
        let sense = t.sense()?;
        let rhs = t.rational("rhs")?;
        let coeffs = t.sparse(nvars)?;
        let rule_line = t.line();
        let rule = match t.next("rule")? {
            "asm" => Rule::Asm,
            "lin" => Rule::Lin(t.multipliers(expected_idx)?),
            "rnd" => Rule::Rnd(t.multipliers(expected_idx)?),
            "uns" => {
                let i1 = t.usize("uns i1")?;
                let a1 = t.usize("uns a1")?;
                let i2 = t.usize("uns i2")?;
                let a2 = t.usize("uns a2")?;
                for r in [i1, a1, i2, a2] {
                    if r >= expected_idx {
                        return Err(CertParseError::Malformed {
                            line: rule_line,
                            msg: format!("uns reference {r} is not an earlier constraint"),
                        });
                    }
                }
                Rule::Uns { i1, a1, i2, a2 }
            }
            "weak" => {
                let payload = t.multipliers(expected_idx)?;
                let exact_coeffs = t.sparse(nvars)?;
                Rule::Weak {
                    payload,
                    exact_coeffs,
                }
            }
            other => {
                return Err(CertParseError::Unexpected {
                    line: rule_line,
                    expected: "asm, lin, rnd, uns or weak",
                    found: other.to_string(),
                })
            }
        };
        derivations.push(Derivation {
            constraint: Constraint {
                name,
                sense,
                rhs,
                coeffs,
            },
            rule,
        });
    }

    if t.pos != t.toks.len() {
        return Err(CertParseError::Malformed {
            line: t.line(),
            msg: "trailing content after DER section".to_string(),
        });
    }

    Ok(Certificate {
        var_names,
        integer_vars,
        objective,
        constraints,
        rtp,
        solutions,
        derivations,
    })
}
