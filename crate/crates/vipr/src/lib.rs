//! Certificates of MIP optimality or infeasibility in an elementary,
//! independently checkable format.
//!
//! A certificate restates the problem, exhibits solutions, and then derives
//! constraints one by one using only four rules: assumptions, exact linear
//! aggregation, integer rounding, and unsplitting a discharged disjunction.
//! A fifth rule, `weak`, marks aggregations whose coefficients still carry
//! one-sided rounding slack; [`complete_bounds`] repairs those into strict
//! aggregations using variable-bound constraints, after which the strict
//! checker in [`checker`] applies.

mod checker;
mod complete;
mod format;
mod parse;

pub use checker::{check, CheckReport, Verdict};
pub use complete::{
    complete_bounds, complete_bounds_serial, complete_exact_lp, CompletionError, LpProver,
};
pub use format::{
    Certificate, Constraint, Derivation, Rtp, Rule, Sense, Solution, SparseVec,
};
pub use parse::{parse_certificate, CertParseError};
