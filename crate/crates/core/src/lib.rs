//! Exact rational mixed-integer programming at desk scale: a bounded-variable
//! simplex over exact rationals and doubles, numerically safe Gomory
//! mixed-integer cuts built from approximate LP data through directed
//! rounding, LP-based branch-and-bound with exact pruning, and certificate
//! logging for everything the solver claims.

pub mod approx;
mod par;
pub mod problem;
pub mod simplex;

pub use problem::{parse_problem, Problem, Row, Variable};
