//! The MIP data model and its textual format.
//!
//! The format is line-oriented so that exact rationals survive round trips:
//!
//! ```text
//! VAR <n>
//! <name> <lower|-inf> <upper|+inf> <int|cont>
//! OBJ min
//! <name> <rational>        # sparse terms, blank line terminates
//! CON <m>
//! <name> <sense> <rhs> { <varname> <rational> }*
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use exactcuts_rational::{parse_rational, Rational};
use exactcuts_vipr::Sense;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    /// `None` means unbounded below.
    pub lower: Option<Rational>,
    /// `None` means unbounded above.
    pub upper: Option<Rational>,
    pub is_integer: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub name: String,
    /// Sparse coefficients by variable index; no explicit zeros.
    pub coeffs: BTreeMap<usize, Rational>,
    pub sense: Sense,
    pub rhs: Rational,
}

impl Row {
    pub fn satisfied_by(&self, point: &[Rational]) -> bool {
        let lhs: Rational = self
            .coeffs
            .iter()
            .map(|(i, c)| c * &point[*i])
            .fold(Rational::zero(), |a, b| a + b);
        match self.sense {
            Sense::Le => lhs <= self.rhs,
            Sense::Ge => lhs >= self.rhs,
            Sense::Eq => lhs == self.rhs,
        }
    }
}

/// A minimization MIP over exact rationals.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Problem {
    pub variables: Vec<Variable>,
    pub rows: Vec<Row>,
    pub objective: BTreeMap<usize, Rational>,
}

#[derive(Debug, Error)]
pub enum ProblemParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("unexpected end of file: expected {0}")]
    Eof(&'static str),
}

fn syntax(line: usize, msg: impl Into<String>) -> ProblemParseError {
    ProblemParseError::Syntax {
        line,
        msg: msg.into(),
    }
}

struct Lines<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .collect();
        Lines { lines, pos: 0 }
    }

    /// Next non-empty line.
    fn next(&mut self, what: &'static str) -> Result<(usize, &'a str), ProblemParseError> {
        while let Some(&(n, l)) = self.lines.get(self.pos) {
            self.pos += 1;
            if !l.is_empty() {
                return Ok((n, l));
            }
        }
        Err(ProblemParseError::Eof(what))
    }

    /// Next line including empty ones (used by the OBJ term list).
    fn next_raw(&mut self) -> Option<(usize, &'a str)> {
        let r = self.lines.get(self.pos).copied();
        if r.is_some() {
            self.pos += 1;
        }
        r
    }

    fn rewind(&mut self) {
        self.pos -= 1;
    }
}

fn parse_bound(tok: &str, line: usize, lower: bool) -> Result<Option<Rational>, ProblemParseError> {
    match (tok, lower) {
        ("-inf", true) | ("+inf", false) | ("inf", false) => Ok(None),
        _ => parse_rational(tok)
            .map(Some)
            .map_err(|e| syntax(line, format!("bad bound `{tok}`: {e}"))),
    }
}

/// Parses the textual problem format. Every rational is read exactly.
pub fn parse_problem(text: &str) -> Result<Problem, ProblemParseError> {
    let mut lines = Lines::new(text);

    let (n_line, header) = lines.next("VAR header")?;
    let mut it = header.split_whitespace();
    if it.next() != Some("VAR") {
        return Err(syntax(n_line, "expected `VAR <n>`"));
    }
    let nvars: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| syntax(n_line, "expected `VAR <n>`"))?;

    let mut variables = Vec::with_capacity(nvars);
    let mut index = BTreeMap::new();
    for _ in 0..nvars {
        let (ln, l) = lines.next("variable declaration")?;
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 4 {
            return Err(syntax(ln, "expected `<name> <lower> <upper> <int|cont>`"));
        }
        let name = toks[0].to_string();
        if index.insert(name.clone(), variables.len()).is_some() {
            return Err(syntax(ln, format!("duplicate variable `{name}`")));
        }
        let lower = parse_bound(toks[1], ln, true)?;
        let upper = parse_bound(toks[2], ln, false)?;
        if let (Some(l), Some(u)) = (&lower, &upper) {
            if l > u {
                return Err(syntax(ln, format!("inconsistent bounds on `{name}`")));
            }
        }
        let is_integer = match toks[3] {
            "int" => true,
            "cont" => false,
            other => return Err(syntax(ln, format!("expected int|cont, found `{other}`"))),
        };
        variables.push(Variable {
            name,
            lower,
            upper,
            is_integer,
        });
    }

    let (obj_line, l) = lines.next("OBJ header")?;
    if l.split_whitespace().collect::<Vec<_>>() != ["OBJ", "min"] {
        return Err(syntax(obj_line, "expected `OBJ min`"));
    }
    let mut objective = BTreeMap::new();
    loop {
        let Some((ln, l)) = lines.next_raw() else {
            return Err(ProblemParseError::Eof("CON header"));
        };
        if l.is_empty() {
            continue;
        }
        if l.starts_with("CON") {
            lines.rewind();
            break;
        }
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(syntax(ln, "expected `<varname> <rational>` objective term"));
        }
        let var = *index
            .get(toks[0])
            .ok_or_else(|| syntax(ln, format!("unknown variable `{}`", toks[0])))?;
        let coef = parse_rational(toks[1]).map_err(|e| syntax(ln, e.to_string()))?;
        if objective.insert(var, coef).is_some() {
            return Err(syntax(ln, format!("duplicate objective term `{}`", toks[0])));
        }
    }
    objective.retain(|_, c| !c.is_zero());

    let (con_line, header) = lines.next("CON header")?;
    let mut it = header.split_whitespace();
    if it.next() != Some("CON") {
        return Err(syntax(con_line, "expected `CON <m>`"));
    }
    let nrows: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| syntax(con_line, "expected `CON <m>`"))?;

    let mut rows = Vec::with_capacity(nrows);
    let mut row_names = BTreeMap::new();
    for _ in 0..nrows {
        let (ln, l) = lines.next("constraint")?;
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() < 3 || toks.len() % 2 == 0 {
            return Err(syntax(
                ln,
                "expected `<name> <sense> <rhs> { <var> <coef> }*`",
            ));
        }
        let name = toks[0].to_string();
        if row_names.insert(name.clone(), rows.len()).is_some() {
            return Err(syntax(ln, format!("duplicate constraint `{name}`")));
        }
        let sense = match toks[1] {
            "<=" => Sense::Le,
            ">=" => Sense::Ge,
            "=" => Sense::Eq,
            other => return Err(syntax(ln, format!("bad sense `{other}`"))),
        };
        let rhs = parse_rational(toks[2]).map_err(|e| syntax(ln, e.to_string()))?;
        let mut coeffs = BTreeMap::new();
        for pair in toks[3..].chunks(2) {
            let var = *index
                .get(pair[0])
                .ok_or_else(|| syntax(ln, format!("unknown variable `{}`", pair[0])))?;
            let coef = parse_rational(pair[1]).map_err(|e| syntax(ln, e.to_string()))?;
            if coeffs.contains_key(&var) {
                return Err(syntax(ln, format!("duplicate term `{}`", pair[0])));
            }
            if !coef.is_zero() {
                coeffs.insert(var, coef);
            }
        }
        rows.push(Row {
            name,
            coeffs,
            sense,
            rhs,
        });
    }

    Ok(Problem {
        variables,
        rows,
        objective,
    })
}

fn bound_str(b: &Option<Rational>, lower: bool) -> String {
    match b {
        Some(r) => r.to_string(),
        None if lower => "-inf".to_string(),
        None => "+inf".to_string(),
    }
}

impl Problem {
    pub fn write(&self) -> String {
        let mut out = String::new();
        writeln!(out, "VAR {}", self.variables.len()).unwrap();
        for v in &self.variables {
            writeln!(
                out,
                "{} {} {} {}",
                v.name,
                bound_str(&v.lower, true),
                bound_str(&v.upper, false),
                if v.is_integer { "int" } else { "cont" }
            )
            .unwrap();
        }
        writeln!(out, "OBJ min").unwrap();
        for (i, c) in &self.objective {
            writeln!(out, "{} {}", self.variables[*i].name, c).unwrap();
        }
        writeln!(out).unwrap();
        writeln!(out, "CON {}", self.rows.len()).unwrap();
        for r in &self.rows {
            write!(out, "{} {} {}", r.name, r.sense, r.rhs).unwrap();
            for (i, c) in &r.coeffs {
                write!(out, " {} {}", self.variables[*i].name, c).unwrap();
            }
            writeln!(out).unwrap();
        }
        out
    }

    /// True iff every variable in `support` has at least one finite bound.
    /// Gate for every safe-cut operation.
    pub fn check_assumption_bounds(&self, support: impl IntoIterator<Item = usize>) -> bool {
        support.into_iter().all(|i| {
            let v = &self.variables[i];
            v.lower.is_some() || v.upper.is_some()
        })
    }

    /// Bounds with integer variables tightened to integral values. Valid for
    /// every feasible point and required wherever integrality of shifted
    /// variables matters.
    pub fn tightened_bounds(&self) -> (Vec<Option<Rational>>, Vec<Option<Rational>>) {
        let lower = self
            .variables
            .iter()
            .map(|v| {
                v.lower
                    .as_ref()
                    .map(|l| if v.is_integer { l.ceil() } else { l.clone() })
            })
            .collect();
        let upper = self
            .variables
            .iter()
            .map(|v| {
                v.upper
                    .as_ref()
                    .map(|u| if v.is_integer { u.floor() } else { u.clone() })
            })
            .collect();
        (lower, upper)
    }

    pub fn is_feasible(&self, point: &[Rational]) -> bool {
        if point.len() != self.variables.len() {
            return false;
        }
        for (i, v) in self.variables.iter().enumerate() {
            if v.is_integer && !point[i].is_integer() {
                return false;
            }
            if let Some(l) = &v.lower {
                if point[i] < *l {
                    return false;
                }
            }
            if let Some(u) = &v.upper {
                if point[i] > *u {
                    return false;
                }
            }
        }
        self.rows.iter().all(|r| r.satisfied_by(point))
    }

    pub fn objective_value(&self, point: &[Rational]) -> Rational {
        self.objective
            .iter()
            .map(|(i, c)| c * &point[*i])
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// Rows normalized to `<=` form, with their provenance. A `>=` row is
    /// negated; an `=` row splits into a `<=` pair.
    pub fn normalized_rows(&self) -> Vec<NormRow> {
        let mut out = Vec::new();
        for (idx, r) in self.rows.iter().enumerate() {
            match r.sense {
                Sense::Le => out.push(NormRow {
                    coeffs: r.coeffs.clone(),
                    rhs: r.rhs.clone(),
                    origin: NormOrigin::Direct(idx),
                }),
                Sense::Ge => out.push(NormRow {
                    coeffs: negate(&r.coeffs),
                    rhs: -r.rhs.clone(),
                    origin: NormOrigin::NegatedGe(idx),
                }),
                Sense::Eq => {
                    out.push(NormRow {
                        coeffs: r.coeffs.clone(),
                        rhs: r.rhs.clone(),
                        origin: NormOrigin::EqLe(idx),
                    });
                    out.push(NormRow {
                        coeffs: negate(&r.coeffs),
                        rhs: -r.rhs.clone(),
                        origin: NormOrigin::EqGe(idx),
                    });
                }
            }
        }
        out
    }
}

fn negate(coeffs: &BTreeMap<usize, Rational>) -> BTreeMap<usize, Rational> {
    coeffs.iter().map(|(i, c)| (*i, -c.clone())).collect()
}

/// A `<=` row of the LP relaxation together with where it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormRow {
    pub coeffs: BTreeMap<usize, Rational>,
    pub rhs: Rational,
    pub origin: NormOrigin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormOrigin {
    Direct(usize),
    NegatedGe(usize),
    /// The `<=` half of an equality row.
    EqLe(usize),
    /// The negated (`>=`) half of an equality row.
    EqGe(usize),
}

impl NormOrigin {
    pub fn row_index(&self) -> usize {
        match self {
            NormOrigin::Direct(i)
            | NormOrigin::NegatedGe(i)
            | NormOrigin::EqLe(i)
            | NormOrigin::EqGe(i) => *i,
        }
    }
}

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("variable `{0}` is unbounded; the enumeration oracle needs a box")]
    Unbounded(String),
    #[error("grid has {points} points, exceeding the cap of {cap}")]
    TooLarge { points: BigInt, cap: u64 },
}

/// Streams every grid point of the box that satisfies all rows exactly:
/// integer variables take all integral values in range, continuous variables
/// all multiples of `1/grid_denominator`.
pub fn enumerate_feasible(
    problem: &Problem,
    grid_denominator: u64,
    cap: u64,
) -> Result<FeasibleIter<'_>, OracleError> {
    let mut axes = Vec::with_capacity(problem.variables.len());
    let mut total = BigInt::one();
    for v in &problem.variables {
        let (Some(lo), Some(up)) = (&v.lower, &v.upper) else {
            return Err(OracleError::Unbounded(v.name.clone()));
        };
        let step = if v.is_integer {
            Rational::one()
        } else {
            Rational::new(BigInt::one(), grid_denominator.into())
        };
        let first = (lo / &step).ceil();
        let last = (up / &step).floor();
        let count = (last.clone() - &first + Rational::one())
            .max(Rational::zero())
            .to_integer();
        total *= &count;
        let mut values = Vec::new();
        let mut k = first;
        while k <= last {
            values.push(&k * &step);
            k += Rational::one();
        }
        axes.push(values);
    }
    if total > BigInt::from(cap) {
        return Err(OracleError::TooLarge { points: total, cap });
    }
    Ok(FeasibleIter {
        problem,
        axes,
        odometer: None,
        exhausted: total.is_zero(),
    })
}

pub struct FeasibleIter<'a> {
    problem: &'a Problem,
    axes: Vec<Vec<Rational>>,
    odometer: Option<Vec<usize>>,
    exhausted: bool,
}

impl<'a> FeasibleIter<'a> {
    fn advance(&mut self) -> bool {
        match &mut self.odometer {
            None => {
                self.odometer = Some(vec![0; self.axes.len()]);
                true
            }
            Some(od) => {
                for i in (0..od.len()).rev() {
                    od[i] += 1;
                    if od[i] < self.axes[i].len() {
                        return true;
                    }
                    od[i] = 0;
                }
                false
            }
        }
    }
}

impl<'a> Iterator for FeasibleIter<'a> {
    type Item = Vec<Rational>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.exhausted || self.axes.iter().any(|a| a.is_empty()) {
            return None;
        }
        loop {
            if !self.advance() {
                self.exhausted = true;
                return None;
            }
            let od = self.odometer.as_ref().unwrap();
            let point: Vec<Rational> = od
                .iter()
                .enumerate()
                .map(|(i, &k)| self.axes[i][k].clone())
                .collect();
            if self.problem.rows.iter().all(|r| r.satisfied_by(&point)) {
                return Some(point);
            }
        }
    }
}

/// Exact optimum over the enumeration grid, or `None` when infeasible.
pub fn enumeration_optimum(
    problem: &Problem,
    grid_denominator: u64,
    cap: u64,
) -> Result<Option<(Rational, Vec<Rational>)>, OracleError> {
    let mut best: Option<(Rational, Vec<Rational>)> = None;
    for point in enumerate_feasible(problem, grid_denominator, cap)? {
        let val = problem.objective_value(&point);
        if best.as_ref().is_none_or(|(b, _)| val < *b) {
            best = Some((val, point));
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use exactcuts_rational::{int, rat};

    pub(crate) fn figure_rows_problem() -> Problem {
        // two integer variables, three rows, infeasible over the integers
        // once a 0..10 box closes the search
        parse_problem(
            "VAR 2\n\
             x1 0 10 int\n\
             x2 0 10 int\n\
             OBJ min\n\
             \n\
             CON 3\n\
             C1 >= 1 x1 2 x2 3\n\
             C2 <= 2 x1 3 x2 -4\n\
             C3 <= 3 x1 -1 x2 6\n",
        )
        .unwrap()
    }

    #[test]
    fn parses_the_three_row_instance() {
        let p = figure_rows_problem();
        assert_eq!(p.variables.len(), 2);
        assert!(p.variables.iter().all(|v| v.is_integer));
        assert_eq!(p.rows.len(), 3);
        assert_eq!(p.rows[0].sense, Sense::Ge);
        assert_eq!(p.rows[0].coeffs[&1], int(3));
    }

    #[test]
    fn exact_fraction_coefficients() {
        let p = parse_problem(
            "VAR 1\nx 0 1 cont\nOBJ min\nx 1/3\n\nCON 1\nr <= 1 x 1/3\n",
        )
        .unwrap();
        assert_eq!(p.objective[&0], rat(1, 3));
        assert_eq!(p.rows[0].coeffs[&0], rat(1, 3));
    }

    #[test]
    fn empty_constraint_section() {
        let p = parse_problem("VAR 1\nx 0 5 int\nOBJ min\nx 1\n\nCON 0\n").unwrap();
        assert_eq!(p.rows.len(), 0);
    }

    #[test]
    fn round_trip_is_identity() {
        let p = figure_rows_problem();
        assert_eq!(parse_problem(&p.write()).unwrap(), p);
        let q = parse_problem(
            "VAR 3\na -inf 4 cont\nb -2/3 +inf cont\nc 0 7 int\nOBJ min\na -1/7\nc 2\n\nCON 2\nr1 = 1/2 a 1 b -3\nr2 >= -2 b 1/3 c 5\n",
        )
        .unwrap();
        assert_eq!(parse_problem(&q.write()).unwrap(), q);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_problem("VAR 1\nx 0 bogus int\nOBJ min\n\nCON 0\n").unwrap_err();
        assert!(err.to_string().starts_with("line 2:"), "{err}");
        let err = parse_problem("VAR 1\nx 3 1 int\nOBJ min\n\nCON 0\n").unwrap_err();
        assert!(err.to_string().contains("inconsistent"), "{err}");
        let err =
            parse_problem("VAR 2\nx 0 1 int\nx 0 1 int\nOBJ min\n\nCON 0\n").unwrap_err();
        assert!(err.to_string().contains("duplicate"), "{err}");
    }

    #[test]
    fn assumption_gate() {
        let p = parse_problem(
            "VAR 2\nx 0 +inf cont\nfree -inf +inf cont\nOBJ min\n\nCON 0\n",
        )
        .unwrap();
        assert!(p.check_assumption_bounds([0]));
        assert!(!p.check_assumption_bounds([0, 1]));
        assert!(p.check_assumption_bounds([]));
    }

    #[test]
    fn enumeration_examples() {
        // box-closed instance is infeasible over integers
        let p = figure_rows_problem();
        assert_eq!(enumerate_feasible(&p, 1, 10_000_000).unwrap().count(), 0);

        // single integer variable, no rows
        let p = parse_problem("VAR 1\nx 0 2 int\nOBJ min\n\nCON 0\n").unwrap();
        let pts: Vec<_> = enumerate_feasible(&p, 1, 100).unwrap().collect();
        assert_eq!(pts, vec![vec![int(0)], vec![int(1)], vec![int(2)]]);

        // mixed grid: x integer, y on a half-integer grid, x + y <= 1
        let p = parse_problem(
            "VAR 2\nx 0 1 int\ny 0 1 cont\nOBJ min\n\nCON 1\nr <= 1 x 1 y 1\n",
        )
        .unwrap();
        let pts: Vec<Vec<Rational>> = enumerate_feasible(&p, 2, 100).unwrap().collect();
        let expect: Vec<Vec<Rational>> = vec![
            vec![int(0), int(0)],
            vec![int(0), rat(1, 2)],
            vec![int(0), int(1)],
            vec![int(1), int(0)],
        ];
        assert_eq!(pts, expect);
    }

    #[test]
    fn oracle_rejects_unbounded_and_huge_grids() {
        let p = parse_problem("VAR 1\nx 0 +inf int\nOBJ min\n\nCON 0\n").unwrap();
        assert!(matches!(
            enumerate_feasible(&p, 1, 100),
            Err(OracleError::Unbounded(_))
        ));
        let p = parse_problem("VAR 1\nx 0 1000 int\nOBJ min\n\nCON 0\n").unwrap();
        assert!(matches!(
            enumerate_feasible(&p, 1, 100),
            Err(OracleError::TooLarge { .. })
        ));
    }

    #[test]
    fn normalization_preserves_the_feasible_set() {
        let p = parse_problem(
            "VAR 2\nx 0 3 int\ny 0 3 int\nOBJ min\n\nCON 2\nr1 >= 1 x 1 y 1\nr2 = 2 x 1 y -1\n",
        )
        .unwrap();
        let norm = p.normalized_rows();
        assert_eq!(norm.len(), 3);
        for point in enumerate_feasible(
            &parse_problem("VAR 2\nx 0 3 int\ny 0 3 int\nOBJ min\n\nCON 0\n").unwrap(),
            1,
            1000,
        )
        .unwrap()
        {
            let orig = p.rows.iter().all(|r| r.satisfied_by(&point));
            let normed = norm.iter().all(|r| {
                let lhs: Rational = r
                    .coeffs
                    .iter()
                    .map(|(i, c)| c * &point[*i])
                    .fold(Rational::zero(), |a, b| a + b);
                lhs <= r.rhs
            });
            assert_eq!(orig, normed);
        }
    }

    #[test]
    fn tightening_rounds_integer_bounds_inward() {
        let p = parse_problem("VAR 2\nx 1/2 7/2 int\ny 1/2 7/2 cont\nOBJ min\n\nCON 0\n")
            .unwrap();
        let (lo, up) = p.tightened_bounds();
        assert_eq!(lo[0], Some(int(1)));
        assert_eq!(up[0], Some(int(3)));
        assert_eq!(lo[1], Some(rat(1, 2)));
        assert_eq!(up[1], Some(rat(7, 2)));
    }
}
