//! A small primal simplex over `<=` rows with general variable bounds,
//! generic over the scalar: exact rationals for validity-carrying solves and
//! doubles for the fast heuristic solves that feed cut separation.
//!
//! Two-phase with artificial columns, Bland's rule throughout, dense tableau.
//! Exact mode self-checks primal feasibility and strong duality on every
//! optimal result and produces a verified Farkas vector on infeasibility.

use std::collections::BTreeMap;
use std::ops::{Div, Neg};

use exactcuts_rational::{round_nearest, Rational};
use num_traits::{One, Signed, Zero};

use crate::problem::{NormOrigin, NormRow, Problem};

/// Scalar abstraction. The tolerance-aware predicates are what distinguish
/// the two modes: exact rationals compare against zero, doubles against a
/// pivot tolerance of 1e-9.
pub trait Scalar:
    Clone + PartialOrd + std::fmt::Debug + Zero + One + Signed + Div<Output = Self> + Neg<Output = Self>
{
    fn from_rational(r: &Rational) -> Self;
    fn is_zero_tol(&self) -> bool;
    fn is_pos_tol(&self) -> bool;
    fn is_neg_tol(&self) -> bool;
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn is_zero_tol(&self) -> bool {
        self.is_zero_tol()
    }
    fn is_pos_tol(&self) -> bool {
        self.is_positive()
    }
    fn is_neg_tol(&self) -> bool {
        self.is_negative()
    }
}

const F64_TOL: f64 = 1e-9;

impl Scalar for f64 {
    fn from_rational(r: &Rational) -> Self {
        round_nearest(r)
    }
    fn is_zero_tol(&self) -> bool {
        self.abs() <= F64_TOL
    }
    fn is_pos_tol(&self) -> bool {
        *self > F64_TOL
    }
    fn is_neg_tol(&self) -> bool {
        *self < -F64_TOL
    }
}

/// Where an LP row came from; cuts appended later carry their own identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpRowOrigin {
    Problem(NormOrigin),
    Cut(usize),
}

#[derive(Debug, Clone)]
pub struct LpRow {
    pub coeffs: BTreeMap<usize, Rational>,
    pub rhs: Rational,
    pub origin: LpRowOrigin,
}

/// An LP relaxation: `<=` rows, variable bounds, minimization objective.
#[derive(Debug, Clone, Default)]
pub struct LpRelaxation {
    pub rows: Vec<LpRow>,
    pub lower: Vec<Option<Rational>>,
    pub upper: Vec<Option<Rational>>,
    pub objective: Vec<Rational>,
}

impl LpRelaxation {
    /// Builds the root relaxation: normalized rows and integer-tightened
    /// bounds.
    pub fn from_problem(problem: &Problem) -> Self {
        let (lower, upper) = problem.tightened_bounds();
        let rows = problem
            .normalized_rows()
            .into_iter()
            .map(|NormRow { coeffs, rhs, origin }| LpRow {
                coeffs,
                rhs,
                origin: LpRowOrigin::Problem(origin),
            })
            .collect();
        let mut objective = vec![Rational::zero(); problem.variables.len()];
        for (i, c) in &problem.objective {
            objective[*i] = c.clone();
        }
        LpRelaxation {
            rows,
            lower,
            upper,
            objective,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_cut_row(&mut self, coeffs: BTreeMap<usize, Rational>, rhs: Rational, cut_id: usize) {
        self.rows.push(LpRow {
            coeffs,
            rhs,
            origin: LpRowOrigin::Cut(cut_id),
        });
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ColId {
    Structural(usize),
    Slack(usize),
}

#[derive(Debug, Clone)]
pub struct LpResult<S> {
    pub status: LpStatus,
    /// Structural variable values (status `Optimal`).
    pub primal: Vec<S>,
    /// One multiplier per row, `<= 0` at optimality for `<=` rows under
    /// minimization.
    pub dual_rows: Vec<S>,
    /// Reduced cost per structural variable: positive leans on the lower
    /// bound, negative on the upper.
    pub reduced_costs: Vec<S>,
    pub basis: Vec<ColId>,
    pub objective_value: Option<S>,
    /// Row multipliers `>= 0` certifying infeasibility (status `Infeasible`,
    /// exact mode).
    pub farkas: Option<Vec<S>>,
}

struct Engine<S> {
    m: usize,
    n: usize,
    /// Column count including slacks and any artificials.
    ncols: usize,
    /// Original constraint matrix, dense m x ncols.
    orig: Vec<Vec<S>>,
    /// Current tableau, basis inverse times `orig`.
    tab: Vec<Vec<S>>,
    lower: Vec<Option<S>>,
    upper: Vec<Option<S>>,
    rhs: Vec<S>,
    /// Current value of every column.
    val: Vec<S>,
    /// Basic column per row.
    basic: Vec<usize>,
    /// Row index for basic columns.
    row_of: Vec<Option<usize>>,
    cost: Vec<S>,
    iterations: usize,
    limit: usize,
}

enum StepOutcome {
    Optimal,
    Unbounded,
    Progress,
    Limit,
}

impl<S: Scalar> Engine<S> {
    fn new(lp: &LpRelaxation, limit: usize) -> Self {
        let m = lp.rows.len();
        let n = lp.num_vars();
        let ncols = n + m;
        let mut orig = vec![vec![S::zero(); ncols]; m];
        for (i, row) in lp.rows.iter().enumerate() {
            for (j, c) in &row.coeffs {
                orig[i][*j] = S::from_rational(c);
            }
            orig[i][n + i] = S::one();
        }
        let mut lower: Vec<Option<S>> = lp
            .lower
            .iter()
            .map(|b| b.as_ref().map(S::from_rational))
            .collect();
        let mut upper: Vec<Option<S>> = lp
            .upper
            .iter()
            .map(|b| b.as_ref().map(S::from_rational))
            .collect();
        lower.extend((0..m).map(|_| Some(S::zero())));
        upper.extend((0..m).map(|_| None));
        let rhs: Vec<S> = lp.rows.iter().map(|r| S::from_rational(&r.rhs)).collect();

        Engine {
            m,
            n,
            ncols,
            orig,
            tab: Vec::new(),
            lower,
            upper,
            rhs,
            val: Vec::new(),
            basic: Vec::new(),
            row_of: Vec::new(),
            cost: Vec::new(),
            iterations: 0,
            limit,
        }
    }

    fn is_fixed(&self, j: usize) -> bool {
        match (&self.lower[j], &self.upper[j]) {
            (Some(l), Some(u)) => l == u,
            _ => false,
        }
    }

    /// Start values: structurals at a finite bound (lower preferred), free at
    /// zero; slacks basic. Rows whose slack would start negative get an
    /// artificial column instead. Returns the artificial column indices.
    fn install_start(&mut self) -> Vec<usize> {
        for j in 0..self.n {
            let v = match (&self.lower[j], &self.upper[j]) {
                (Some(l), _) => l.clone(),
                (None, Some(u)) => u.clone(),
                (None, None) => S::zero(),
            };
            self.val.push(v);
        }
        // residuals r = b - A x for the structural part
        let mut artificials = Vec::new();
        let mut residuals = Vec::with_capacity(self.m);
        for i in 0..self.m {
            let mut r = self.rhs[i].clone();
            for j in 0..self.n {
                if !self.orig[i][j].is_zero_tol() {
                    r = r - self.orig[i][j].clone() * self.val[j].clone();
                }
            }
            residuals.push(r);
        }
        self.val.extend(residuals.iter().cloned()); // slack values (may be negative for now)
        self.basic = (0..self.m).map(|i| self.n + i).collect();

        for i in 0..self.m {
            if residuals[i].is_neg_tol() {
                // slack goes nonbasic at its lower bound, artificial enters
                let art = self.ncols;
                self.ncols += 1;
                for (k, row) in self.orig.iter_mut().enumerate() {
                    row.push(if k == i { -S::one() } else { S::zero() });
                }
                self.lower.push(Some(S::zero()));
                self.upper.push(None);
                self.val[self.n + i] = S::zero();
                self.val.push(-residuals[i].clone());
                self.basic[i] = art;
                artificials.push(art);
            }
        }
        self.row_of = vec![None; self.ncols];
        for (i, &b) in self.basic.iter().enumerate() {
            self.row_of[b] = Some(i);
        }
        self.tab = self.orig.clone();
        // re-reduce rows whose basic column is an artificial (coefficient -1)
        for i in 0..self.m {
            if self.basic[i] >= self.n + self.m {
                for j in 0..self.ncols {
                    self.tab[i][j] = -self.tab[i][j].clone();
                }
            }
        }
        artificials
    }

    /// Row prices y = c_B B^-1, read through the slack columns of the tableau.
    fn prices(&self) -> Vec<S> {
        (0..self.m)
            .map(|i| {
                let mut y = S::zero();
                for k in 0..self.m {
                    let cb = &self.cost[self.basic[k]];
                    if !cb.is_zero_tol() && !self.tab[k][self.n + i].is_zero_tol() {
                        y = y + cb.clone() * self.tab[k][self.n + i].clone();
                    }
                }
                y
            })
            .collect()
    }

    fn reduced_cost(&self, y: &[S], j: usize) -> S {
        let mut d = self.cost[j].clone();
        for i in 0..self.m {
            if !y[i].is_zero_tol() && !self.orig[i][j].is_zero_tol() {
                d = d - y[i].clone() * self.orig[i][j].clone();
            }
        }
        d
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let piv = self.tab[row][col].clone();
        for j in 0..self.ncols {
            if !self.tab[row][j].is_zero_tol() {
                self.tab[row][j] = self.tab[row][j].clone() / piv.clone();
            }
        }
        for i in 0..self.m {
            if i != row && !self.tab[i][col].is_zero_tol() {
                let factor = self.tab[i][col].clone();
                for j in 0..self.ncols {
                    if !self.tab[row][j].is_zero_tol() {
                        self.tab[i][j] =
                            self.tab[i][j].clone() - factor.clone() * self.tab[row][j].clone();
                    }
                }
                // eliminate residual noise on the pivot column
                self.tab[i][col] = S::zero();
            }
        }
        self.row_of[self.basic[row]] = None;
        self.basic[row] = col;
        self.row_of[col] = Some(row);
    }

    /// One Bland step. `val`, `basic` and `tab` stay consistent.
    fn step(&mut self) -> StepOutcome {
        if self.iterations >= self.limit {
            return StepOutcome::Limit;
        }
        self.iterations += 1;

        let y = self.prices();
        // entering: smallest eligible column index (Bland)
        let mut entering = None;
        for j in 0..self.ncols {
            if self.row_of[j].is_some() || self.is_fixed(j) {
                continue;
            }
            let d = self.reduced_cost(&y, j);
            let at_lower = self.lower[j].as_ref().is_some_and(|l| self.val[j] <= l.clone());
            let at_upper = self.upper[j].as_ref().is_some_and(|u| self.val[j] >= u.clone());
            let free = self.lower[j].is_none() && self.upper[j].is_none();
            if (at_lower || free) && d.is_neg_tol() {
                entering = Some((j, true));
                break;
            }
            if (at_upper || free) && d.is_pos_tol() {
                entering = Some((j, false));
                break;
            }
        }
        let Some((j, increasing)) = entering else {
            return StepOutcome::Optimal;
        };

        // ratio test: how far can val[j] move
        let mut best: Option<(S, usize)> = None; // (delta, basic row), row = usize::MAX for own bound
        if increasing {
            if let (Some(l), Some(u)) = (&self.lower[j], &self.upper[j]) {
                best = Some((u.clone() - l.clone(), usize::MAX));
            }
        } else if let (Some(l), Some(u)) = (&self.lower[j], &self.upper[j]) {
            best = Some((u.clone() - l.clone(), usize::MAX));
        }
        for i in 0..self.m {
            let t = self.tab[i][j].clone();
            if t.is_zero_tol() {
                continue;
            }
            let b = self.basic[i];
            // value of basic b moves at rate -sigma*t per unit of delta
            let rate = if increasing { -t } else { t };
            let limit = if rate.is_pos_tol() {
                self.upper[b]
                    .as_ref()
                    .map(|u| (u.clone() - self.val[b].clone()) / rate.clone())
            } else {
                self.lower[b]
                    .as_ref()
                    .map(|l| (self.val[b].clone() - l.clone()) / (-rate.clone()))
            };
            if let Some(mut delta) = limit {
                if delta.is_neg_tol() {
                    delta = S::zero(); // numerical guard; exact mode never hits it
                }
                // Bland tie-break: a strictly smaller ratio always wins; among
                // equal ratios prefer the smallest basic column id.
                let better = match &best {
                    None => true,
                    Some((d, r)) => {
                        if delta < d.clone() {
                            true
                        } else if delta == d.clone() && *r != usize::MAX {
                            self.basic[i] < self.basic[*r]
                        } else {
                            false
                        }
                    }
                };
                if better {
                    best = Some((delta, i));
                }
            }
        }

        let Some((delta, leave_row)) = best else {
            return StepOutcome::Unbounded;
        };

        // apply movement to basic values
        if !delta.is_zero_tol() {
            for i in 0..self.m {
                let t = self.tab[i][j].clone();
                if t.is_zero_tol() {
                    continue;
                }
                let b = self.basic[i];
                let change = if increasing {
                    -(t * delta.clone())
                } else {
                    t * delta.clone()
                };
                self.val[b] = self.val[b].clone() + change;
            }
            self.val[j] = if increasing {
                self.val[j].clone() + delta.clone()
            } else {
                self.val[j].clone() - delta.clone()
            };
        }

        if leave_row == usize::MAX {
            // bound flip, no basis change
            return StepOutcome::Progress;
        }

        // snap the leaving variable onto the bound it hit
        let b = self.basic[leave_row];
        let t = self.tab[leave_row][j].clone();
        let rate_pos = if increasing { (-t.clone()).is_pos_tol() } else { t.is_pos_tol() };
        if rate_pos {
            if let Some(u) = &self.upper[b] {
                self.val[b] = u.clone();
            }
        } else if let Some(l) = &self.lower[b] {
            self.val[b] = l.clone();
        }
        self.pivot(leave_row, j);
        StepOutcome::Progress
    }

    fn run(&mut self) -> StepOutcome {
        loop {
            match self.step() {
                StepOutcome::Progress => continue,
                other => return other,
            }
        }
    }

    fn objective_value(&self) -> S {
        let mut v = S::zero();
        for j in 0..self.ncols {
            if !self.cost[j].is_zero_tol() {
                v = v + self.cost[j].clone() * self.val[j].clone();
            }
        }
        v
    }
}

fn solve_generic<S: Scalar>(lp: &LpRelaxation, limit: usize) -> LpResult<S> {
    let mut eng: Engine<S> = Engine::new(lp, limit);
    let artificials = eng.install_start();
    let n = eng.n;
    let m = eng.m;

    let fail = |status: LpStatus| LpResult {
        status,
        primal: Vec::new(),
        dual_rows: Vec::new(),
        reduced_costs: Vec::new(),
        basis: Vec::new(),
        objective_value: None,
        farkas: None,
    };

    if !artificials.is_empty() {
        eng.cost = vec![S::zero(); eng.ncols];
        for &a in &artificials {
            eng.cost[a] = S::one();
        }
        match eng.run() {
            StepOutcome::Optimal => {}
            StepOutcome::Limit => return fail(LpStatus::IterationLimit),
            StepOutcome::Unbounded => unreachable!("phase-1 objective is bounded below"),
            StepOutcome::Progress => unreachable!(),
        }
        let infeas = eng.objective_value();
        if infeas.is_pos_tol() {
            // Farkas: lambda = -y from the phase-1 prices
            let y = eng.prices();
            let farkas: Vec<S> = y.into_iter().map(|v| -v).collect();
            let mut res = fail(LpStatus::Infeasible);
            res.farkas = Some(farkas);
            return res;
        }
        // drive basic artificials out or pin them
        for i in 0..m {
            if eng.basic[i] >= n + m {
                let col = (0..n + m).find(|&j| !eng.tab[i][j].is_zero_tol() && !eng.is_fixed(j));
                if let Some(j) = col {
                    eng.pivot(i, j);
                } // else: redundant row, the artificial stays basic at zero
            }
        }
        for &a in &artificials {
            eng.lower[a] = Some(S::zero());
            eng.upper[a] = Some(S::zero());
            eng.val[a] = S::zero();
        }
    }

    eng.cost = vec![S::zero(); eng.ncols];
    for j in 0..n {
        eng.cost[j] = S::from_rational(&lp.objective[j]);
    }
    match eng.run() {
        StepOutcome::Optimal => {}
        StepOutcome::Limit => return fail(LpStatus::IterationLimit),
        StepOutcome::Unbounded => return fail(LpStatus::Unbounded),
        StepOutcome::Progress => unreachable!(),
    }

    let y = eng.prices();
    let reduced: Vec<S> = (0..n).map(|j| eng.reduced_cost(&y, j)).collect();
    let basis: Vec<ColId> = eng
        .basic
        .iter()
        .enumerate()
        .map(|(row, &b)| {
            if b < n {
                ColId::Structural(b)
            } else if b < n + m {
                ColId::Slack(b - n)
            } else {
                // a pinned artificial on a redundant row stands in for the
                // row's slack; multipliers derived from it are heuristic
                // input only, so the sign flip is immaterial
                ColId::Slack(row)
            }
        })
        .collect();

    LpResult {
        status: LpStatus::Optimal,
        primal: eng.val[..n].to_vec(),
        dual_rows: y,
        reduced_costs: reduced,
        basis,
        objective_value: Some(eng.objective_value()),
        farkas: None,
    }
}

/// Exact solve. Optimal results are re-checked for exact primal feasibility
/// and exact strong duality; infeasible results carry a verified Farkas
/// vector.
pub fn solve_exact(lp: &LpRelaxation, iteration_limit: usize) -> LpResult<Rational> {
    let res = solve_generic::<Rational>(lp, iteration_limit);
    match res.status {
        LpStatus::Optimal => {
            assert_primal_feasible(lp, &res.primal);
            assert_strong_duality(lp, &res);
        }
        LpStatus::Infeasible => {
            let farkas = res.farkas.as_ref().expect("infeasible result has Farkas");
            assert_farkas_valid(lp, farkas);
        }
        _ => {}
    }
    res
}

/// Approximate solve; results are heuristic only and never carry validity.
pub fn solve_float(lp: &LpRelaxation, iteration_limit: usize) -> LpResult<f64> {
    solve_generic::<f64>(lp, iteration_limit)
}

fn assert_primal_feasible(lp: &LpRelaxation, x: &[Rational]) {
    for (i, row) in lp.rows.iter().enumerate() {
        let lhs: Rational = row
            .coeffs
            .iter()
            .map(|(j, c)| c * &x[*j])
            .fold(Rational::zero(), |a, b| a + b);
        assert!(lhs <= row.rhs, "optimal point violates row {i}");
    }
    for j in 0..lp.num_vars() {
        if let Some(l) = &lp.lower[j] {
            assert!(x[j] >= *l, "optimal point below lower bound of {j}");
        }
        if let Some(u) = &lp.upper[j] {
            assert!(x[j] <= *u, "optimal point above upper bound of {j}");
        }
    }
}

fn assert_strong_duality(lp: &LpRelaxation, res: &LpResult<Rational>) {
    let mut dual_obj: Rational = res
        .dual_rows
        .iter()
        .zip(&lp.rows)
        .map(|(y, r)| y * &r.rhs)
        .fold(Rational::zero(), |a, b| a + b);
    for j in 0..lp.num_vars() {
        let d = &res.reduced_costs[j];
        if d.is_positive() {
            let l = lp.lower[j]
                .as_ref()
                .expect("positive reduced cost needs a finite lower bound");
            dual_obj += d * l;
        } else if d.is_negative() {
            let u = lp.upper[j]
                .as_ref()
                .expect("negative reduced cost needs a finite upper bound");
            dual_obj += d * u;
        }
    }
    let primal_obj = res.objective_value.clone().unwrap();
    assert_eq!(primal_obj, dual_obj, "strong duality violated");
    for y in &res.dual_rows {
        assert!(!y.is_positive(), "row multiplier sign violated");
    }
}

fn assert_farkas_valid(lp: &LpRelaxation, farkas: &[Rational]) {
    // min over the box of (lambda^T A) x must exceed lambda^T b
    let mut agg: BTreeMap<usize, Rational> = BTreeMap::new();
    let mut rhs = Rational::zero();
    for (lam, row) in farkas.iter().zip(&lp.rows) {
        assert!(!lam.is_negative(), "Farkas multiplier sign violated");
        for (j, c) in &row.coeffs {
            *agg.entry(*j).or_insert_with(Rational::zero) += lam * c;
        }
        rhs += lam * &row.rhs;
    }
    let mut min_lhs = Rational::zero();
    for (j, g) in agg {
        if g.is_zero_tol() {
            continue;
        }
        let bound = if g.is_positive() {
            lp.lower[j].as_ref()
        } else {
            lp.upper[j].as_ref()
        };
        let b = bound.expect("Farkas aggregation touches an unbounded side");
        min_lhs += g * b;
    }
    assert!(min_lhs > rhs, "Farkas certificate does not refute the box");
}

/// Approximate `i`-th row of the basis inverse, by Gaussian elimination with
/// partial pivoting on the transposed basis matrix. `None` when numerically
/// singular. These are the aggregation multipliers for cut separation.
pub fn basis_inverse_row(lp: &LpRelaxation, basis: &[ColId], i: usize) -> Option<Vec<f64>> {
    let m = lp.rows.len();
    debug_assert_eq!(basis.len(), m);
    // B^T y = e_i  =>  columns of B become rows here
    let mut a = vec![vec![0.0f64; m + 1]; m];
    for (k, col) in basis.iter().enumerate() {
        match col {
            ColId::Structural(j) => {
                for (r, row) in lp.rows.iter().enumerate() {
                    if let Some(c) = row.coeffs.get(j) {
                        a[k][r] = round_nearest(c);
                    }
                }
            }
            ColId::Slack(r) => a[k][*r] = 1.0,
        }
    }
    a[i][m] = 1.0;

    for col in 0..m {
        let piv = (col..m).max_by(|&r1, &r2| {
            a[r1][col]
                .abs()
                .partial_cmp(&a[r2][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        let p = a[col][col];
        for j in col..=m {
            a[col][j] /= p;
        }
        for r in 0..m {
            if r != col && a[r][col] != 0.0 {
                let f = a[r][col];
                for j in col..=m {
                    a[r][j] -= f * a[col][j];
                }
            }
        }
    }
    Some((0..m).map(|r| a[r][m]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::parse_problem;
    use exactcuts_rational::{int, rat};

    fn lp_of(text: &str) -> LpRelaxation {
        LpRelaxation::from_problem(&parse_problem(text).unwrap())
    }

    #[test]
    fn trivial_bounded_minimum() {
        // min -x, x <= 3/2, x >= 0
        let lp = lp_of("VAR 1\nx 0 +inf cont\nOBJ min\nx -1\n\nCON 1\nr <= 3/2 x 1\n");
        let res = solve_exact(&lp, 1000);
        assert_eq!(res.status, LpStatus::Optimal);
        assert_eq!(res.primal[0], rat(3, 2));
        assert_eq!(res.objective_value.unwrap(), rat(-3, 2));

        let f = solve_float(&lp, 1000);
        assert_eq!(f.status, LpStatus::Optimal);
        assert!((f.primal[0] - 1.5).abs() < 1e-9);
    }

    #[test]
    fn three_row_relaxation_is_lp_feasible() {
        // the integer-infeasible instance has a feasible LP relaxation
        let lp = lp_of(
            "VAR 2\nx1 0 10 cont\nx2 0 10 cont\nOBJ min\n\nCON 3\nC1 >= 1 x1 2 x2 3\nC2 <= 2 x1 3 x2 -4\nC3 <= 3 x1 -1 x2 6\n",
        );
        let res = solve_exact(&lp, 1000);
        assert_eq!(res.status, LpStatus::Optimal);
    }

    #[test]
    fn contradictory_bounds_rows_give_farkas() {
        // x <= 0 and x >= 1 as rows
        let lp = lp_of(
            "VAR 1\nx -inf +inf cont\nOBJ min\n\nCON 2\nr1 <= 0 x 1\nr2 >= 1 x 1\n",
        );
        let res = solve_exact(&lp, 1000);
        assert_eq!(res.status, LpStatus::Infeasible);
        let f = res.farkas.unwrap();
        assert_eq!(f.len(), 2);
        // both rows participate with equal weight after scaling
        assert!(f[0].is_positive() && f[1].is_positive());
        assert_eq!(&f[0] / &f[1], int(1));
    }

    #[test]
    fn degenerate_duplicate_rows_terminate() {
        let lp = lp_of(
            "VAR 2\nx 0 5 cont\ny 0 5 cont\nOBJ min\nx -1\ny -1\n\nCON 3\nr1 <= 4 x 1 y 1\nr2 <= 4 x 1 y 1\nr3 <= 4 x 1 y 1\n",
        );
        let res = solve_exact(&lp, 10_000);
        assert_eq!(res.status, LpStatus::Optimal);
        assert_eq!(res.objective_value.unwrap(), int(-4));
        let f = solve_float(&lp, 10_000);
        assert_eq!(f.status, LpStatus::Optimal);
    }

    #[test]
    fn unbounded_detection() {
        let lp = lp_of("VAR 1\nx 0 +inf cont\nOBJ min\nx -1\n\nCON 0\n");
        assert_eq!(solve_exact(&lp, 1000).status, LpStatus::Unbounded);
    }

    #[test]
    fn equality_rows_and_negative_bounds() {
        // min x + y s.t. x + y = 2, -3 <= x <= 3, -3 <= y <= 3
        let lp = lp_of(
            "VAR 2\nx -3 3 cont\ny -3 3 cont\nOBJ min\nx 1\ny 1\n\nCON 1\nr = 2 x 1 y 1\n",
        );
        let res = solve_exact(&lp, 1000);
        assert_eq!(res.status, LpStatus::Optimal);
        assert_eq!(res.objective_value.unwrap(), int(2));
    }

    #[test]
    fn iteration_limit_reports() {
        let lp = lp_of(
            "VAR 2\nx 0 5 cont\ny 0 5 cont\nOBJ min\nx -1\ny -2\n\nCON 2\nr1 <= 4 x 1 y 1\nr2 <= 3 x 1 y -1\n",
        );
        assert_eq!(solve_exact(&lp, 1).status, LpStatus::IterationLimit);
    }

    #[test]
    fn basis_inverse_row_examples() {
        // identity basis
        let lp = lp_of(
            "VAR 2\nx 0 5 cont\ny 0 5 cont\nOBJ min\n\nCON 2\nr1 <= 4 x 1 y 1\nr2 <= 3 x 1 y -1\n",
        );
        let basis = vec![ColId::Slack(0), ColId::Slack(1)];
        assert_eq!(basis_inverse_row(&lp, &basis, 0).unwrap(), vec![1.0, 0.0]);

        // diagonal structural basis [[2,0],[0,4]]
        let lp = lp_of(
            "VAR 2\nx 0 5 cont\ny 0 5 cont\nOBJ min\n\nCON 2\nr1 <= 4 x 2\nr2 <= 3 y 4\n",
        );
        let basis = vec![ColId::Structural(0), ColId::Structural(1)];
        let row = basis_inverse_row(&lp, &basis, 1).unwrap();
        assert_eq!(row, vec![0.0, 0.25]);
    }

    // randomized cross-checks live in tests/random_battery.rs
    #[test]
    fn float_mode_matches_exact_on_small_lp() {
        let lp = lp_of(
            "VAR 3\nx 0 4 cont\ny 0 4 cont\nz -1 2 cont\nOBJ min\nx -2\ny -3\nz 1\n\nCON 3\nr1 <= 6 x 1 y 2 z -1\nr2 <= 5 x 2 y 1\nr3 >= -1 x -1 y 1 z 1\n",
        );
        let e = solve_exact(&lp, 10_000);
        let f = solve_float(&lp, 10_000);
        assert_eq!(e.status, LpStatus::Optimal);
        assert_eq!(f.status, LpStatus::Optimal);
        let ev = round_nearest(&e.objective_value.clone().unwrap());
        let fv = f.objective_value.unwrap();
        assert!(
            (ev - fv).abs() <= 1e-6 * (1.0 + ev.abs()),
            "exact {ev} vs float {fv}"
        );
    }
}
