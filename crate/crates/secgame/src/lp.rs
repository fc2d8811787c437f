//! Thin layer over the LP backend shared by the coverage oracles and the
//! deviation checks. Callers build a maximization problem, solve it, and
//! handle infeasible/unbounded outcomes explicitly where those are
//! meaningful results rather than errors.

use microlp::{ComparisonOp, OptimizationDirection, Problem, Solution, Variable};

use crate::error::{Error, Result};

pub(crate) type Var = Variable;

pub(crate) struct LpBuilder {
    problem: Problem,
}

pub(crate) enum LpOutcome {
    Optimal(Box<LpSolution>),
    Infeasible,
    Unbounded,
}

pub(crate) struct LpSolution {
    objective: f64,
    solution: Solution,
}

impl LpSolution {
    pub fn objective(&self) -> f64 {
        self.objective
    }

    pub fn value(&self, var: Var) -> f64 {
        self.solution[var]
    }
}

impl LpBuilder {
    pub fn maximize() -> Self {
        LpBuilder {
            problem: Problem::new(OptimizationDirection::Maximize),
        }
    }

    /// Adds a variable with the given objective coefficient and bounds.
    pub fn var(&mut self, obj: f64, lo: f64, hi: f64) -> Var {
        self.problem.add_var(obj, (lo, hi))
    }

    /// Adds a variable unbounded in both directions.
    pub fn free_var(&mut self, obj: f64) -> Var {
        self.var(obj, f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn ge(&mut self, terms: &[(Var, f64)], rhs: f64) {
        self.problem.add_constraint(terms, ComparisonOp::Ge, rhs);
    }

    pub fn le(&mut self, terms: &[(Var, f64)], rhs: f64) {
        self.problem.add_constraint(terms, ComparisonOp::Le, rhs);
    }

    pub fn eq(&mut self, terms: &[(Var, f64)], rhs: f64) {
        self.problem.add_constraint(terms, ComparisonOp::Eq, rhs);
    }

    pub fn solve(self) -> Result<LpOutcome> {
        match self.problem.solve() {
            Ok(solution) => Ok(LpOutcome::Optimal(Box::new(LpSolution {
                objective: solution.objective(),
                solution,
            }))),
            Err(microlp::Error::Infeasible) => Ok(LpOutcome::Infeasible),
            Err(microlp::Error::Unbounded) => Ok(LpOutcome::Unbounded),
            Err(microlp::Error::InternalError(msg)) => Err(Error::Solver(msg)),
        }
    }

    /// Solves a program that is feasible and bounded by construction;
    /// any other outcome is reported as a solver failure.
    pub fn solve_expect_optimal(self, what: &str) -> Result<LpSolution> {
        match self.solve()? {
            LpOutcome::Optimal(sol) => Ok(*sol),
            LpOutcome::Infeasible => Err(Error::Solver(format!("{what}: unexpectedly infeasible"))),
            LpOutcome::Unbounded => Err(Error::Solver(format!("{what}: unexpectedly unbounded"))),
        }
    }
}

/// Clamps the tiny negative values the solver can emit for quantities
/// that are non-negative by construction.
pub(crate) fn clamp_tiny_negative(x: f64) -> f64 {
    // `x <= 0.0` (not `< 0.0`) so that an exact -0.0 also normalizes to
    // positive zero.
    if x <= 0.0 && x > -1e-9 {
        0.0
    } else {
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_a_small_maximin_program() {
        // max h subject to x1 + x2 = 1, x >= 0, and per-target coverage
        // (x1, x2) >= h on both targets: optimum is h = 1/2.
        let mut lp = LpBuilder::maximize();
        let h = lp.free_var(1.0);
        let x1 = lp.var(0.0, 0.0, f64::INFINITY);
        let x2 = lp.var(0.0, 0.0, f64::INFINITY);
        lp.eq(&[(x1, 1.0), (x2, 1.0)], 1.0);
        lp.ge(&[(x1, 1.0), (h, -1.0)], 0.0);
        lp.ge(&[(x2, 1.0), (h, -1.0)], 0.0);
        let sol = lp.solve_expect_optimal("test").unwrap();
        assert!((sol.objective() - 0.5).abs() < 1e-9);
        assert!((sol.value(x1) - 0.5).abs() < 1e-9);
    }

    #[test]
    fn reports_infeasible_outcomes() {
        let mut lp = LpBuilder::maximize();
        let x = lp.var(1.0, 0.0, 1.0);
        lp.ge(&[(x, 1.0)], 2.0);
        match lp.solve().unwrap() {
            LpOutcome::Infeasible => {}
            _ => panic!("expected infeasible"),
        }
    }

    #[test]
    fn reports_unbounded_outcomes() {
        let mut lp = LpBuilder::maximize();
        let _x = lp.var(1.0, 0.0, f64::INFINITY);
        match lp.solve().unwrap() {
            LpOutcome::Unbounded => {}
            _ => panic!("expected unbounded"),
        }
    }
}
