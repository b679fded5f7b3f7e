//! Exact linear-program solving and small-scale mixed-integer solving.
//!
//! The built-in engine is a dense two-phase primal simplex
//! ([`simplex`]) with a best-first branch-and-bound layer on top
//! ([`branch_bound`]). It is sized for the models this crate generates
//! (hundreds of variables, up to roughly a hundred binaries), not for
//! industrial MILP workloads. The engine sits behind [`SolverBackend`] so an
//! external-solver adapter can replace it without touching any caller.
//!
//! Conventions:
//! * every constraint is `coeffs . x  (<= | = | >=)  rhs`;
//! * variable bounds may be infinite on either side;
//! * duals are reported for the original constraint rows, in the sign
//!   convention where the dual objective of a feasible dual equals the primal
//!   objective at optimality.

mod branch_bound;
mod lp_format;
mod simplex;

pub use lp_format::{lp_to_lp_format, milp_to_lp_format};

use crate::{Error, Result};
use std::collections::BTreeSet;

/// Direction of optimization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum ObjectiveSense {
    Minimize,
    Maximize,
}

/// Relation of a linear constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

/// One linear constraint `coeffs . x (relation) rhs`.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Constraint {
    pub fn new(coeffs: Vec<f64>, relation: Relation, rhs: f64) -> Constraint {
        Constraint {
            coeffs,
            relation,
            rhs,
        }
    }
}

/// A linear program over dense coefficient vectors.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct LinearProgram {
    pub sense: ObjectiveSense,
    /// Objective coefficients, one per variable.
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    /// Per-variable `(lower, upper)`; either side may be infinite.
    pub bounds: Vec<(f64, f64)>,
}

impl LinearProgram {
    /// A program with `n` variables bounded below by zero and no constraints.
    pub fn new(sense: ObjectiveSense, objective: Vec<f64>) -> LinearProgram {
        let n = objective.len();
        LinearProgram {
            sense,
            objective,
            constraints: Vec::new(),
            bounds: vec![(0.0, f64::INFINITY); n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_constraint(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) {
        self.constraints
            .push(Constraint::new(coeffs, relation, rhs));
    }

    /// Checks the type invariants: matching coefficient lengths, finite
    /// coefficients and ordered bounds.
    pub fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.bounds.len() != n {
            return Err(Error::model(format!(
                "bounds length {} does not match variable count {n}",
                self.bounds.len()
            )));
        }
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(Error::model("non-finite objective coefficient"));
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != n {
                return Err(Error::model(format!(
                    "constraint {i} has {} coefficients, expected {n}",
                    c.coeffs.len()
                )));
            }
            if c.coeffs.iter().any(|v| !v.is_finite()) || !c.rhs.is_finite() {
                return Err(Error::model(format!(
                    "constraint {i} has a non-finite entry"
                )));
            }
        }
        for (j, &(lo, hi)) in self.bounds.iter().enumerate() {
            if lo.is_nan() || hi.is_nan() || lo > hi {
                return Err(Error::model(format!(
                    "variable {j} has invalid bounds ({lo}, {hi})"
                )));
            }
        }
        Ok(())
    }

    /// Returns whether `point` satisfies every constraint and bound within
    /// `tol`.
    pub fn is_feasible(&self, point: &[f64], tol: f64) -> bool {
        if point.len() != self.num_vars() {
            return false;
        }
        for (x, &(lo, hi)) in point.iter().zip(&self.bounds) {
            if *x < lo - tol || *x > hi + tol {
                return false;
            }
        }
        self.constraints.iter().all(|c| {
            let lhs: f64 = c.coeffs.iter().zip(point).map(|(a, x)| a * x).sum();
            match c.relation {
                Relation::Le => lhs <= c.rhs + tol,
                Relation::Eq => (lhs - c.rhs).abs() <= tol,
                Relation::Ge => lhs >= c.rhs - tol,
            }
        })
    }
}

/// A linear program plus a set of variables constrained to {0, 1}.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct MixedIntegerProgram {
    pub base: LinearProgram,
    pub binary_indices: BTreeSet<usize>,
}

impl MixedIntegerProgram {
    pub fn new(base: LinearProgram, binary_indices: impl IntoIterator<Item = usize>) -> Self {
        MixedIntegerProgram {
            base,
            binary_indices: binary_indices.into_iter().collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        let n = self.base.num_vars();
        for &j in &self.binary_indices {
            if j >= n {
                return Err(Error::model(format!(
                    "binary index {j} out of range (vars: {n})"
                )));
            }
            let (lo, hi) = self.base.bounds[j];
            if lo < -1e-12 || hi > 1.0 + 1e-12 {
                return Err(Error::model(format!(
                    "binary variable {j} must carry bounds within [0, 1], got ({lo}, {hi})"
                )));
            }
        }
        Ok(())
    }
}

/// Classification of a solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Outcome of [`solve_lp`] or [`solve_milp`].
///
/// `objective_value` and `primal` are meaningful only when
/// `status == Optimal`; `dual` and `dual_objective` are present only for LP
/// solves.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub objective_value: f64,
    pub primal: Vec<f64>,
    /// One multiplier per original constraint row (LP only).
    pub dual: Option<Vec<f64>>,
    /// Objective of the dual solution, including bound terms; equals
    /// `objective_value` at optimality up to roundoff (LP only).
    pub dual_objective: Option<f64>,
}

impl SolveResult {
    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }

    pub(crate) fn non_optimal(status: SolveStatus) -> SolveResult {
        SolveResult {
            status,
            objective_value: f64::NAN,
            primal: Vec::new(),
            dual: None,
            dual_objective: None,
        }
    }
}

/// Parameters for the branch-and-bound MILP solve.
#[derive(Debug, Clone)]
pub struct MilpParams {
    /// Maximum number of explored nodes before giving up with
    /// [`Error::Resource`].
    pub node_limit: usize,
    /// Absolute optimality gap at which the search stops.
    pub gap_tolerance: f64,
    /// Known feasible solution used as an initial upper bound. Must be
    /// feasible for the model; the solver verifies and otherwise ignores it.
    pub initial_incumbent: Option<Vec<f64>>,
}

impl Default for MilpParams {
    fn default() -> Self {
        MilpParams {
            node_limit: 400_000,
            gap_tolerance: 1e-6,
            initial_incumbent: None,
        }
    }
}

/// Numeric tolerances shared by the simplex and branch-and-bound layers.
pub mod tol {
    /// Feasibility tolerance for returned primal points.
    pub const FEASIBILITY: f64 = 1e-9;
    /// A binary is considered integral when within this distance of 0 or 1.
    pub const INTEGRALITY: f64 = 1e-7;
    /// Absolute optimality gap for MILP solves.
    pub const GAP: f64 = 1e-6;
    /// Pivot magnitude below which a tableau entry is treated as zero.
    pub const PIVOT: f64 = 1e-9;
}

/// Pluggable solving engine. The default implementation is the built-in
/// simplex / branch-and-bound pair; an adapter for an external solver can be
/// swapped in behind the same contracts.
pub trait SolverBackend {
    fn solve_lp(&self, lp: &LinearProgram) -> Result<SolveResult>;
    fn solve_milp(&self, mip: &MixedIntegerProgram, params: &MilpParams) -> Result<SolveResult>;
}

/// The built-in dense simplex and branch-and-bound engine.
#[derive(Debug, Clone, Copy, Default)]
pub struct BuiltinSolver;

impl SolverBackend for BuiltinSolver {
    fn solve_lp(&self, lp: &LinearProgram) -> Result<SolveResult> {
        lp.validate()?;
        simplex::solve(lp)
    }

    fn solve_milp(&self, mip: &MixedIntegerProgram, params: &MilpParams) -> Result<SolveResult> {
        mip.validate()?;
        branch_bound::solve(mip, params)
    }
}

/// Solves a linear program with the built-in engine.
///
/// The result is deterministic for identical inputs. Status is classified as
/// optimal, infeasible or unbounded; cycling beyond the iteration cap
/// surfaces as [`Error::SolverFailure`].
pub fn solve_lp(lp: &LinearProgram) -> Result<SolveResult> {
    BuiltinSolver.solve_lp(lp)
}

/// Solves a mixed-integer program by branch and bound.
///
/// On success the objective is within `params.gap_tolerance` of the true
/// optimum and binary variables are exactly 0 or 1 in the returned primal.
/// Exhausting `params.node_limit` returns [`Error::Resource`] carrying the
/// best incumbent found.
pub fn solve_milp(mip: &MixedIntegerProgram, params: &MilpParams) -> Result<SolveResult> {
    BuiltinSolver.solve_milp(mip, params)
}

#[cfg(test)]
mod tests;
