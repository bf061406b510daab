//! Sparse linear programs, a bounded-variable revised simplex solver and a
//! brute-force vertex-enumeration oracle for small instances.
//!
//! Every program is a minimization over variables with finite lower bounds
//! and optional upper bounds.

mod mps;
mod oracle;
mod simplex;

use std::fmt;

use thiserror::Error;

pub use mps::write_mps;
pub use oracle::{enumerate_oracle, OracleError, ORACLE_MAX_ROWS, ORACLE_MAX_VARS};
pub use simplex::solve;

/// Sparse vector as `(index, value)` pairs.
pub type SparseVec = Vec<(usize, f64)>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
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

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub coeffs: SparseVec,
    pub sense: Sense,
    pub rhs: f64,
    pub name: Option<String>,
}

impl Row {
    pub fn new(coeffs: SparseVec, sense: Sense, rhs: f64) -> Self {
        Self {
            coeffs,
            sense,
            rhs,
            name: None,
        }
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn activity(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().map(|&(j, a)| a * x[j]).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub lower: f64,
    /// `f64::INFINITY` when unbounded above.
    pub upper: f64,
}

impl Bounds {
    pub const NON_NEGATIVE: Bounds = Bounds {
        lower: 0.0,
        upper: f64::INFINITY,
    };

    pub fn new(lower: f64, upper: f64) -> Self {
        Self { lower, upper }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("row {row} references variable {var} but the program has {num_vars} variables")]
    VariableOutOfRange {
        row: usize,
        var: usize,
        num_vars: usize,
    },
    #[error("variable {var} has invalid bounds")]
    InvalidBounds { var: usize },
    #[error("non-finite coefficient in {0}")]
    NonFinite(String),
}

/// A minimization problem `min cᵀx` subject to rows and variable bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: SparseVec,
    pub rows: Vec<Row>,
    pub bounds: Vec<Bounds>,
    /// Either empty or one label per variable.
    pub var_names: Vec<String>,
}

impl LinearProgram {
    /// A program with `num_vars` non-negative variables and zero objective.
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            objective: Vec::new(),
            rows: Vec::new(),
            bounds: vec![Bounds::NON_NEGATIVE; num_vars],
            var_names: Vec::new(),
        }
    }

    pub fn with_objective(mut self, objective: SparseVec) -> Self {
        self.objective = objective;
        self
    }

    pub fn add_row(&mut self, row: Row) -> usize {
        self.rows.push(row);
        self.rows.len() - 1
    }

    pub fn set_bounds(&mut self, var: usize, lower: f64, upper: f64) {
        self.bounds[var] = Bounds { lower, upper };
    }

    /// Dense objective vector; duplicate entries are summed.
    pub fn objective_dense(&self) -> Vec<f64> {
        let mut c = vec![0.0; self.num_vars];
        for &(j, v) in &self.objective {
            c[j] += v;
        }
        c
    }

    pub fn objective_at(&self, x: &[f64]) -> f64 {
        self.objective.iter().map(|&(j, c)| c * x[j]).sum()
    }

    pub fn var_name(&self, j: usize) -> String {
        self.var_names
            .get(j)
            .cloned()
            .unwrap_or_else(|| format!("x{j}"))
    }

    pub fn row_name(&self, i: usize) -> String {
        self.rows[i].name.clone().unwrap_or_else(|| format!("r{i}"))
    }

    pub fn max_abs_rhs(&self) -> f64 {
        self.rows.iter().map(|r| r.rhs.abs()).fold(0.0, f64::max)
    }

    /// Checks structural invariants: indices in range, finite data, lower ≤ upper.
    pub fn check(&self) -> Result<(), LpError> {
        if self.bounds.len() != self.num_vars {
            return Err(LpError::InvalidBounds {
                var: self.bounds.len().min(self.num_vars),
            });
        }
        for &(j, c) in &self.objective {
            if j >= self.num_vars {
                return Err(LpError::VariableOutOfRange {
                    row: usize::MAX,
                    var: j,
                    num_vars: self.num_vars,
                });
            }
            if !c.is_finite() {
                return Err(LpError::NonFinite("objective".into()));
            }
        }
        for (i, row) in self.rows.iter().enumerate() {
            if !row.rhs.is_finite() {
                return Err(LpError::NonFinite(self.row_name(i)));
            }
            for &(j, a) in &row.coeffs {
                if j >= self.num_vars {
                    return Err(LpError::VariableOutOfRange {
                        row: i,
                        var: j,
                        num_vars: self.num_vars,
                    });
                }
                if !a.is_finite() {
                    return Err(LpError::NonFinite(self.row_name(i)));
                }
            }
        }
        for (j, b) in self.bounds.iter().enumerate() {
            if !b.lower.is_finite()
                || b.upper.is_nan()
                || b.lower > b.upper
                || b.upper == f64::NEG_INFINITY
            {
                return Err(LpError::InvalidBounds { var: j });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
    /// Iteration budget exhausted; `x` is the last point reached.
    IterationLimit,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Optimal => "optimal",
            Status::Infeasible => "infeasible",
            Status::Unbounded => "unbounded",
            Status::IterationLimit => "iteration limit",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: Status,
    pub x: Vec<f64>,
    pub objective_value: f64,
    pub iterations: usize,
    pub max_primal_infeasibility: f64,
    /// Rows supporting the infeasibility certificate, when infeasible.
    pub infeasible_rows: Vec<usize>,
    /// Variables moving along the improving ray, when unbounded.
    pub unbounded_ray: Vec<usize>,
    /// Whether `x` satisfies all rows and bounds (relevant for `IterationLimit`).
    pub feasible: bool,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == Status::Optimal
    }

    pub(crate) fn without_point(status: Status, num_vars: usize) -> Self {
        Self {
            status,
            x: vec![0.0; num_vars],
            objective_value: match status {
                Status::Unbounded => f64::NEG_INFINITY,
                _ => f64::NAN,
            },
            iterations: 0,
            max_primal_infeasibility: f64::NAN,
            infeasible_rows: Vec::new(),
            unbounded_ray: Vec::new(),
            feasible: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverSettings {
    /// Primal feasibility tolerance on scaled rows.
    pub primal_tol: f64,
    /// Reduced-cost optimality tolerance on the normalized objective.
    pub optimality_tol: f64,
    /// Smallest pivot element accepted in the ratio test.
    pub pivot_tol: f64,
    /// `None` means `50·(rows + vars) + 1000`.
    pub max_iterations: Option<usize>,
    /// Consecutive degenerate pivots before switching to Bland's rule.
    pub stall_threshold: usize,
    /// Pivots between refactorizations of the basis inverse.
    pub refactor_interval: usize,
    pub scaling: bool,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            primal_tol: 1e-7,
            optimality_tol: 1e-9,
            pivot_tol: 1e-9,
            max_iterations: None,
            stall_threshold: 50,
            refactor_interval: 64,
            scaling: true,
        }
    }
}

/// Signed violations of every row and bound at a point. Positive entries are
/// violations; non-positive entries are satisfied (negative = slack).
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityReport {
    pub row_violations: Vec<f64>,
    pub bound_violations: Vec<f64>,
    pub objective: f64,
}

impl FeasibilityReport {
    pub fn max_row_violation(&self) -> f64 {
        self.row_violations.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_bound_violation(&self) -> f64 {
        self.bound_violations.iter().copied().fold(0.0, f64::max)
    }

    /// Largest positive violation, or zero.
    pub fn max_violation(&self) -> f64 {
        self.max_row_violation().max(self.max_bound_violation())
    }

    pub fn is_feasible(&self, tol: f64) -> bool {
        self.max_violation() <= tol
    }

    /// Indices of rows violated by more than `tol`.
    pub fn violated_rows(&self, tol: f64) -> Vec<usize> {
        self.row_violations
            .iter()
            .enumerate()
            .filter(|(_, &v)| v > tol)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Evaluates all rows, bounds and the objective at `x`.
pub fn check_solution(lp: &LinearProgram, x: &[f64]) -> FeasibilityReport {
    assert_eq!(x.len(), lp.num_vars, "point dimension mismatch");
    let row_violations = lp
        .rows
        .iter()
        .map(|row| {
            let ax = row.activity(x);
            match row.sense {
                Sense::Le => ax - row.rhs,
                Sense::Ge => row.rhs - ax,
                Sense::Eq => (ax - row.rhs).abs(),
            }
        })
        .collect();
    let bound_violations = lp
        .bounds
        .iter()
        .zip(x)
        .map(|(b, &v)| (b.lower - v).max(v - b.upper))
        .collect();
    FeasibilityReport {
        row_violations,
        bound_violations,
        objective: lp.objective_at(x),
    }
}

/// Tolerance used for "feasible at optimum" checks: `1e-6·(1 + max |rhs|)`.
pub fn feasibility_tolerance(lp: &LinearProgram) -> f64 {
    1e-6 * (1.0 + lp.max_abs_rhs())
}
