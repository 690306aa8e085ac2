//! Solver configuration and results shared by both problem families.

use crate::scalar::{ExtScalar, Rational};

/// Arithmetic regime of the bisection solvers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Integer data; iterates stay on the grid of admissible optima and the
    /// result is exact.
    Integer,
    /// Rational data; stops once the bracket is narrower than `tol`.
    Real { tol: Rational },
}

/// Arithmetic regime of the Newton solvers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NewtonMode {
    /// Integer data; strategies are taken at the grid point just below the iterate.
    Integer,
    /// Rational data; strategies are taken at the iterate minus `eps`.
    RealProbe { eps: Rational },
}

/// How a solve ended.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    /// `x` is feasible and `objective(x) == lambda`.
    Optimal { lambda: Rational, x: Vec<Rational> },
    /// Feasible, with objective values arbitrarily close to `-inf`.
    Unbounded,
    /// The constraints admit no finite solution.
    Infeasible,
}

/// One step of a solver run.
///
/// Bisection records each probed `lambda` with `Φ(lambda)`. Newton records
/// each iterate `lambda` with the value `min{λ : Φ^σ(λ) >= 0}` of the
/// strategy taken just below it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    pub lambda: Rational,
    pub value: ExtScalar,
}

/// Result of a solve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveOutcome {
    pub status: Status,
    /// Bisection: passes through the bracketing loop. Newton: strategy evaluations.
    pub iterations: usize,
    /// Empty unless tracing was requested.
    pub trace: Vec<TraceEntry>,
}

impl SolveOutcome {
    pub(crate) fn new(status: Status, iterations: usize, trace: Vec<TraceEntry>) -> Self {
        SolveOutcome { status, iterations, trace }
    }

    /// The optimal value, if any.
    pub fn lambda(&self) -> Option<&Rational> {
        match &self.status {
            Status::Optimal { lambda, .. } => Some(lambda),
            _ => None,
        }
    }

    /// The optimal point, if any.
    pub fn x(&self) -> Option<&[Rational]> {
        match &self.status {
            Status::Optimal { x, .. } => Some(x),
            _ => None,
        }
    }
}

/// Extra solver output.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveOptions {
    /// Record a [`TraceEntry`] per iteration. Bisection then computes exact
    /// `Φ` values instead of only their signs.
    pub trace: bool,
}
