//! Pseudoquadratic optimization under two-sided constraints:
//!
//! minimize `x⁻ ⊗ C ⊗ x ⊕ x⁻ ⊗ p ⊕ q⁻ ⊗ x` subject to `U ⊗ x ⊕ b <= V ⊗ x ⊕ d`.
//!
//! The term `x⁻ ⊗ C ⊗ x <= λ` reads `C ⊗ x <= λ ⊗ x` and adds the block
//! `[C -∞] / [λ⊗I -∞]` to the pseudolinear parametric system. Optimal values
//! of integer instances have denominators at most `n + 1`.
//!
//! ```
//! use tropopt::pseudolinear::PseudolinearProblem;
//! use tropopt::pseudoquadratic::{bisection_solve_quad, PseudoquadraticProblem};
//! use tropopt::{ExtScalar as E, Mode, SolveOptions, TropMatrix};
//!
//! let base = PseudolinearProblem::new(
//!     TropMatrix::max_plus(vec![]),
//!     TropMatrix::max_plus(vec![]),
//!     vec![],
//!     vec![],
//!     vec![E::NegInf, E::NegInf],
//!     vec![E::PosInf, E::PosInf],
//! )
//! .unwrap();
//! // x_2 - x_1 + 1 and x_1 - x_2 + 2: a cycle of mean 3/2
//! let c = TropMatrix::max_plus(vec![vec![E::NegInf, E::int(1)], vec![E::int(2), E::NegInf]]);
//! let prob = PseudoquadraticProblem::new(base, c).unwrap();
//! let out = bisection_solve_quad(&prob, &Mode::Integer, SolveOptions::default()).unwrap();
//! assert_eq!(out.lambda().unwrap().to_string(), "3/2");
//! ```

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::family::{self, Bounds, Family, StrategyValue};
use crate::matrix::{TropMatrix, Typing};
use crate::mpg::{Strategy, TwoSidedSystem};
use crate::outcome::{Mode, NewtonMode, SolveOptions, SolveOutcome};
use crate::pseudolinear::{
    certify_optimal_system, certify_unbounded_system, check_variables, constraint_system, linear_objective,
    parametric_rows, unconstrained_optimum, PseudolinearProblem,
};
use crate::scalar::{common_denominator, int, ExtScalar, Rational};

/// A pseudolinear problem together with the `n x n` matrix `C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudoquadraticProblem {
    base: PseudolinearProblem,
    c: TropMatrix,
}

impl PseudoquadraticProblem {
    pub fn new(base: PseudolinearProblem, c: TropMatrix) -> Result<Self> {
        let n = base.vars();
        if c.typing() != Typing::MaxPlus {
            return Err(Error::TypingMismatch("C must be max-plus".into()));
        }
        if c.rows() != n || c.cols() != n {
            return Err(Error::DimensionMismatch(format!("C is {}x{}, expected {n}x{n}", c.rows(), c.cols())));
        }
        if c.entries().contains(&ExtScalar::PosInf) {
            return Err(Error::IllegalInfinity("C has +inf".into()));
        }
        Ok(PseudoquadraticProblem { base, c })
    }

    pub fn base(&self) -> &PseudolinearProblem {
        &self.base
    }

    pub fn c(&self) -> &TropMatrix {
        &self.c
    }

    pub fn rows(&self) -> usize {
        self.base.rows()
    }

    pub fn vars(&self) -> usize {
        self.base.vars()
    }

    fn finite_data(&self) -> impl Iterator<Item = &Rational> {
        self.base.finite_data().chain(self.c.entries().iter().filter_map(ExtScalar::finite))
    }

    fn quadratic_rows(&self, lambda: &Rational) -> Vec<(Vec<ExtScalar>, Vec<ExtScalar>)> {
        let n = self.vars();
        (0..n)
            .map(|i| {
                let mut a = self.c.row(i).to_vec();
                a.push(ExtScalar::NegInf);
                let mut b = vec![ExtScalar::NegInf; n + 1];
                b[i] = ExtScalar::Finite(lambda.clone());
                (a, b)
            })
            .collect()
    }
}

/// `max_ij (c_ij + x_j - x_i)` together with the pseudolinear objective.
pub fn objective_quad(prob: &PseudoquadraticProblem, x: &[Rational]) -> Result<ExtScalar> {
    if x.len() != prob.vars() {
        return Err(Error::DimensionMismatch(format!("x has length {}, expected {}", x.len(), prob.vars())));
    }
    Ok(prob.objective_at(x))
}

/// The parametric system with `m + 2n + 1` rows and `n + 1` columns.
///
/// Fails with `IsolatedNode` when a variable appears nowhere.
pub fn parametric_game_quad(prob: &PseudoquadraticProblem, lambda: &Rational) -> Result<TwoSidedSystem> {
    let n = prob.vars();
    check_variables(&prob.base, |j| {
        (0..n).any(|k| prob.c.get(j, k).is_finite() || prob.c.get(k, j).is_finite())
    })?;
    Ok(prob.system_at(lambda))
}

/// `Φ(λ)` of the quadratic parametric game.
pub fn phi_quad(prob: &PseudoquadraticProblem, lambda: &Rational) -> Result<ExtScalar> {
    family::phi(prob, lambda)
}

/// Lower bound `ρ(C) ⊕ (q⁻ ⊗ p)^{⊗1/2}` and the objective at a feasible witness.
pub fn bounds_quad(prob: &PseudoquadraticProblem) -> Result<Bounds> {
    family::bounds(prob)
}

/// Bisection on the grid of rationals with denominator at most `n + 1`.
pub fn bisection_solve_quad(prob: &PseudoquadraticProblem, mode: &Mode, opts: SolveOptions) -> Result<SolveOutcome> {
    family::bisection(prob, mode, opts)
}

/// Newton iterations; each strategy's least root is found by bisection on
/// its one-player game.
pub fn newton_solve_quad(
    prob: &PseudoquadraticProblem,
    mode: &NewtonMode,
    opts: SolveOptions,
) -> Result<SolveOutcome> {
    family::newton(prob, mode, opts)
}

/// The probe offset `1/(n+1)³` divided by the common data denominator.
pub fn default_probe_quad(prob: &PseudoquadraticProblem) -> Rational {
    let den = Rational::from_integer(common_denominator(prob.finite_data()));
    let k = (prob.vars() + 1) as i64;
    Rational::new(1.into(), (k * k * k).into()) / den
}

/// See [`crate::pseudolinear::certify_optimal`]; the `C` rows count as objective rows.
pub fn certify_optimal_quad(prob: &PseudoquadraticProblem, lambda_star: &Rational, tau: &[Option<usize>]) -> Result<bool> {
    certify_optimal_system(&prob.system_at(lambda_star), prob.rows(), tau)
}

/// See [`crate::pseudolinear::certify_unbounded`].
pub fn certify_unbounded_quad(prob: &PseudoquadraticProblem, sigma: &[Option<usize>]) -> Result<bool> {
    certify_unbounded_system(&prob.system_at(&Rational::zero()), prob.rows(), sigma)
}

/// A Min strategy to pass to [`certify_optimal_quad`].
pub fn optimality_witness_quad(prob: &PseudoquadraticProblem, lambda_star: &Rational) -> Result<Strategy> {
    crate::pseudolinear::optimality_witness_for(prob, lambda_star)
}

/// A Max strategy to pass to [`certify_unbounded_quad`].
pub fn unboundedness_witness_quad(prob: &PseudoquadraticProblem) -> Result<Strategy> {
    crate::pseudolinear::unboundedness_witness_for(prob)
}

impl Family for PseudoquadraticProblem {
    fn rows(&self) -> usize {
        self.base.rows()
    }

    fn vars(&self) -> usize {
        self.base.vars()
    }

    fn constraints(&self) -> TwoSidedSystem {
        constraint_system(&self.base)
    }

    fn system_at(&self, lambda: &Rational) -> TwoSidedSystem {
        parametric_rows(&self.base, lambda, &self.quadratic_rows(lambda))
    }

    fn objective_at(&self, x: &[Rational]) -> ExtScalar {
        let mut best = linear_objective(self.base.p(), self.base.q(), x);
        for i in 0..self.vars() {
            for (j, cij) in self.c.row(i).iter().enumerate() {
                if let Some(c) = cij.finite() {
                    best = best.sup(&ExtScalar::Finite(c + &x[j] - &x[i]));
                }
            }
        }
        best
    }

    fn lower(&self) -> ExtScalar {
        let rho = self.c.max_cycle_mean().expect("C is square max-plus");
        rho.sup(&unconstrained_optimum(self.base.p(), self.base.q()))
    }

    fn grid(&self) -> u64 {
        self.vars() as u64 + 1
    }

    fn is_integral(&self) -> bool {
        self.finite_data().all(|v| v.is_integer())
    }

    fn max_abs(&self) -> Rational {
        self.finite_data().map(|v| v.abs()).max().unwrap_or_else(|| int(0))
    }

    fn constraint_mass(&self) -> Rational {
        Family::constraint_mass(&self.base)
    }

    fn evaluate(&self, sigma: &Strategy, probe: &Rational, cur: &Rational, mode: &NewtonMode)
        -> Result<StrategyValue> {
        family::strategy_value_by_bisection(self, sigma, probe, cur, mode)
    }
}
