//! Pseudolinear optimization under two-sided constraints:
//!
//! minimize `x⁻ ⊗ p ⊕ q⁻ ⊗ x` subject to `U ⊗ x ⊕ b <= V ⊗ x ⊕ d`.
//!
//! The objective is at most `λ` at a feasible `x` iff the parametric system
//! `A ⊗ (y, t) <= B(λ) ⊗ (y, t)` with
//!
//! ```text
//! A = [U  b ]      B(λ) = [V    d ]
//!     [-∞ p ]             [λ⊗I -∞ ]
//!     [q⁻ -∞]             [-∞   λ ]
//! ```
//!
//! has a finite solution, which happens iff `Φ(λ) >= 0`, `Φ` the least game
//! value. The optimum is the least root of the non-decreasing function `Φ`.
//!
//! ```
//! use tropopt::pseudolinear::{bisection_solve, PseudolinearProblem};
//! use tropopt::{ExtScalar as E, Mode, SolveOptions, TropMatrix};
//!
//! // minimize max(-x, x - 1) with no constraints
//! let prob = PseudolinearProblem::new(
//!     TropMatrix::max_plus(vec![]),
//!     TropMatrix::max_plus(vec![]),
//!     vec![],
//!     vec![],
//!     vec![E::int(0)],
//!     vec![E::int(1)],
//! )
//! .unwrap();
//! let out = bisection_solve(&prob, &Mode::Integer, SolveOptions::default()).unwrap();
//! assert_eq!(out.lambda().unwrap().to_string(), "-1/2");
//! ```

mod alcoved;
mod certificate;

pub use alcoved::{reduce_by_strategy, solve_alcoved, AlcovedProblem};
pub use certificate::{certify_optimal, certify_unbounded, optimality_witness, unboundedness_witness};
pub(crate) use certificate::{
    certify_optimal_system, certify_unbounded_system, optimality_witness_for, unboundedness_witness_for,
};

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::family::{self, Family, StrategyValue};
pub use crate::family::Bounds;
use crate::matrix::{TropMatrix, Typing};
use crate::mpg::{Strategy, TwoSidedSystem};
use crate::outcome::{Mode, NewtonMode, SolveOptions, SolveOutcome};
use crate::scalar::{int, ExtScalar, Rational};

/// The data `U, V, b, d, p, q` of a pseudolinear problem with `m`
/// constraints in `n` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudolinearProblem {
    u: TropMatrix,
    v: TropMatrix,
    b: Vec<ExtScalar>,
    d: Vec<ExtScalar>,
    p: Vec<ExtScalar>,
    q: Vec<ExtScalar>,
}

fn no_pos_inf(name: &str, xs: &[ExtScalar]) -> Result<()> {
    match xs.iter().position(|v| *v == ExtScalar::PosInf) {
        Some(k) => Err(Error::IllegalInfinity(format!("{name} has +inf at position {k}"))),
        None => Ok(()),
    }
}

fn max_plus_shape(name: &str, mat: &TropMatrix, rows: usize, cols: usize) -> Result<()> {
    if mat.typing() != Typing::MaxPlus {
        return Err(Error::TypingMismatch(format!("{name} must be max-plus")));
    }
    if mat.rows() != rows || (rows > 0 && mat.cols() != cols) {
        return Err(Error::DimensionMismatch(format!(
            "{name} is {}x{}, expected {rows}x{cols}",
            mat.rows(),
            mat.cols()
        )));
    }
    Ok(())
}

impl PseudolinearProblem {
    /// Validates shapes and infinities. `m = b.len()`, `n = p.len()`.
    ///
    /// With `m = 0`, `U` and `V` may be given as `0 x 0`.
    pub fn new(
        u: TropMatrix,
        v: TropMatrix,
        b: Vec<ExtScalar>,
        d: Vec<ExtScalar>,
        p: Vec<ExtScalar>,
        q: Vec<ExtScalar>,
    ) -> Result<Self> {
        let (m, n) = (b.len(), p.len());
        if n == 0 {
            return Err(Error::DimensionMismatch("at least one variable is required".into()));
        }
        max_plus_shape("U", &u, m, n)?;
        max_plus_shape("V", &v, m, n)?;
        if d.len() != m || q.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "b, d, p, q have lengths {m}, {}, {n}, {}",
                d.len(),
                q.len()
            )));
        }
        no_pos_inf("U", u.entries())?;
        no_pos_inf("V", v.entries())?;
        no_pos_inf("b", &b)?;
        no_pos_inf("d", &d)?;
        no_pos_inf("p", &p)?;
        if let Some(k) = q.iter().position(|v| *v == ExtScalar::NegInf) {
            return Err(Error::IllegalInfinity(format!("q has -inf at position {k}")));
        }
        let u = if m == 0 { TropMatrix::neutral(0, n, Typing::MaxPlus) } else { u };
        let v = if m == 0 { TropMatrix::neutral(0, n, Typing::MaxPlus) } else { v };
        Ok(PseudolinearProblem { u, v, b, d, p, q })
    }

    /// Number of constraints `m`.
    pub fn rows(&self) -> usize {
        self.b.len()
    }

    /// Number of variables `n`.
    pub fn vars(&self) -> usize {
        self.p.len()
    }

    pub fn u(&self) -> &TropMatrix {
        &self.u
    }

    pub fn v(&self) -> &TropMatrix {
        &self.v
    }

    pub fn b(&self) -> &[ExtScalar] {
        &self.b
    }

    pub fn d(&self) -> &[ExtScalar] {
        &self.d
    }

    pub fn p(&self) -> &[ExtScalar] {
        &self.p
    }

    pub fn q(&self) -> &[ExtScalar] {
        &self.q
    }

    /// Whether `U ⊗ x ⊕ b <= V ⊗ x ⊕ d`.
    pub fn is_feasible(&self, x: &[Rational]) -> Result<bool> {
        let mut z = crate::matrix::lift(x);
        z.push(ExtScalar::zero());
        constraint_system(self).satisfied_by(&z)
    }

    pub(crate) fn finite_data(&self) -> impl Iterator<Item = &Rational> {
        self.u
            .entries()
            .iter()
            .chain(self.v.entries())
            .chain(&self.b)
            .chain(&self.d)
            .chain(&self.p)
            .chain(&self.q)
            .filter_map(ExtScalar::finite)
    }
}

/// `[U b]` and `[V d]`.
pub(crate) fn constraint_system(prob: &PseudolinearProblem) -> TwoSidedSystem {
    let (m, n) = (prob.rows(), prob.vars());
    let mut a = Vec::with_capacity(m * (n + 1));
    let mut b = Vec::with_capacity(m * (n + 1));
    for i in 0..m {
        a.extend_from_slice(prob.u.row(i));
        a.push(prob.b[i].clone());
        b.extend_from_slice(prob.v.row(i));
        b.push(prob.d[i].clone());
    }
    TwoSidedSystem::new(
        TropMatrix::new(m, n + 1, Typing::MaxPlus, a).expect("shape"),
        TropMatrix::new(m, n + 1, Typing::MaxPlus, b).expect("shape"),
    )
    .expect("same shape")
}

/// Appends the objective rows `[-∞ p; q⁻ -∞]` / `[λ⊗I -∞; -∞ λ]`, after
/// `extra` rows produced by the caller.
pub(crate) fn parametric_rows(
    prob: &PseudolinearProblem,
    lambda: &Rational,
    extra: &[(Vec<ExtScalar>, Vec<ExtScalar>)],
) -> TwoSidedSystem {
    let (m, n) = (prob.rows(), prob.vars());
    let cols = n + 1;
    let base = constraint_system(prob);
    let mut a = base.a().entries().to_vec();
    let mut b = base.b().entries().to_vec();
    let lam = ExtScalar::Finite(lambda.clone());
    let diag = |k: usize| {
        let mut row = vec![ExtScalar::NegInf; cols];
        row[k] = lam.clone();
        row
    };
    for (ra, rb) in extra {
        a.extend_from_slice(ra);
        b.extend_from_slice(rb);
    }
    for k in 0..n {
        a.extend(std::iter::repeat_n(ExtScalar::NegInf, n));
        a.push(prob.p[k].clone());
        b.extend(diag(k));
    }
    a.extend(prob.q.iter().map(ExtScalar::conj));
    a.push(ExtScalar::NegInf);
    b.extend(diag(n));
    let rows = m + extra.len() + n + 1;
    TwoSidedSystem::new(
        TropMatrix::new(rows, cols, Typing::MaxPlus, a).expect("shape"),
        TropMatrix::new(rows, cols, Typing::MaxPlus, b).expect("shape"),
    )
    .expect("same shape")
}

/// `max_i (p_i - x_i)` and `max_i (x_i - q_i)`, over finite `p_i`, `q_i`.
pub(crate) fn linear_objective(p: &[ExtScalar], q: &[ExtScalar], x: &[Rational]) -> ExtScalar {
    let mut best = ExtScalar::NegInf;
    for (k, xk) in x.iter().enumerate() {
        if let Some(pk) = p[k].finite() {
            best = best.sup(&ExtScalar::Finite(pk - xk));
        }
        if let Some(qk) = q[k].finite() {
            best = best.sup(&ExtScalar::Finite(xk - qk));
        }
    }
    best
}

/// `(q⁻ ⊗ p)^{⊗1/2}`.
pub(crate) fn unconstrained_optimum(p: &[ExtScalar], q: &[ExtScalar]) -> ExtScalar {
    p.iter()
        .zip(q)
        .filter_map(|(pk, qk)| Some(pk.finite()? - qk.finite()?))
        .map(|v| ExtScalar::Finite(v / int(2)))
        .max()
        .unwrap_or(ExtScalar::NegInf)
}

/// Fails with `IsolatedNode` for a variable that appears in no constraint
/// and no objective term.
pub(crate) fn check_variables(prob: &PseudolinearProblem, extra_use: impl Fn(usize) -> bool) -> Result<()> {
    for j in 0..prob.vars() {
        let used = (0..prob.rows()).any(|i| prob.u.get(i, j).is_finite() || prob.v.get(i, j).is_finite())
            || prob.p[j].is_finite()
            || prob.q[j].is_finite()
            || extra_use(j);
        if !used {
            return Err(Error::IsolatedNode { side: "Min", index: j });
        }
    }
    Ok(())
}

/// Objective `x⁻ ⊗ p ⊕ q⁻ ⊗ x` at a finite point.
pub fn objective(prob: &PseudolinearProblem, x: &[Rational]) -> Result<ExtScalar> {
    if x.len() != prob.vars() {
        return Err(Error::DimensionMismatch(format!("x has length {}, expected {}", x.len(), prob.vars())));
    }
    Ok(linear_objective(&prob.p, &prob.q, x))
}

/// The parametric system `A ⊗ (y, t) <= B(λ) ⊗ (y, t)`, with
/// `m + n + 1` rows and `n + 1` columns.
///
/// Fails with `IsolatedNode` when a variable appears nowhere.
pub fn parametric_game(prob: &PseudolinearProblem, lambda: &Rational) -> Result<TwoSidedSystem> {
    check_variables(prob, |_| false)?;
    Ok(parametric_rows(prob, lambda, &[]))
}

/// `Φ(λ)`, the least value over Min nodes of the parametric game.
pub fn phi(prob: &PseudolinearProblem, lambda: &Rational) -> Result<ExtScalar> {
    family::phi(prob, lambda)
}

/// Lower bound `(q⁻ ⊗ p)^{⊗1/2}` and the objective at a feasible witness.
pub fn initial_bounds(prob: &PseudolinearProblem) -> Result<Bounds> {
    family::bounds(prob)
}

/// `-(2m + 2n + 4) W - 1`, strictly below every finite optimum.
pub fn lower_floor(prob: &PseudolinearProblem) -> Rational {
    family::floor_bound(prob)
}

/// Bisection on `Φ`. Integer mode keeps the bracket on half-integers and is exact.
pub fn bisection_solve(prob: &PseudolinearProblem, mode: &Mode, opts: SolveOptions) -> Result<SolveOutcome> {
    family::bisection(prob, mode, opts)
}

/// Newton iterations: each step takes an optimal Max strategy just below the
/// iterate and jumps to the least root of that strategy's `Φ^σ`, computed in
/// closed form on the alcoved problem it induces.
pub fn newton_solve(prob: &PseudolinearProblem, mode: &NewtonMode, opts: SolveOptions) -> Result<SolveOutcome> {
    family::newton(prob, mode, opts)
}

/// The probe offset `1/(4(n+1))` divided by the common data denominator.
pub fn default_probe(prob: &PseudolinearProblem) -> Rational {
    let den = Rational::from_integer(crate::scalar::common_denominator(prob.finite_data()));
    Rational::new(1.into(), (4 * (prob.vars() + 1)).into()) / den
}

impl Family for PseudolinearProblem {
    fn rows(&self) -> usize {
        self.rows()
    }

    fn vars(&self) -> usize {
        self.vars()
    }

    fn constraints(&self) -> TwoSidedSystem {
        constraint_system(self)
    }

    fn system_at(&self, lambda: &Rational) -> TwoSidedSystem {
        parametric_rows(self, lambda, &[])
    }

    fn objective_at(&self, x: &[Rational]) -> ExtScalar {
        linear_objective(&self.p, &self.q, x)
    }

    fn lower(&self) -> ExtScalar {
        unconstrained_optimum(&self.p, &self.q)
    }

    fn grid(&self) -> u64 {
        2
    }

    fn is_integral(&self) -> bool {
        self.finite_data().all(|v| v.is_integer())
    }

    fn max_abs(&self) -> Rational {
        self.finite_data().map(|v| v.abs()).max().unwrap_or_else(|| int(0))
    }

    fn constraint_mass(&self) -> Rational {
        self.u
            .entries()
            .iter()
            .chain(self.v.entries())
            .chain(&self.b)
            .chain(&self.d)
            .filter_map(ExtScalar::finite)
            .map(|v| v.abs())
            .sum()
    }

    fn evaluate(&self, sigma: &Strategy, _probe: &Rational, _cur: &Rational, _mode: &NewtonMode)
        -> Result<StrategyValue> {
        let reduced = match reduce_by_strategy(self, &sigma[..self.rows()]) {
            Ok(ap) => ap,
            Err(Error::InfeasibleReduction { .. }) => {
                return Ok(StrategyValue { theta: ExtScalar::PosInf, x: None })
            }
            Err(e) => return Err(e),
        };
        match solve_alcoved(&reduced) {
            Ok((theta, x)) => Ok(StrategyValue { theta, x }),
            Err(Error::FeasibilityViolated(_) | Error::DivergentStar) => {
                Ok(StrategyValue { theta: ExtScalar::PosInf, x: None })
            }
            Err(e) => Err(e),
        }
    }
}
