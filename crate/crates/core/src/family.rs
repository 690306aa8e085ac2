//! Machinery shared by the pseudolinear and pseudoquadratic solvers.
//!
//! Both problems are solved through a parametric two-sided system whose last
//! column is a homogenizing variable `t`: a finite solution `(y, t)` gives the
//! point `x = y - t`.

use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix::lift;
use crate::mpg::{self, Strategy, TwoSidedSystem};
use crate::outcome::{Mode, NewtonMode, SolveOptions, SolveOutcome, Status, TraceEntry};
use crate::rounding::{round_bounded, Direction};
use crate::scalar::{common_denominator, int, ExtScalar, Rational};

/// Bounds on the optimal value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bounds {
    /// Optimum of the unconstrained problem; `-inf` when it is unbounded.
    pub lower: ExtScalar,
    /// Objective at `witness`; `+inf` when the constraints are infeasible.
    pub upper: ExtScalar,
    /// A feasible point, when one exists.
    pub witness: Option<Vec<Rational>>,
}

/// Outcome of evaluating one Max strategy in a Newton step.
pub(crate) struct StrategyValue {
    /// `min{λ : Φ^σ(λ) >= 0}`; `+inf` when it is known to exceed the iterate.
    pub theta: ExtScalar,
    /// A point attaining `theta`, when available.
    pub x: Option<Vec<Rational>>,
}

pub(crate) trait Family {
    fn rows(&self) -> usize;
    fn vars(&self) -> usize;
    /// `[U b] ⊗ (y, t) <= [V d] ⊗ (y, t)`.
    fn constraints(&self) -> TwoSidedSystem;
    /// The parametric system at `lambda`, without the isolated-node check.
    fn system_at(&self, lambda: &Rational) -> TwoSidedSystem;
    /// Objective at a finite point of length `vars()`.
    fn objective_at(&self, x: &[Rational]) -> ExtScalar;
    /// Optimum of the unconstrained problem.
    fn lower(&self) -> ExtScalar;
    /// Optimal values of integer instances have denominators at most this.
    fn grid(&self) -> u64;
    /// All finite data are integers.
    fn is_integral(&self) -> bool;
    /// Largest absolute value of a finite datum.
    fn max_abs(&self) -> Rational;
    /// Sum of absolute values of the finite constraint data.
    fn constraint_mass(&self) -> Rational;
    /// Evaluates the Max strategy `sigma` (all rows of the parametric game)
    /// found at `probe` just below the iterate `cur`.
    fn evaluate(&self, sigma: &Strategy, probe: &Rational, cur: &Rational, mode: &NewtonMode)
        -> Result<StrategyValue>;
}

/// `Φ(λ)`: the least value over Min nodes of the parametric game.
pub(crate) fn phi<F: Family + ?Sized>(f: &F, lambda: &Rational) -> Result<ExtScalar> {
    mpg::min_value(&f.system_at(lambda))
}

/// `Φ(λ) >= 0`.
pub(crate) fn phi_nonnegative<F: Family + ?Sized>(f: &F, lambda: &Rational) -> Result<bool> {
    mpg::min_value_at_least(&f.system_at(lambda), &Rational::zero(), false)
}

/// Dehomogenizes `(y, t)`.
pub(crate) fn dehomogenize(z: &[Rational]) -> Vec<Rational> {
    let (y, t) = z.split_at(z.len() - 1);
    y.iter().map(|v| v - &t[0]).collect()
}

/// A finite point of objective at most `lambda`, if one exists.
pub(crate) fn point_at<F: Family + ?Sized>(f: &F, lambda: &Rational) -> Result<Option<Vec<Rational>>> {
    Ok(mpg::feasible_finite(&f.system_at(lambda))?.map(|z| dehomogenize(&z)))
}

fn required_point<F: Family + ?Sized>(f: &F, lambda: &Rational) -> Result<Vec<Rational>> {
    point_at(f, lambda)?.ok_or_else(|| {
        Error::FeasibilityViolated(format!("no point of objective <= {lambda} although Φ >= 0 there"))
    })
}

/// Strictly below every finite optimum: cycle means of the parametric game
/// are bounded by `2(n+1)W` in absolute value.
pub(crate) fn floor_bound<F: Family + ?Sized>(f: &F) -> Rational {
    let k = int((2 * f.rows() + 2 * f.vars() + 4) as i64);
    -(k * f.max_abs() + int(1))
}

/// Greatest-fixpoint iteration `z ← z ∧ A♯ ⊗′ (B ⊗ z)` from `start`, at most
/// `cap` rounds. Returns a verified finite solution or `None`.
pub(crate) fn alternating(sys: &TwoSidedSystem, start: &[Rational], cap: usize) -> Option<Vec<Rational>> {
    let (m, n) = (sys.rows(), sys.cols());
    let finite = sys.a().entries().iter().chain(sys.b().entries()).filter_map(ExtScalar::finite);
    let scale = common_denominator(finite.chain(start.iter()));
    let scale_q = Rational::from_integer(scale);
    let to_int = |v: &Rational| (v * &scale_q).to_integer().to_i128();
    let grab = |mat: &crate::TropMatrix| -> Option<Vec<Vec<Option<i128>>>> {
        (0..m)
            .map(|i| {
                (0..n)
                    .map(|j| match mat.get(i, j).finite() {
                        Some(v) => to_int(v).map(Some),
                        None => Some(None),
                    })
                    .collect()
            })
            .collect()
    };
    let a = grab(sys.a())?;
    let b = grab(sys.b())?;
    let mut z: Vec<i128> = start.iter().map(to_int).collect::<Option<_>>()?;
    for _ in 0..cap {
        let bz: Vec<Option<i128>> = (0..m)
            .map(|i| (0..n).filter_map(|j| b[i][j].map(|w| w + z[j])).max())
            .collect();
        let mut changed = false;
        for j in 0..n {
            for i in 0..m {
                let Some(aij) = a[i][j] else { continue };
                let bound = bz[i]? - aij;
                if bound < z[j] {
                    z[j] = bound;
                    changed = true;
                }
            }
        }
        if !changed {
            let x: Vec<Rational> = z.iter().map(|v| Rational::from_integer((*v).into()) / &scale_q).collect();
            return sys.satisfied_by(&lift(&x)).ok()?.then_some(x);
        }
    }
    None
}

/// A feasible point of the constraints, if any.
///
/// Tries the alternating method from `(-S, ..., -S, 0)`, `S` the total
/// constraint mass, and falls back to game potentials.
pub(crate) fn witness<F: Family + ?Sized>(f: &F) -> Result<Option<Vec<Rational>>> {
    let sys = f.constraints();
    let n = f.vars();
    let mut start = vec![-f.constraint_mass(); n];
    start.push(Rational::zero());
    let cap = 50 * (f.rows() + n) + 50;
    if let Some(z) = alternating(&sys, &start, cap) {
        return Ok(Some(dehomogenize(&z)));
    }
    Ok(mpg::feasible_finite(&sys)?.map(|z| dehomogenize(&z)))
}

pub(crate) fn bounds<F: Family + ?Sized>(f: &F) -> Result<Bounds> {
    let witness = witness(f)?;
    let upper = witness.as_ref().map_or(ExtScalar::PosInf, |w| f.objective_at(w));
    Ok(Bounds { lower: f.lower(), upper, witness })
}

enum Start {
    Done(SolveOutcome),
    Go { lo: Rational, lower_finite: bool, upper: Rational, witness: Vec<Rational> },
}

/// Feasibility and unboundedness checks common to both schemes.
fn start<F: Family + ?Sized>(f: &F, integer: bool) -> Result<Start> {
    if integer && !f.is_integral() {
        return Err(Error::ModeMismatch);
    }
    let b = bounds(f)?;
    let Some(witness) = b.witness else {
        return Ok(Start::Done(SolveOutcome::new(Status::Infeasible, 0, Vec::new())));
    };
    let (lo, lower_finite) = match b.lower {
        ExtScalar::Finite(l) => (l, true),
        _ => {
            let fl = floor_bound(f);
            if phi_nonnegative(f, &fl)? {
                return Ok(Start::Done(SolveOutcome::new(Status::Unbounded, 0, Vec::new())));
            }
            (fl, false)
        }
    };
    let upper = match b.upper {
        ExtScalar::Finite(u) => u,
        // An objective of -inf everywhere makes Φ(floor) >= 0 above.
        _ => unreachable!("a feasible point has a finite objective once the floor test passed"),
    };
    Ok(Start::Go { lo, lower_finite, upper, witness })
}

/// Least `λ` in `[lo, hi]` with `pred(λ)`, given `pred(hi)` and that the
/// answer lies on the grid of denominators `<= grid`. Returns it with the
/// number of probes.
pub(crate) fn bracket_grid(
    mut lo: Rational,
    mut hi: Rational,
    grid: u64,
    mut pred: impl FnMut(&Rational) -> Result<bool>,
) -> Result<(Rational, usize)> {
    let mut probes = 0;
    while lo < hi {
        let mid = (&lo + &hi) / int(2);
        probes += 1;
        if pred(&mid)? {
            hi = round_bounded(&mid, grid, Direction::Down);
        } else {
            lo = round_bounded(&mid, grid, Direction::Up);
        }
    }
    Ok((hi, probes))
}

/// Shrinks `[lo, hi]` with `pred(hi)` true until it is at most `tol` wide.
pub(crate) fn bracket_real(
    mut lo: Rational,
    mut hi: Rational,
    tol: &Rational,
    mut pred: impl FnMut(&Rational) -> Result<bool>,
) -> Result<(Rational, usize)> {
    let mut probes = 0;
    while &hi - &lo > *tol {
        let mid = (&lo + &hi) / int(2);
        probes += 1;
        if pred(&mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((hi, probes))
}

fn check_tol(tol: &Rational) -> Result<()> {
    if !tol.is_positive() {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    Ok(())
}

/// Bisection on `Φ`.
pub(crate) fn bisection<F: Family + ?Sized>(f: &F, mode: &Mode, opts: SolveOptions) -> Result<SolveOutcome> {
    if let Mode::Real { tol } = mode {
        check_tol(tol)?;
    }
    let (lo, lower_finite, upper) = match start(f, *mode == Mode::Integer)? {
        Start::Done(out) => return Ok(out),
        Start::Go { lo, lower_finite, upper, .. } => (lo, lower_finite, upper),
    };
    if lower_finite && phi_nonnegative(f, &lo)? {
        let x = required_point(f, &lo)?;
        return Ok(SolveOutcome::new(Status::Optimal { lambda: lo, x }, 0, Vec::new()));
    }
    let mut trace = Vec::new();
    let mut pred = |lambda: &Rational| -> Result<bool> {
        if opts.trace {
            let value = phi(f, lambda)?;
            let ok = value >= ExtScalar::zero();
            trace.push(TraceEntry { lambda: lambda.clone(), value });
            Ok(ok)
        } else {
            phi_nonnegative(f, lambda)
        }
    };
    let status = match mode {
        Mode::Integer => {
            let hi = round_bounded(&upper, f.grid(), Direction::Down);
            let (lambda, probes) = bracket_grid(lo, hi, f.grid(), &mut pred)?;
            let x = required_point(f, &lambda)?;
            (Status::Optimal { lambda, x }, probes)
        }
        Mode::Real { tol } => {
            let (hi, probes) = bracket_real(lo, upper, tol, &mut pred)?;
            let x = required_point(f, &hi)?;
            let lambda = f.objective_at(&x).finite().cloned().unwrap_or(hi);
            (Status::Optimal { lambda, x }, probes)
        }
    };
    Ok(SolveOutcome::new(status.0, status.1, trace))
}

/// Newton iterations on `Φ` through Max strategies taken just below each iterate.
pub(crate) fn newton<F: Family + ?Sized>(f: &F, mode: &NewtonMode, opts: SolveOptions) -> Result<SolveOutcome> {
    if let NewtonMode::RealProbe { eps } = mode {
        check_tol(eps)?;
    }
    let integer = *mode == NewtonMode::Integer;
    let (upper, witness) = match start(f, integer)? {
        Start::Done(out) => return Ok(out),
        Start::Go { upper, witness, .. } => (upper, witness),
    };
    let mut cur = if integer { round_bounded(&upper, f.grid(), Direction::Down) } else { upper.clone() };
    let mut best = (cur == upper).then_some(witness);
    let mut iterations = 0;
    let mut trace = Vec::new();
    loop {
        let probe = match mode {
            NewtonMode::Integer => round_bounded(&cur, f.grid(), Direction::StrictDown),
            NewtonMode::RealProbe { eps } => &cur - eps,
        };
        let (_, sigma) = mpg::optimal_max_strategy(&f.system_at(&probe))?;
        iterations += 1;
        let StrategyValue { theta, x } = f.evaluate(&sigma, &probe, &cur, mode)?;
        if opts.trace {
            trace.push(TraceEntry { lambda: cur.clone(), value: theta.clone() });
        }
        match theta {
            ExtScalar::NegInf => return Ok(SolveOutcome::new(Status::Unbounded, iterations, trace)),
            ExtScalar::Finite(t) if t < cur => {
                cur = t;
                best = x;
            }
            _ => break,
        }
    }
    let x = match best {
        Some(x) if f.objective_at(&x) == ExtScalar::Finite(cur.clone()) => x,
        _ => required_point(f, &cur)?,
    };
    let lambda = if integer { cur } else { f.objective_at(&x).finite().cloned().unwrap_or(cur) };
    Ok(SolveOutcome::new(Status::Optimal { lambda, x }, iterations, trace))
}

/// `min{λ : Φ^σ(λ) >= 0}` by bisection on the one-player game of `sigma`.
pub(crate) fn strategy_value_by_bisection<F: Family + ?Sized>(
    f: &F,
    sigma: &Strategy,
    probe: &Rational,
    cur: &Rational,
    mode: &NewtonMode,
) -> Result<StrategyValue> {
    let restricted = |lambda: &Rational| mpg::restrict_strategies(&f.system_at(lambda), None, Some(sigma));
    let holds = |lambda: &Rational| -> Result<bool> {
        mpg::min_value_at_least(&restricted(lambda)?, &Rational::zero(), false)
    };
    let point = |lambda: &Rational| -> Result<Option<Vec<Rational>>> {
        Ok(mpg::feasible_finite(&restricted(lambda)?)?.map(|z| dehomogenize(&z)))
    };
    if !holds(probe)? {
        // No grid point lies strictly between the probe and the iterate.
        if *mode == NewtonMode::Integer && holds(cur)? {
            return Ok(StrategyValue { theta: ExtScalar::Finite(cur.clone()), x: point(cur)? });
        }
        return Ok(StrategyValue { theta: ExtScalar::PosInf, x: None });
    }
    let lo = match f.lower() {
        ExtScalar::Finite(l) => l,
        _ => floor_bound(f),
    };
    if holds(&lo)? {
        return Ok(StrategyValue { theta: ExtScalar::Finite(lo.clone()), x: point(&lo)? });
    }
    let (theta, _) = match mode {
        NewtonMode::Integer => bracket_grid(lo, probe.clone(), f.grid(), holds)?,
        NewtonMode::RealProbe { eps } => bracket_real(lo, probe.clone(), eps, holds)?,
    };
    let x = point(&theta)?;
    let theta = match (&x, mode) {
        (Some(x), NewtonMode::RealProbe { .. }) => f.objective_at(x),
        _ => ExtScalar::Finite(theta),
    };
    Ok(StrategyValue { theta, x })
}
