//! Certificates of optimality and unboundedness read off positional strategies.
//!
//! Rows of the parametric game below `m` come from the constraints and do not
//! involve `λ`; every other row carries `λ` on its Max side.

use num_traits::Zero;

use crate::error::Result;
use crate::family::{self, Family};
use crate::graph::{reachable, strongly_connected};
use crate::matrix::{TropMatrix, Typing};
use crate::mpg::{self, Strategy, TwoSidedSystem};
use crate::scalar::{int, ExtScalar, Rational};

use super::{PseudolinearProblem};

/// Arc `j -> l` between Min nodes through Max node `via`.
struct Step {
    from: usize,
    to: usize,
    via: usize,
    weight: Rational,
}

fn max_cycle_mean(n: usize, steps: &[&Step], negate: bool) -> ExtScalar {
    let mut mat = TropMatrix::neutral(n, n, Typing::MaxPlus);
    for s in steps {
        let w = ExtScalar::Finite(if negate { -s.weight.clone() } else { s.weight.clone() });
        let best = mat.get(s.from, s.to).sup(&w);
        mat.set(s.from, s.to, best).expect("max-plus entry");
    }
    mat.max_cycle_mean().expect("square max-plus matrix")
}

/// Whether `tau` proves that `λ*` is the least root of `Φ` for `sys`, the
/// parametric system at `λ*` whose first `m` rows are free of `λ`.
pub(crate) fn certify_optimal_system(sys: &TwoSidedSystem, m: usize, tau: &[Option<usize>]) -> Result<bool> {
    sys.validate_tau(tau)?;
    if !mpg::min_value_at_least(sys, &Rational::zero(), false)? {
        return Ok(false);
    }
    let n = sys.cols();
    let mut steps = Vec::new();
    let mut adj = vec![Vec::new(); n];
    for (j, choice) in tau.iter().enumerate() {
        let Some(i) = *choice else { continue };
        let a = sys.a().get(i, j).finite().expect("validated").clone();
        for l in 0..n {
            if let Some(b) = sys.b().get(i, l).finite() {
                steps.push(Step { from: j, to: l, via: i, weight: b - &a });
                adj[j].push(l);
            }
        }
    }
    for j in 0..n {
        let seen = reachable(&adj, &[j]);
        // Min stuck at a reachable node means Max wins outright.
        if (0..n).any(|k| seen[k] && tau[k].is_none()) {
            continue;
        }
        let inside: Vec<&Step> = steps.iter().filter(|s| seen[s.from]).collect();
        if max_cycle_mean(n, &inside, false) > ExtScalar::zero() {
            continue;
        }
        let fixed: Vec<&Step> = inside.iter().copied().filter(|s| s.via < m).collect();
        if max_cycle_mean(n, &fixed, false) < ExtScalar::zero() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Whether `sigma` proves that `Φ(λ) >= 0` for every `λ`, for `sys` the
/// parametric system at `λ = 0`.
pub(crate) fn certify_unbounded_system(sys: &TwoSidedSystem, m: usize, sigma: &[Option<usize>]) -> Result<bool> {
    sys.validate_sigma(sigma)?;
    let n = sys.cols();
    let mut steps = Vec::new();
    for j in 0..n {
        for i in 0..sys.rows() {
            let Some(a) = sys.a().get(i, j).finite() else { continue };
            let Some(l) = sigma[i] else {
                // Max is stuck at a node Min can enter.
                return Ok(false);
            };
            let b = sys.b().get(i, l).finite().expect("validated");
            steps.push(Step { from: j, to: l, via: i, weight: b - a });
        }
    }
    let mut adj = vec![Vec::new(); n];
    for s in &steps {
        adj[s.from].push(s.to);
    }
    let comp = strongly_connected(n, &adj);
    if steps.iter().any(|s| s.via >= m && (s.from == s.to || comp[s.from] == comp[s.to])) {
        return Ok(false);
    }
    let all: Vec<&Step> = steps.iter().collect();
    Ok(max_cycle_mean(n, &all, true) <= ExtScalar::zero())
}

/// Checks that `tau`, a Min strategy on the parametric game at `lambda_star`,
/// certifies `lambda_star` as the optimal value.
///
/// True iff `Φ(λ*) >= 0` and, from some Min node, every cycle reachable
/// under `tau` has weight `<= 0` and every zero-weight one passes through
/// an objective row.
pub fn certify_optimal(prob: &PseudolinearProblem, lambda_star: &Rational, tau: &[Option<usize>]) -> Result<bool> {
    certify_optimal_system(&prob.system_at(lambda_star), prob.rows(), tau)
}

/// Checks that `sigma`, a Max strategy on the parametric game at `λ = 0`,
/// certifies that the problem is unbounded below.
///
/// True iff under `sigma` every cycle has nonnegative weight and uses
/// constraint rows only.
pub fn certify_unbounded(prob: &PseudolinearProblem, sigma: &[Option<usize>]) -> Result<bool> {
    certify_unbounded_system(&prob.system_at(&Rational::zero()), prob.rows(), sigma)
}

/// A Min strategy holding the least value of the game at `λ* - ε`, with
/// `ε = 1/(2 g²)`, `g` the grid of optimal denominators.
pub(crate) fn optimality_witness_for<F: Family + ?Sized>(f: &F, lambda_star: &Rational) -> Result<Strategy> {
    let g = int(f.grid() as i64);
    let mu = lambda_star - Rational::new(1.into(), 2.into()) / (&g * &g);
    let sys = f.system_at(&mu);
    let t = match mpg::min_value(&sys)? {
        ExtScalar::Finite(t) => t,
        _ => Rational::zero(),
    };
    Ok(mpg::holding_min_strategy(&sys, &t)?.1)
}

/// A Max strategy securing the least value at the unboundedness floor.
pub(crate) fn unboundedness_witness_for<F: Family + ?Sized>(f: &F) -> Result<Strategy> {
    let sys = f.system_at(&family::floor_bound(f));
    Ok(mpg::optimal_max_strategy(&sys)?.1)
}

/// A Min strategy to pass to [`certify_optimal`] at `lambda_star`.
pub fn optimality_witness(prob: &PseudolinearProblem, lambda_star: &Rational) -> Result<Strategy> {
    optimality_witness_for(prob, lambda_star)
}

/// A Max strategy to pass to [`certify_unbounded`].
pub fn unboundedness_witness(prob: &PseudolinearProblem) -> Result<Strategy> {
    unboundedness_witness_for(prob)
}
