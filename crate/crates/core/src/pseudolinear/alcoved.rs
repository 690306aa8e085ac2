//! Pseudolinear optimization over alcoved polyhedra
//! `{x : l <= x <= u, R ⊗ x <= x}`, solved in closed form, and the reduction
//! of a two-sided problem to such a polyhedron by a Max strategy.

use crate::error::{Error, Result};
use crate::matrix::{dot, vec_conj, vec_leq, TropMatrix, Typing};
use crate::scalar::{ExtScalar, Rational};

use super::{linear_objective, PseudolinearProblem};

/// Minimize `x⁻ ⊗ p ⊕ q⁻ ⊗ x` over `l <= x <= u`, `R ⊗ x <= x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlcovedProblem {
    pub r: TropMatrix,
    /// Lower bounds, `-inf` for none.
    pub l: Vec<ExtScalar>,
    /// Upper bounds, `+inf` for none.
    pub u: Vec<ExtScalar>,
    pub p: Vec<ExtScalar>,
    pub q: Vec<ExtScalar>,
}

impl AlcovedProblem {
    pub fn vars(&self) -> usize {
        self.p.len()
    }

    /// Whether `x` lies in the polyhedron.
    pub fn contains(&self, x: &[Rational]) -> Result<bool> {
        let x = crate::matrix::lift(x);
        Ok(vec_leq(&self.l, &x) && vec_leq(&x, &self.u) && vec_leq(&self.r.mul_vec(&x)?, &x))
    }

    pub fn objective(&self, x: &[Rational]) -> ExtScalar {
        linear_objective(&self.p, &self.q, x)
    }

    fn check_shape(&self) -> Result<()> {
        let n = self.vars();
        if self.r.typing() != Typing::MaxPlus {
            return Err(Error::TypingMismatch("R must be max-plus".into()));
        }
        if self.r.rows() != n || self.r.cols() != n || self.l.len() != n || self.u.len() != n || self.q.len() != n {
            return Err(Error::DimensionMismatch("alcoved data must all have length n".into()));
        }
        if self.l.contains(&ExtScalar::PosInf) || self.p.contains(&ExtScalar::PosInf) {
            return Err(Error::IllegalInfinity("l and p must not contain +inf".into()));
        }
        if self.u.contains(&ExtScalar::NegInf) || self.q.contains(&ExtScalar::NegInf) {
            return Err(Error::IllegalInfinity("u and q must not contain -inf".into()));
        }
        Ok(())
    }
}

/// The alcoved problem cut out by the Max strategy `sigma` on the `m`
/// constraint rows.
///
/// `sigma(i) = j < n` turns row `i` into `x_k + u_ik - v_ij <= x_j` for all
/// `k` and `x_j >= b_i - v_ij`. `sigma(i) = n` turns it into upper bounds
/// `x_k <= d_i - u_ik` and requires `b_i <= d_i`. Variables keep their
/// indices. Loops `x_j + r <= x_j` with `r <= 0` are vacuous and dropped;
/// positive ones are kept so that `ρ(R) > 0` flags infeasibility.
pub fn reduce_by_strategy(prob: &PseudolinearProblem, sigma: &[Option<usize>]) -> Result<AlcovedProblem> {
    let (m, n) = (prob.rows(), prob.vars());
    if sigma.len() != m {
        return Err(Error::InvalidStrategy(format!("sigma has {} entries for {m} rows", sigma.len())));
    }
    let mut r = TropMatrix::neutral(n, n, Typing::MaxPlus);
    let mut l = vec![ExtScalar::NegInf; n];
    let mut u = vec![ExtScalar::PosInf; n];
    for (i, choice) in sigma.iter().enumerate() {
        let urow = prob.u().row(i);
        let bi = &prob.b()[i];
        match *choice {
            Some(j) if j < n => {
                let Some(vij) = prob.v().get(i, j).finite() else {
                    return Err(Error::InvalidStrategy(format!("sigma({i}) = {j} picks -inf")));
                };
                for (k, uik) in urow.iter().enumerate() {
                    let Some(uik) = uik.finite() else { continue };
                    let w = ExtScalar::Finite(uik - vij);
                    if k == j && w <= ExtScalar::zero() {
                        continue;
                    }
                    let cur = r.get(j, k).sup(&w);
                    r.set(j, k, cur)?;
                }
                if let Some(bi) = bi.finite() {
                    l[j] = l[j].sup(&ExtScalar::Finite(bi - vij));
                }
            }
            Some(j) if j == n => {
                let Some(di) = prob.d()[i].finite() else {
                    return Err(Error::InvalidStrategy(format!("sigma({i}) = {n} picks -inf")));
                };
                if let Some(bi) = bi.finite() {
                    if bi > di {
                        return Err(Error::InfeasibleReduction { row: i });
                    }
                }
                for (k, uik) in urow.iter().enumerate() {
                    if let Some(uik) = uik.finite() {
                        u[k] = u[k].inf(&ExtScalar::Finite(di - uik));
                    }
                }
            }
            Some(j) => return Err(Error::InvalidStrategy(format!("sigma({i}) = {j} is out of range"))),
            None => {
                let vacuous = urow.iter().chain(std::iter::once(bi)).all(|v| !v.is_finite());
                let no_move = prob.v().row(i).iter().chain(std::iter::once(&prob.d()[i])).all(|v| !v.is_finite());
                if !no_move {
                    return Err(Error::InvalidStrategy(format!("sigma({i}) is undefined but row {i} has moves")));
                }
                if !vacuous {
                    return Err(Error::InfeasibleReduction { row: i });
                }
            }
        }
    }
    Ok(AlcovedProblem { r, l, u, p: prob.p().to_vec(), q: prob.q().to_vec() })
}

/// Optimal value `θ` and an optimal point of an alcoved problem.
///
/// `θ = (q⁻ ⊗ R* ⊗ p)^{⊗1/2} ⊕ u⁻ ⊗ R* ⊗ p ⊕ q⁻ ⊗ R* ⊗ l`. The point is
/// `R* ⊗ v` with `v_j` the upper candidate `((R*)♯ ⊗′ (θ ⊗ q ⊕′ u))_j` when
/// finite, else the lower candidate `(l ⊕ θ⁻ ⊗ p)_j` when finite, else `0`.
/// `θ = -inf` means the objective is unbounded below and no point is returned.
pub fn solve_alcoved(ap: &AlcovedProblem) -> Result<(ExtScalar, Option<Vec<Rational>>)> {
    ap.check_shape()?;
    if ap.r.max_cycle_mean()? > ExtScalar::zero() {
        return Err(Error::FeasibilityViolated("ρ(R) > 0".into()));
    }
    let star = ap.r.kleene_star()?;
    let star_l = star.mul_vec(&ap.l)?;
    if !vec_leq(&star_l, &ap.u) {
        return Err(Error::FeasibilityViolated("R* ⊗ l exceeds u".into()));
    }
    let star_p = star.mul_vec(&ap.p)?;
    let q_conj = vec_conj(&ap.q);
    let theta = dot(&q_conj, &star_p)
        .half()
        .sup(&dot(&vec_conj(&ap.u), &star_p))
        .sup(&dot(&q_conj, &star_l));
    let ExtScalar::Finite(t) = &theta else {
        return Ok((theta, None));
    };

    let caps: Vec<ExtScalar> = ap.q.iter().zip(&ap.u).map(|(qi, ui)| qi.shift(t).inf(ui)).collect();
    let upper = star.conjugate().dual_mul_vec(&caps)?;
    let v: Vec<ExtScalar> = (0..ap.vars())
        .map(|j| {
            if upper[j].is_finite() {
                return upper[j].clone();
            }
            let lower = ap.l[j].sup(&ap.p[j].shift(&-t));
            if lower.is_finite() {
                lower
            } else {
                ExtScalar::zero()
            }
        })
        .collect();
    let x: Vec<Rational> = star
        .mul_vec(&v)?
        .into_iter()
        .map(|e| e.finite().cloned().expect("R* ⊗ v is finite for finite v"))
        .collect();
    assert!(ap.contains(&x)?, "closed-form point must lie in the polyhedron");
    assert!(ap.objective(&x) <= theta, "closed-form point must attain θ");
    Ok((theta, Some(x)))
}
