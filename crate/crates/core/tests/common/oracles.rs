//! Independent reference computations used to check the solvers.

use tropopt::generate::{gen_random, GenConfig};
use tropopt::io::Problem;
use tropopt::mpg::{feasible_finite, TwoSidedSystem};
use tropopt::pseudolinear::{phi, AlcovedProblem, PseudolinearProblem};
use tropopt::pseudoquadratic::{phi_quad, PseudoquadraticProblem};
use tropopt::scalar::{int, ratio, Rational};
use tropopt::{ExtScalar, TropMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Optimum {
    Value(Rational),
    Unbounded,
    Infeasible,
}

pub fn linear_instance(n: usize, m: usize, range: i64, density: u32, seed: u64) -> PseudolinearProblem {
    match gen_random(&GenConfig { n, m, range, density, seed, quadratic: false }).unwrap() {
        Problem::Linear(p) => p,
        Problem::Quadratic(_) => unreachable!(),
    }
}

pub fn quadratic_instance(n: usize, m: usize, range: i64, density: u32, seed: u64) -> PseudoquadraticProblem {
    match gen_random(&GenConfig { n, m, range, density, seed, quadratic: true }).unwrap() {
        Problem::Quadratic(p) => p,
        Problem::Linear(_) => unreachable!(),
    }
}

fn row(len: usize, at: &[(usize, ExtScalar)]) -> Vec<ExtScalar> {
    let mut r = vec![ExtScalar::NegInf; len];
    for (k, v) in at {
        r[*k] = v.clone();
    }
    r
}

fn system(rows: Vec<(Vec<ExtScalar>, Vec<ExtScalar>)>) -> TwoSidedSystem {
    let (a, b): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
    TwoSidedSystem::new(TropMatrix::max_plus(a), TropMatrix::max_plus(b)).unwrap()
}

/// Solves `A ⊗ (y, t) <= B ⊗ (y, t)` and returns `x = y - t`.
fn dehomogenized(rows: Vec<(Vec<ExtScalar>, Vec<ExtScalar>)>) -> Option<Vec<Rational>> {
    let y = feasible_finite(&system(rows)).unwrap()?;
    let t = y.last().unwrap().clone();
    Some(y[..y.len() - 1].iter().map(|v| v - &t).collect())
}

fn constraint_rows(prob: &PseudolinearProblem) -> Vec<(Vec<ExtScalar>, Vec<ExtScalar>)> {
    (0..prob.rows())
        .map(|i| {
            let mut a = prob.u().row(i).to_vec();
            a.push(prob.b()[i].clone());
            let mut b = prob.v().row(i).to_vec();
            b.push(prob.d()[i].clone());
            (a, b)
        })
        .collect()
}

/// `max_j (p_j - x_j, x_j - q_j)` evaluated directly.
pub fn linear_value(p: &[ExtScalar], q: &[ExtScalar], x: &[Rational]) -> ExtScalar {
    let mut best = ExtScalar::NegInf;
    for j in 0..x.len() {
        if let Some(pj) = p[j].finite() {
            best = best.sup(&ExtScalar::Finite(pj - &x[j]));
        }
        if let Some(qj) = q[j].finite() {
            best = best.sup(&ExtScalar::Finite(&x[j] - qj));
        }
    }
    best
}

/// Largest absolute finite entry of the data.
fn data_range(prob: &PseudolinearProblem) -> i64 {
    let mut w = 0i64;
    let entries = prob.u().entries().iter().chain(prob.v().entries()).chain(prob.b()).chain(prob.d());
    for v in entries.chain(prob.p()).chain(prob.q()) {
        if let Some(r) = v.finite() {
            assert!(r.is_integer(), "oracles expect integer data");
            w = w.max(to_i64(r).abs());
        }
    }
    w
}

/// Least integer `k` in `(lo, hi]` with `ok(k)`, given `ok(hi)`, `!ok(lo)` and monotone `ok`.
fn least_true(mut lo: i64, mut hi: i64, ok: impl Fn(i64) -> bool) -> i64 {
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

fn to_i64(v: &Rational) -> i64 {
    assert!(v.is_integer());
    v.to_integer().to_string().parse().unwrap()
}

fn half(k: i64) -> Rational {
    ratio(k, 2)
}

fn nonnegative(v: &ExtScalar) -> bool {
    *v >= ExtScalar::zero()
}

/// Optimum of a pseudolinear problem by search on the half-integer grid
/// `k/2` between an explicit floor and the value at a feasible point.
pub fn half_integer_search(prob: &PseudolinearProblem) -> Optimum {
    let Some(x) = dehomogenized(constraint_rows(prob)) else {
        return Optimum::Infeasible;
    };
    let top = match linear_value(prob.p(), prob.q(), &x) {
        ExtScalar::Finite(v) => v,
        _ => int(0),
    };
    let hi = to_i64(&(top * int(2)).ceil());
    let (m, n) = (prob.rows() as i64, prob.vars() as i64);
    let lo = -2 * ((2 * m + 2 * n + 4) * data_range(prob) + 1);
    let ok = |k: i64| nonnegative(&phi(prob, &half(k)).unwrap());
    if ok(lo) {
        return Optimum::Unbounded;
    }
    Optimum::Value(half(least_true(lo, hi, ok)))
}

/// All rationals `a/d` with `1 <= d <= den` in `[lo, hi]`, sorted.
pub fn farey_grid(lo: i64, hi: i64, den: i64) -> Vec<Rational> {
    let mut out: Vec<Rational> = Vec::new();
    for d in 1..=den {
        for a in lo * d..=hi * d {
            out.push(ratio(a, d));
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Optimum of a pseudoquadratic problem by binary search over the explicit
/// list of fractions with denominator at most `n + 1`.
pub fn quadratic_grid_search(prob: &PseudoquadraticProblem) -> Optimum {
    let base = prob.base();
    let Some(x) = dehomogenized(constraint_rows(base)) else {
        return Optimum::Infeasible;
    };
    let mut top = linear_value(base.p(), base.q(), &x);
    for i in 0..prob.vars() {
        for j in 0..prob.vars() {
            if let Some(c) = prob.c().get(i, j).finite() {
                top = top.sup(&ExtScalar::Finite(c + &x[j] - &x[i]));
            }
        }
    }
    let top = top.finite().cloned().unwrap_or_else(|| int(0));
    let hi = to_i64(&top.ceil());
    let (m, n) = (prob.rows() as i64, prob.vars() as i64);
    let mut w = data_range(base);
    for v in prob.c().entries() {
        if let Some(r) = v.finite() {
            w = w.max(to_i64(r).abs());
        }
    }
    let lo = -((2 * m + 4 * n + 4) * w + 1);
    let grid = farey_grid(lo, hi, n + 1);
    let ok = |v: &Rational| nonnegative(&phi_quad(prob, v).unwrap());
    if ok(&grid[0]) {
        return Optimum::Unbounded;
    }
    let k = least_true(0, grid.len() as i64 - 1, |k| ok(&grid[k as usize]));
    Optimum::Value(grid[k as usize].clone())
}

/// The alcoved problem written as a homogeneous two-sided system in
/// `(x, t)`: `R ⊗ x <= x`, `l <= x <= u`, `p <= λ ⊗ x`, `q⁻ ⊗ x <= λ`.
pub fn alcoved_rows(ap: &AlcovedProblem, lambda: Option<&Rational>) -> Vec<(Vec<ExtScalar>, Vec<ExtScalar>)> {
    let n = ap.vars();
    let zero = ExtScalar::zero();
    let mut rows = Vec::new();
    for j in 0..n {
        let mut a = ap.r.row(j).to_vec();
        a.push(ExtScalar::NegInf);
        rows.push((a, row(n + 1, &[(j, zero.clone())])));
        if ap.l[j].is_finite() {
            rows.push((row(n + 1, &[(n, ap.l[j].clone())]), row(n + 1, &[(j, zero.clone())])));
        }
        if ap.u[j].is_finite() {
            rows.push((row(n + 1, &[(j, zero.clone())]), row(n + 1, &[(n, ap.u[j].clone())])));
        }
        if let Some(lambda) = lambda {
            let lam = ExtScalar::Finite(lambda.clone());
            if ap.p[j].is_finite() {
                rows.push((row(n + 1, &[(n, ap.p[j].clone())]), row(n + 1, &[(j, lam.clone())])));
            }
            if ap.q[j].is_finite() {
                rows.push((row(n + 1, &[(j, ap.q[j].conj())]), row(n + 1, &[(n, lam)])));
            }
        }
    }
    rows
}

/// Least half-integer `λ` for which the alcoved system with objective rows
/// is solvable; `NegInf` if it stays solvable far below the data.
pub fn alcoved_minimum(ap: &AlcovedProblem) -> ExtScalar {
    let x = dehomogenized(alcoved_rows(ap, None)).expect("feasible alcoved problem");
    let top = linear_value(&ap.p, &ap.q, &x).finite().cloned().unwrap_or_else(|| int(0));
    let hi = to_i64(&(top * int(2)).ceil());
    let mut w = 0i64;
    for v in ap.r.entries().iter().chain(&ap.l).chain(&ap.u).chain(&ap.p).chain(&ap.q) {
        if let Some(r) = v.finite() {
            w = w.max(to_i64(r).abs());
        }
    }
    let lo = -2 * (4 * (ap.vars() as i64 + 1) * (w + 1));
    let ok = |k: i64| dehomogenized(alcoved_rows(ap, Some(&half(k)))).is_some();
    if ok(lo) {
        return ExtScalar::NegInf;
    }
    ExtScalar::Finite(half(least_true(lo, hi, ok)))
}

/// Largest mean of a cycle reachable from each node, from max-plus powers.
/// `arcs[u]` lists `(v, w)`; `None` for nodes reaching no cycle.
pub fn max_reachable_cycle_mean(arcs: &[Vec<(usize, i64)>]) -> Vec<Option<(i64, i64)>> {
    let n = arcs.len();
    let mut walk: Vec<Vec<Option<i64>>> = vec![vec![None; n]; n];
    for (u, out) in arcs.iter().enumerate() {
        for &(v, w) in out {
            walk[u][v] = Some(walk[u][v].map_or(w, |c: i64| c.max(w)));
        }
    }
    let one = walk.clone();
    let mut best: Vec<Option<(i64, i64)>> = vec![None; n];
    let better = |cur: Option<(i64, i64)>, cand: (i64, i64)| match cur {
        Some((a, b)) if (a as i128) * (cand.1 as i128) >= (cand.0 as i128) * (b as i128) => Some((a, b)),
        _ => Some(cand),
    };
    for len in 1..=n {
        for u in 0..n {
            if let Some(w) = walk[u][u] {
                best[u] = better(best[u], (w, len as i64));
            }
        }
        let mut next = vec![vec![None; n]; n];
        for u in 0..n {
            for k in 0..n {
                let Some(a) = walk[u][k] else { continue };
                for v in 0..n {
                    if let Some(b) = one[k][v] {
                        let c: Option<i64> = next[u][v];
                        next[u][v] = Some(c.map_or(a + b, |c| c.max(a + b)));
                    }
                }
            }
        }
        walk = next;
    }
    let mut reach = vec![vec![false; n]; n];
    for s in 0..n {
        let mut stack = vec![s];
        reach[s][s] = true;
        while let Some(u) = stack.pop() {
            for &(v, _) in &arcs[u] {
                if !reach[s][v] {
                    reach[s][v] = true;
                    stack.push(v);
                }
            }
        }
    }
    (0..n)
        .map(|s| (0..n).filter(|&v| reach[s][v]).fold(None, |acc, v| best[v].map_or(acc, |c| better(acc, c))))
        .collect()
}

pub fn as_rational(mean: (i64, i64)) -> Rational {
    ratio(mean.0, mean.1)
}

fn doubled(v: &ExtScalar) -> i64 {
    to_i64(&(v.finite().expect("finite weight") * int(2)))
}

/// `(min_τ Φ_τ, max_σ Φ^σ)` over all positional strategies of a game
/// without dead ends whose weights are half-integers. `Φ_τ` is the least
/// value when Min is fixed to `τ` and Max optimizes alone, `Φ^σ` the other
/// way around.
pub fn strategy_extremes(sys: &TwoSidedSystem) -> (Rational, Rational) {
    sys.check_moves().expect("no dead ends");
    let (a, b) = (sys.a(), sys.b());
    let n = sys.cols();
    let least = |means: Vec<Option<(i64, i64)>>, sign: i64| {
        means
            .into_iter()
            .map(|c| as_rational(c.expect("every play reaches a cycle")) * int(sign))
            .min()
            .unwrap()
            / int(2)
    };
    let mut min_tau: Option<Rational> = None;
    for tau in super::all_strategies(&super::tau_choices(sys)) {
        let arcs: Vec<Vec<(usize, i64)>> = (0..n)
            .map(|j| {
                let i = tau[j].unwrap();
                (0..n)
                    .filter(|&l| b.get(i, l).is_finite())
                    .map(|l| (l, doubled(b.get(i, l)) - doubled(a.get(i, j))))
                    .collect()
            })
            .collect();
        let v = least(max_reachable_cycle_mean(&arcs), 1);
        min_tau = Some(min_tau.map_or(v.clone(), |c| c.min(v)));
    }
    let mut max_sigma: Option<Rational> = None;
    for sigma in super::all_strategies(&super::sigma_choices(sys)) {
        let arcs: Vec<Vec<(usize, i64)>> = (0..n)
            .map(|j| {
                (0..sys.rows())
                    .filter(|&i| a.get(i, j).is_finite())
                    .map(|i| {
                        let l = sigma[i].unwrap();
                        (l, doubled(a.get(i, j)) - doubled(b.get(i, l)))
                    })
                    .collect()
            })
            .collect();
        let v = least(max_reachable_cycle_mean(&arcs), -1);
        max_sigma = Some(max_sigma.map_or(v.clone(), |c| c.max(v)));
    }
    (min_tau.unwrap(), max_sigma.unwrap())
}

/// Number of positional strategies of each player.
pub fn strategy_counts(sys: &TwoSidedSystem) -> (usize, usize) {
    let count = |c: Vec<Vec<usize>>| c.iter().map(|o| o.len().max(1)).product();
    (count(super::tau_choices(sys)), count(super::sigma_choices(sys)))
}

/// The parametric system built row by row: the constraints, then
/// `p_k + t <= λ + y_k` for each `k`, then `y_j - q_j <= λ + t`.
pub fn parametric_system(prob: &PseudolinearProblem, lambda: &Rational) -> TwoSidedSystem {
    let n = prob.vars();
    let lam = ExtScalar::Finite(lambda.clone());
    let mut rows = constraint_rows(prob);
    for k in 0..n {
        rows.push((row(n + 1, &[(n, prob.p()[k].clone())]), row(n + 1, &[(k, lam.clone())])));
    }
    let mut a: Vec<ExtScalar> = prob.q().iter().map(ExtScalar::conj).collect();
    a.push(ExtScalar::NegInf);
    rows.push((a, row(n + 1, &[(n, lam)])));
    system(rows)
}

/// Nearest fractions with denominator at most `bound` around `lambda`,
/// by listing every such fraction within distance 2:
/// `(least >= λ, greatest <= λ, greatest < λ)`.
pub fn farey_neighbours(lambda: &Rational, bound: i64) -> (Rational, Rational, Rational) {
    let base = to_i64(&lambda.floor());
    let grid = farey_grid(base - 2, base + 2, bound);
    let up = grid.iter().find(|v| *v >= lambda).unwrap().clone();
    let down = grid.iter().rev().find(|v| *v <= lambda).unwrap().clone();
    let strict = grid.iter().rev().find(|v| *v < lambda).unwrap().clone();
    (up, down, strict)
}
