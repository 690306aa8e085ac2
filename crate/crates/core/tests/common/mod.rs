//! Shared fixtures and brute-force oracles for the integration tests.
#![allow(dead_code)]

pub mod oracles;

use proptest::prelude::*;
use tropopt::mpg::{build_game, play_value, StrategyPair, TwoSidedSystem};
use tropopt::pseudolinear::AlcovedProblem;
use tropopt::scalar::{int, Rational};
use tropopt::{ExtScalar, TropMatrix};

pub fn e(v: i64) -> ExtScalar {
    ExtScalar::int(v)
}

pub const N: ExtScalar = ExtScalar::NegInf;

/// Entry that is finite with probability about 1/2.
pub fn entry(w: i64) -> impl Strategy<Value = ExtScalar> {
    prop_oneof![Just(ExtScalar::NegInf), (-w..=w).prop_map(ExtScalar::int)]
}

pub fn matrix(rows: usize, cols: usize, w: i64) -> impl Strategy<Value = Vec<Vec<ExtScalar>>> {
    proptest::collection::vec(proptest::collection::vec(entry(w), cols), rows)
}

/// Two-sided system where every column of `A` and every row of `B` has a finite entry.
pub fn game_system(max_m: usize, max_n: usize, w: i64) -> impl Strategy<Value = TwoSidedSystem> {
    (1..=max_m, 1..=max_n)
        .prop_flat_map(move |(m, n)| {
            (matrix(m, n, w), matrix(m, n, w), proptest::collection::vec(-w..=w, m + n))
        })
        .prop_map(|(mut a, mut b, fill)| {
            let (m, n) = (a.len(), a[0].len());
            for j in 0..n {
                if (0..m).all(|i| !a[i][j].is_finite()) {
                    a[j % m][j] = e(fill[j]);
                }
            }
            for i in 0..m {
                if b[i].iter().all(|v| !v.is_finite()) {
                    b[i][i % n] = e(fill[n + i]);
                }
            }
            TwoSidedSystem::new(TropMatrix::max_plus(a), TropMatrix::max_plus(b)).unwrap()
        })
}

/// All positional strategies picking finite entries: `choices[k]` lists the options of node `k`.
pub fn all_strategies(choices: &[Vec<usize>]) -> Vec<Vec<Option<usize>>> {
    let mut out: Vec<Vec<Option<usize>>> = vec![Vec::new()];
    for opts in choices {
        let mut next = Vec::new();
        for prefix in &out {
            if opts.is_empty() {
                let mut p = prefix.clone();
                p.push(None);
                next.push(p);
            }
            for &o in opts {
                let mut p = prefix.clone();
                p.push(Some(o));
                next.push(p);
            }
        }
        out = next;
    }
    out
}

pub fn sigma_choices(sys: &TwoSidedSystem) -> Vec<Vec<usize>> {
    (0..sys.rows())
        .map(|i| (0..sys.cols()).filter(|&l| sys.b().get(i, l).is_finite()).collect())
        .collect()
}

pub fn tau_choices(sys: &TwoSidedSystem) -> Vec<Vec<usize>> {
    (0..sys.cols())
        .map(|j| (0..sys.rows()).filter(|&i| sys.a().get(i, j).is_finite()).collect())
        .collect()
}

/// `(max_sigma min_tau, min_tau max_sigma)` of `play_value` at every Min node.
pub fn brute_force_values(sys: &TwoSidedSystem) -> (Vec<Rational>, Vec<Rational>) {
    let g = build_game(sys).unwrap();
    let sigmas = all_strategies(&sigma_choices(sys));
    let taus = all_strategies(&tau_choices(sys));
    let n = sys.cols();
    let mut table = vec![vec![vec![int(0); n]; taus.len()]; sigmas.len()];
    for (a, s) in sigmas.iter().enumerate() {
        for (b, t) in taus.iter().enumerate() {
            let pair = StrategyPair { sigma: s.clone(), tau: t.clone() };
            for j in 0..n {
                table[a][b][j] = play_value(&g, j, &pair).unwrap();
            }
        }
    }
    let lower = (0..n)
        .map(|j| {
            (0..sigmas.len())
                .map(|a| (0..taus.len()).map(|b| table[a][b][j].clone()).min().unwrap())
                .max()
                .unwrap()
        })
        .collect();
    let upper = (0..n)
        .map(|j| {
            (0..taus.len())
                .map(|b| (0..sigmas.len()).map(|a| table[a][b][j].clone()).max().unwrap())
                .min()
                .unwrap()
        })
        .collect();
    (lower, upper)
}

pub const P: ExtScalar = ExtScalar::PosInf;

pub fn q(num: i64, den: i64) -> Rational {
    tropopt::scalar::ratio(num, den)
}

/// The two-variable worked instance with optimum 1 at `x = (-1, 1)`.
pub fn worked_example() -> tropopt::pseudolinear::PseudolinearProblem {
    tropopt::pseudolinear::PseudolinearProblem::new(
        TropMatrix::max_plus(vec![vec![N, e(-2)], vec![e(3), N]]),
        TropMatrix::max_plus(vec![vec![e(1), e(0)], vec![N, e(1)]]),
        vec![N, N],
        vec![N, e(1)],
        vec![e(0), N],
        vec![e(-1), e(0)],
    )
    .unwrap()
}

/// Constraints force `x_1 = x_2`; the objective `max(-x_1, x_2)` has no
/// finite unconstrained lower bound; optimum 0.
pub fn swapped_example() -> tropopt::pseudolinear::PseudolinearProblem {
    tropopt::pseudolinear::PseudolinearProblem::new(
        TropMatrix::max_plus(vec![vec![e(0), N], vec![N, e(0)]]),
        TropMatrix::max_plus(vec![vec![N, e(0)], vec![e(0), N]]),
        vec![N, N],
        vec![N, N],
        vec![e(0), N],
        vec![P, e(0)],
    )
    .unwrap()
}

/// Alcoved problems containing a point `y`: `R_jk <= y_j - y_k` gives
/// `R ⊗ y <= y`, and the box is drawn around `y`.
pub fn alcoved(max_n: usize, w: i64) -> impl Strategy<Value = AlcovedProblem> {
    (1..=max_n).prop_flat_map(move |n| {
        (
            prop::collection::vec(-w..=w, n),
            prop::collection::vec(prop::option::weighted(0.5, 0..=w), n * n),
            prop::collection::vec(prop::option::weighted(0.5, 0..=w), n),
            prop::collection::vec(prop::option::weighted(0.5, 0..=w), n),
            prop::collection::vec(prop::option::weighted(0.6, -w..=w), n),
            prop::collection::vec(prop::option::weighted(0.6, -w..=w), n),
        )
            .prop_map(move |(y, slack, lo, hi, p, q)| {
                let r = (0..n)
                    .map(|j| {
                        (0..n)
                            .map(|k| match slack[j * n + k] {
                                Some(s) if (y[j] - y[k]).min(w) - s >= -w => ExtScalar::int((y[j] - y[k]).min(w) - s),
                                _ => ExtScalar::NegInf,
                            })
                            .collect()
                    })
                    .collect();
                AlcovedProblem {
                    r: TropMatrix::max_plus(r),
                    l: (0..n).map(|j| lo[j].map_or(ExtScalar::NegInf, |a| ExtScalar::int((y[j] - a).max(-w)))).collect(),
                    u: (0..n).map(|j| hi[j].map_or(ExtScalar::PosInf, |a| ExtScalar::int((y[j] + a).min(w)))).collect(),
                    p: p.iter().map(|v| v.map_or(ExtScalar::NegInf, ExtScalar::int)).collect(),
                    q: q.iter().map(|v| v.map_or(ExtScalar::PosInf, ExtScalar::int)).collect(),
                }
            })
    })
}
