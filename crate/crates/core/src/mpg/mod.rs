//! Mean-payoff games attached to two-sided systems `A ⊗ x <= B ⊗ x`.
//!
//! Min owns one node per column (variable), Max one node per row
//! (constraint). Min moves from column `j` to row `i` paying `a_ij`
//! (arc weight `-a_ij`), Max moves from row `i` to column `l` gaining `b_il`.
//! The value of a Min node is the mean weight per round of the cycle that
//! optimal play ends up in.
//!
//! ```
//! use tropopt::mpg::{solve_values, TwoSidedSystem};
//! use tropopt::{ExtScalar, TropMatrix};
//!
//! let sys = TwoSidedSystem::new(
//!     TropMatrix::max_plus(vec![vec![ExtScalar::int(0)]]),
//!     TropMatrix::max_plus(vec![vec![ExtScalar::int(3)]]),
//! )
//! .unwrap();
//! assert_eq!(solve_values(&sys).unwrap().chi, vec![ExtScalar::int(3)]);
//! ```

mod arena;

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::matrix::{lift, vec_leq, TropMatrix, Typing};
use crate::scalar::{int, ExtScalar, Rational};

pub(crate) use arena::Arena;

/// Positional strategy: one chosen successor per node, `None` only for
/// nodes without any move.
pub type Strategy = Vec<Option<usize>>;

/// The system `A ⊗ x <= B ⊗ x` with `A`, `B` both `m x n` max-plus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoSidedSystem {
    a: TropMatrix,
    b: TropMatrix,
}

impl TwoSidedSystem {
    pub fn new(a: TropMatrix, b: TropMatrix) -> Result<Self> {
        if a.typing() != Typing::MaxPlus || b.typing() != Typing::MaxPlus {
            return Err(Error::TypingMismatch("two-sided systems are max-plus".into()));
        }
        if a.rows() != b.rows() || a.cols() != b.cols() {
            return Err(Error::DimensionMismatch(format!(
                "A is {}x{}, B is {}x{}",
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols()
            )));
        }
        Ok(TwoSidedSystem { a, b })
    }

    pub fn a(&self) -> &TropMatrix {
        &self.a
    }

    pub fn b(&self) -> &TropMatrix {
        &self.b
    }

    /// Number of constraints (Max nodes).
    pub fn rows(&self) -> usize {
        self.a.rows()
    }

    /// Number of variables (Min nodes).
    pub fn cols(&self) -> usize {
        self.a.cols()
    }

    /// Whether `A ⊗ x <= B ⊗ x` holds.
    pub fn satisfied_by(&self, x: &[ExtScalar]) -> Result<bool> {
        let lhs = self.a.mul_vec(x)?;
        let rhs = self.b.mul_vec(x)?;
        Ok(vec_leq(&lhs, &rhs))
    }

    /// Fails with `IsolatedNode` if some column of `A` or row of `B` is all `-inf`.
    pub fn check_moves(&self) -> Result<()> {
        for j in 0..self.cols() {
            if (0..self.rows()).all(|i| !self.a.get(i, j).is_finite()) {
                return Err(Error::IsolatedNode { side: "Min", index: j });
            }
        }
        for i in 0..self.rows() {
            if self.b.row(i).iter().all(|v| !v.is_finite()) {
                return Err(Error::IsolatedNode { side: "Max", index: i });
            }
        }
        Ok(())
    }

    pub(crate) fn arena(&self) -> Result<Arena> {
        let (m, n) = (self.rows(), self.cols());
        let min_arcs: Vec<Vec<(usize, Rational)>> = (0..n)
            .map(|j| {
                (0..m)
                    .filter_map(|i| self.a.get(i, j).finite().map(|w| (i, -w)))
                    .collect()
            })
            .collect();
        let max_arcs: Vec<Vec<(usize, Rational)>> = (0..m)
            .map(|i| {
                (0..n)
                    .filter_map(|l| self.b.get(i, l).finite().map(|w| (l, w.clone())))
                    .collect()
            })
            .collect();
        Arena::new(n, m, &min_arcs, &max_arcs)
    }

    /// Checks that `sigma` picks finite entries of `B`, one per row.
    pub fn validate_sigma(&self, sigma: &[Option<usize>]) -> Result<()> {
        if sigma.len() != self.rows() {
            return Err(Error::InvalidStrategy(format!(
                "sigma has {} entries for {} rows",
                sigma.len(),
                self.rows()
            )));
        }
        for (i, s) in sigma.iter().enumerate() {
            match s {
                Some(l) if *l < self.cols() && self.b.get(i, *l).is_finite() => {}
                None if self.b.row(i).iter().all(|v| !v.is_finite()) => {}
                _ => return Err(Error::InvalidStrategy(format!("sigma({i}) = {s:?}"))),
            }
        }
        Ok(())
    }

    /// Checks that `tau` picks finite entries of `A`, one per column.
    pub fn validate_tau(&self, tau: &[Option<usize>]) -> Result<()> {
        if tau.len() != self.cols() {
            return Err(Error::InvalidStrategy(format!(
                "tau has {} entries for {} columns",
                tau.len(),
                self.cols()
            )));
        }
        for (j, t) in tau.iter().enumerate() {
            match t {
                Some(i) if *i < self.rows() && self.a.get(*i, j).is_finite() => {}
                None if (0..self.rows()).all(|i| !self.a.get(i, j).is_finite()) => {}
                _ => return Err(Error::InvalidStrategy(format!("tau({j}) = {t:?}"))),
            }
        }
        Ok(())
    }
}

/// One weighted arc of a [`GameGraph`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameArc {
    pub from: usize,
    pub to: usize,
    pub weight: Rational,
}

/// Bipartite game graph: Min nodes are columns, Max nodes are rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameGraph {
    pub min_nodes: usize,
    pub max_nodes: usize,
    /// Min node `j` to Max node `i`, weight `-a_ij`.
    pub min_arcs: Vec<GameArc>,
    /// Max node `i` to Min node `l`, weight `b_il`.
    pub max_arcs: Vec<GameArc>,
}

impl GameGraph {
    pub fn node_count(&self) -> usize {
        self.min_nodes + self.max_nodes
    }

    pub fn arc_count(&self) -> usize {
        self.min_arcs.len() + self.max_arcs.len()
    }

    fn min_arc(&self, j: usize, i: usize) -> Option<&GameArc> {
        self.min_arcs.iter().find(|a| a.from == j && a.to == i)
    }

    fn max_arc(&self, i: usize, l: usize) -> Option<&GameArc> {
        self.max_arcs.iter().find(|a| a.from == i && a.to == l)
    }
}

/// Builds the game of `sys`, requiring a move at every node.
pub fn build_game(sys: &TwoSidedSystem) -> Result<GameGraph> {
    sys.check_moves()?;
    let (m, n) = (sys.rows(), sys.cols());
    let mut min_arcs = Vec::new();
    for j in 0..n {
        for i in 0..m {
            if let Some(w) = sys.a.get(i, j).finite() {
                min_arcs.push(GameArc { from: j, to: i, weight: -w });
            }
        }
    }
    let mut max_arcs = Vec::new();
    for i in 0..m {
        for l in 0..n {
            if let Some(w) = sys.b.get(i, l).finite() {
                max_arcs.push(GameArc { from: i, to: l, weight: w.clone() });
            }
        }
    }
    Ok(GameGraph { min_nodes: n, max_nodes: m, min_arcs, max_arcs })
}

/// Positional strategies of both players.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategyPair {
    /// Max node (row) to Min node (column).
    pub sigma: Strategy,
    /// Min node (column) to Max node (row).
    pub tau: Strategy,
}

/// Mean weight per round of the cycle reached from Min node `j`.
pub fn play_value(g: &GameGraph, j: usize, s: &StrategyPair) -> Result<Rational> {
    if j >= g.min_nodes {
        return Err(Error::InvalidStrategy(format!("no Min node {j}")));
    }
    let mut seen: HashMap<usize, usize> = HashMap::new();
    // weights[k]: weight gained in round k
    let mut weights: Vec<Rational> = Vec::new();
    let mut cur = j;
    loop {
        if let Some(&start) = seen.get(&cur) {
            let total: Rational = weights[start..].iter().sum();
            let rounds = (weights.len() - start) as i64;
            return Ok(total / int(rounds));
        }
        seen.insert(cur, weights.len());
        let bad = || Error::InvalidStrategy(format!("strategy leaves the graph at Min node {cur}"));
        let i = s.tau.get(cur).copied().flatten().ok_or_else(bad)?;
        let a = g.min_arc(cur, i).ok_or_else(bad)?;
        let l = s.sigma.get(i).copied().flatten().ok_or_else(bad)?;
        let b = g.max_arc(i, l).ok_or_else(bad)?;
        weights.push(&a.weight + &b.weight);
        cur = l;
    }
}

/// Values of all nodes with an equilibrium pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameValues {
    /// Value of each Min node.
    pub chi: Vec<ExtScalar>,
    /// Value of each Max node.
    pub max_values: Vec<ExtScalar>,
    pub strategies: StrategyPair,
}

/// Exact game values and optimal positional strategies for both players.
pub fn solve_values(sys: &TwoSidedSystem) -> Result<GameValues> {
    let solved = sys.arena()?.solve()?;
    Ok(GameValues {
        chi: solved.min_values,
        max_values: solved.max_values,
        strategies: StrategyPair { sigma: solved.sigma, tau: solved.tau },
    })
}

/// `min_j chi_j`, the smallest value over Min nodes.
pub fn min_value(sys: &TwoSidedSystem) -> Result<ExtScalar> {
    sys.arena()?.min_value()
}

/// `min_j chi_j >= t`, or `> t` when `strict`.
pub fn min_value_at_least(sys: &TwoSidedSystem, t: &Rational, strict: bool) -> Result<bool> {
    sys.arena()?.min_value_at_least(t, strict)
}

/// The smallest value `c` together with a Max strategy securing `c` from
/// every Min node (so the one-player game under it has the same minimum).
pub fn optimal_max_strategy(sys: &TwoSidedSystem) -> Result<(ExtScalar, Strategy)> {
    let arena = sys.arena()?;
    let c = arena.min_value()?;
    let sigma = match &c {
        ExtScalar::Finite(v) => arena.securing_sigma(v)?.expect("the minimum is secured"),
        _ => arena.pre_sigma.clone(),
    };
    Ok((c, sigma))
}

/// Min nodes with value `<= t`, and a Min strategy keeping each of them `<= t`.
pub fn holding_min_strategy(sys: &TwoSidedSystem, t: &Rational) -> Result<(Vec<bool>, Strategy)> {
    sys.arena()?.holding_tau(t)
}

/// A finite `x` with `A ⊗ x <= B ⊗ x`, if one exists.
///
/// One exists iff every Min node has a nonnegative value. It is read off
/// as shortest-path potentials under a Max strategy securing `0`.
pub fn feasible_finite(sys: &TwoSidedSystem) -> Result<Option<Vec<Rational>>> {
    let arena = sys.arena()?;
    let Some(sigma) = arena.securing_sigma(&Rational::from_integer(0.into()))? else {
        return Ok(None);
    };
    let y = arena
        .potentials(&sigma)
        .expect("a strategy securing 0 leaves no negative cycle");
    let scale = arena.scale_rational();
    let x: Vec<Rational> = y.iter().map(|v| Rational::from_integer((*v).into()) / &scale).collect();
    assert!(
        sys.satisfied_by(&lift(&x))?,
        "potentials of a securing strategy must solve the system"
    );
    Ok(Some(x))
}

/// Replaces entries not selected by `tau` (in `A`) or `sigma` (in `B`) by `-inf`.
pub fn restrict_strategies(
    sys: &TwoSidedSystem,
    tau: Option<&[Option<usize>]>,
    sigma: Option<&[Option<usize>]>,
) -> Result<TwoSidedSystem> {
    let (m, n) = (sys.rows(), sys.cols());
    let mut a = sys.a.clone();
    let mut b = sys.b.clone();
    if let Some(tau) = tau {
        sys.validate_tau(tau)?;
        for j in 0..n {
            for i in 0..m {
                if tau[j] != Some(i) {
                    a.set(i, j, ExtScalar::NegInf)?;
                }
            }
        }
    }
    if let Some(sigma) = sigma {
        sys.validate_sigma(sigma)?;
        for i in 0..m {
            for l in 0..n {
                if sigma[i] != Some(l) {
                    b.set(i, l, ExtScalar::NegInf)?;
                }
            }
        }
    }
    TwoSidedSystem::new(a, b)
}
