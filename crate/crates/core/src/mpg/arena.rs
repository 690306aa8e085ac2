//! Exact integer mean-payoff game solver.
//!
//! Weights are scaled to integers by the common denominator of the input.
//! Threshold questions ("is the value at least `t`?") are answered by a
//! retreat-vertex strategy improvement on a reweighted game without zero
//! cycles; exact values come from splitting the arena into traps along
//! such thresholds until every part has a single value.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::scalar::{ExtScalar, Rational};

/// Where a node ends up before any threshold is asked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Class {
    /// Max can force play into a Min node without moves.
    PosInf,
    /// Min can force play into a Max node without moves.
    NegInf,
    /// Finite value.
    Core,
}

/// Bipartite game over integers. Min node `j` moves to Max node `i` with
/// weight `alpha`; Max node `i` moves to Min node `l` with weight `beta`.
/// Values are per Min-Max round and live in the original (unscaled) units
/// once divided by `scale`.
#[derive(Clone, Debug)]
pub(crate) struct Arena {
    pub n_min: usize,
    pub n_max: usize,
    pub min_adj: Vec<Vec<(usize, i128)>>,
    pub max_adj: Vec<Vec<(usize, i128)>>,
    pub scale: BigInt,
    pub class_min: Vec<Class>,
    pub class_max: Vec<Class>,
    /// Moves fixed by the attractor computation (or defaults there).
    pub pre_sigma: Vec<Option<usize>>,
    pub pre_tau: Vec<Option<usize>>,
}

/// Outcome of one threshold question on a sub-arena.
#[derive(Clone, Debug)]
pub(crate) struct Decision {
    pub max_wins_min: Vec<bool>,
    pub max_wins_max: Vec<bool>,
    pub sigma: Vec<Option<usize>>,
    pub tau: Vec<Option<usize>>,
}

/// Node subset: active Min nodes and active Max nodes.
#[derive(Clone, Debug)]
pub(crate) struct Region {
    pub min: Vec<bool>,
    pub max: Vec<bool>,
}

impl Region {
    fn is_empty(&self) -> bool {
        !self.min.iter().any(|&b| b) && !self.max.iter().any(|&b| b)
    }
}

/// Exact values and optimal positional strategies.
#[derive(Clone, Debug)]
pub(crate) struct Solved {
    pub min_values: Vec<ExtScalar>,
    pub max_values: Vec<ExtScalar>,
    pub sigma: Vec<Option<usize>>,
    pub tau: Vec<Option<usize>>,
}

fn to_i128(v: &BigInt) -> Result<i128> {
    v.to_i128().ok_or(Error::Overflow)
}

impl Arena {
    /// Builds the arena from rational arcs. `min_arcs[j]` lists `(i, alpha)`,
    /// `max_arcs[i]` lists `(l, beta)`; both sorted by target.
    pub fn new(
        n_min: usize,
        n_max: usize,
        min_arcs: &[Vec<(usize, Rational)>],
        max_arcs: &[Vec<(usize, Rational)>],
    ) -> Result<Self> {
        let scale = crate::scalar::common_denominator(
            min_arcs.iter().chain(max_arcs).flatten().map(|(_, w)| w),
        );
        let s = Rational::from_integer(scale.clone());
        let conv = |arcs: &[Vec<(usize, Rational)>]| -> Result<Vec<Vec<(usize, i128)>>> {
            arcs.iter()
                .map(|row| {
                    row.iter()
                        .map(|(t, w)| Ok((*t, to_i128(&(w * &s).to_integer())?)))
                        .collect()
                })
                .collect()
        };
        let mut arena = Arena {
            n_min,
            n_max,
            min_adj: conv(min_arcs)?,
            max_adj: conv(max_arcs)?,
            scale,
            class_min: vec![Class::Core; n_min],
            class_max: vec![Class::Core; n_max],
            pre_sigma: vec![None; n_max],
            pre_tau: vec![None; n_min],
        };
        arena.classify();
        Ok(arena)
    }

    /// Attractor pass for dead ends.
    fn classify(&mut self) {
        let (n_min, n_max) = (self.n_min, self.n_max);
        let mut pred_of_min: Vec<Vec<usize>> = vec![Vec::new(); n_min];
        for (i, arcs) in self.max_adj.iter().enumerate() {
            for &(l, _) in arcs {
                pred_of_min[l].push(i);
            }
        }
        let mut pred_of_max: Vec<Vec<usize>> = vec![Vec::new(); n_max];
        for (j, arcs) in self.min_adj.iter().enumerate() {
            for &(i, _) in arcs {
                pred_of_max[i].push(j);
            }
        }

        // Max attracts towards Min nodes without moves.
        // Join order; attractor moves must point to strictly earlier nodes.
        let mut rank_min = vec![usize::MAX; n_min];
        let mut rank_max = vec![usize::MAX; n_max];
        let mut clock = 0usize;
        let mut left: Vec<usize> = self.min_adj.iter().map(Vec::len).collect();
        let mut queue: VecDeque<usize> = VecDeque::new();
        for j in 0..n_min {
            if left[j] == 0 {
                self.class_min[j] = Class::PosInf;
                rank_min[j] = clock;
                clock += 1;
                queue.push_back(j);
            }
        }
        while let Some(l) = queue.pop_front() {
            for &i in &pred_of_min[l] {
                if self.class_max[i] == Class::PosInf {
                    continue;
                }
                self.class_max[i] = Class::PosInf;
                rank_max[i] = clock;
                clock += 1;
                for &j in &pred_of_max[i] {
                    if self.class_min[j] == Class::PosInf {
                        continue;
                    }
                    left[j] -= 1;
                    if left[j] == 0 {
                        self.class_min[j] = Class::PosInf;
                        rank_min[j] = clock;
                        clock += 1;
                        queue.push_back(j);
                    }
                }
            }
        }

        // Min attracts towards Max nodes without moves, outside the +inf part.
        let mut left: Vec<usize> = self.max_adj.iter().map(Vec::len).collect();
        let mut queue: VecDeque<usize> = VecDeque::new();
        for i in 0..n_max {
            if self.class_max[i] == Class::Core && left[i] == 0 {
                self.class_max[i] = Class::NegInf;
                rank_max[i] = clock;
                clock += 1;
                queue.push_back(i);
            }
        }
        while let Some(i) = queue.pop_front() {
            for &j in &pred_of_max[i] {
                if self.class_min[j] != Class::Core {
                    continue;
                }
                self.class_min[j] = Class::NegInf;
                rank_min[j] = clock;
                clock += 1;
                for &k in &pred_of_min[j] {
                    if self.class_max[k] != Class::Core {
                        continue;
                    }
                    left[k] -= 1;
                    if left[k] == 0 {
                        self.class_max[k] = Class::NegInf;
                        rank_max[k] = clock;
                        clock += 1;
                        queue.push_back(k);
                    }
                }
            }
        }

        for i in 0..n_max {
            let arcs = &self.max_adj[i];
            self.pre_sigma[i] = match self.class_max[i] {
                Class::PosInf => arcs
                    .iter()
                    .find(|(l, _)| self.class_min[*l] == Class::PosInf && rank_min[*l] < rank_max[i])
                    .map(|(l, _)| *l),
                _ => arcs.first().map(|(l, _)| *l),
            };
        }
        for j in 0..n_min {
            let arcs = &self.min_adj[j];
            self.pre_tau[j] = match self.class_min[j] {
                Class::NegInf => arcs
                    .iter()
                    .find(|(k, _)| self.class_max[*k] == Class::NegInf && rank_max[*k] < rank_min[j])
                    .map(|(k, _)| *k),
                _ => arcs.first().map(|(i, _)| *i),
            };
        }
    }

    pub fn core(&self) -> Region {
        Region {
            min: self.class_min.iter().map(|c| *c == Class::Core).collect(),
            max: self.class_max.iter().map(|c| *c == Class::Core).collect(),
        }
    }

    /// Bound on the absolute value of any finite per-round value, scaled.
    fn weight_bound(&self) -> i128 {
        let a = self.min_adj.iter().flatten().map(|(_, w)| w.abs()).max().unwrap_or(0);
        let b = self.max_adj.iter().flatten().map(|(_, w)| w.abs()).max().unwrap_or(0);
        a + b
    }

    fn denom_bound(&self) -> i64 {
        self.n_min.max(1) as i64
    }

    /// Does Max secure a value `>= t` (or `> t` when `strict`) on `region`?
    /// `t` is in scaled units. Only arcs inside `region` are used.
    pub fn decide(&self, region: &Region, t: &Rational, strict: bool) -> Result<Decision> {
        let (n_min, n_max) = (self.n_min, self.n_max);
        let p = to_i128(t.numer())?;
        let q = to_i128(t.denom())?;
        let k = self.n_min as i128 + 1;
        let step: i128 = if strict { -1 } else { 1 };
        let nodes = (n_min + n_max + 1) as i128;
        let limit = i128::MAX / (4 * nodes);
        let check = |w: Option<i128>| -> Result<i128> {
            match w {
                Some(w) if w.abs() < limit => Ok(w),
                _ => Err(Error::Overflow),
            }
        };

        let mut wmin: Vec<Vec<(usize, i128)>> = vec![Vec::new(); n_min];
        for j in 0..n_min {
            if !region.min[j] {
                continue;
            }
            for &(i, a) in &self.min_adj[j] {
                if region.max[i] {
                    let w = check(k.checked_mul(q).and_then(|kq| kq.checked_mul(a)))?;
                    wmin[j].push((i, w));
                }
            }
        }
        let mut wmax: Vec<Vec<(usize, i128)>> = vec![Vec::new(); n_max];
        for i in 0..n_max {
            if !region.max[i] {
                continue;
            }
            for &(l, b) in &self.max_adj[i] {
                if region.min[l] {
                    let w = q
                        .checked_mul(b)
                        .and_then(|qb| qb.checked_sub(p))
                        .and_then(|x| x.checked_mul(k))
                        .and_then(|x| x.checked_add(step));
                    wmax[i].push((l, check(w)?));
                }
            }
        }

        // choice[i]: position in wmax[i], or None for the retreat.
        let mut choice: Vec<Option<usize>> = vec![None; n_max];
        let (dmin, dmax) = loop {
            let (dmin, dmax) = self.distances(region, &wmin, &wmax, &choice);
            let mut improved = false;
            for i in 0..n_max {
                if !region.max[i] {
                    continue;
                }
                let cur = dmax[i];
                let mut best: Option<(usize, Option<i128>)> = None;
                for (pos, &(l, w)) in wmax[i].iter().enumerate() {
                    let val = dmin[l].map(|d| d + w);
                    let better = match &best {
                        None => true,
                        Some((_, bv)) => gt(val, *bv),
                    };
                    if better {
                        best = Some((pos, val));
                    }
                }
                if let Some((pos, val)) = best {
                    if gt(val, cur) {
                        choice[i] = Some(pos);
                        improved = true;
                    }
                }
            }
            if !improved {
                break (dmin, dmax);
            }
        };

        let max_wins_min: Vec<bool> = (0..n_min).map(|j| region.min[j] && dmin[j].is_none()).collect();
        let max_wins_max: Vec<bool> = (0..n_max).map(|i| region.max[i] && dmax[i].is_none()).collect();
        let sigma = (0..n_max)
            .map(|i| {
                if !region.max[i] {
                    return None;
                }
                match choice[i] {
                    Some(pos) => Some(wmax[i][pos].0),
                    None => wmax[i].first().map(|(l, _)| *l),
                }
            })
            .collect();
        let tau = (0..n_min)
            .map(|j| {
                if !region.min[j] {
                    return None;
                }
                if dmin[j].is_none() {
                    return wmin[j].first().map(|(i, _)| *i);
                }
                let mut best: Option<(usize, i128)> = None;
                for &(i, w) in &wmin[j] {
                    if let Some(d) = dmax[i] {
                        if best.is_none_or(|(_, b)| w + d < b) {
                            best = Some((i, w + d));
                        }
                    }
                }
                best.map(|(i, _)| i)
            })
            .collect();
        Ok(Decision { max_wins_min, max_wins_max, sigma, tau })
    }

    /// Shortest distances to the retreat under Max's current choices;
    /// `None` means the retreat is unreachable.
    fn distances(
        &self,
        region: &Region,
        wmin: &[Vec<(usize, i128)>],
        wmax: &[Vec<(usize, i128)>],
        choice: &[Option<usize>],
    ) -> (Vec<Option<i128>>, Vec<Option<i128>>) {
        let (n_min, n_max) = (self.n_min, self.n_max);
        // Reverse arcs into Max nodes from Min nodes.
        let mut rev_max: Vec<Vec<(usize, i128)>> = vec![Vec::new(); n_max];
        for j in 0..n_min {
            for &(i, w) in &wmin[j] {
                rev_max[i].push((j, w));
            }
        }
        // Reverse chosen arcs into Min nodes from Max nodes.
        let mut rev_min: Vec<Vec<(usize, i128)>> = vec![Vec::new(); n_min];
        let mut dmax: Vec<Option<i128>> = vec![None; n_max];
        let mut dmin: Vec<Option<i128>> = vec![None; n_min];
        let mut queue: VecDeque<usize> = VecDeque::new();
        let mut queued = vec![false; n_max];
        for i in 0..n_max {
            if !region.max[i] {
                continue;
            }
            match choice[i] {
                Some(pos) => {
                    let (l, w) = wmax[i][pos];
                    rev_min[l].push((i, w));
                }
                None => {
                    dmax[i] = Some(0);
                    queue.push_back(i);
                    queued[i] = true;
                }
            }
        }
        let budget = (n_min + n_max + 2) * (n_min + n_max + 2);
        let mut relaxations = 0usize;
        // Label-correcting search over Max nodes; Min nodes are relaxed in between.
        while let Some(i) = queue.pop_front() {
            queued[i] = false;
            let di = dmax[i].expect("queued nodes have a distance");
            for &(j, w) in &rev_max[i] {
                let cand = di + w;
                if dmin[j].is_none_or(|d| cand < d) {
                    dmin[j] = Some(cand);
                    for &(k, wk) in &rev_min[j] {
                        let c2 = cand + wk;
                        if dmax[k].is_none_or(|d| c2 < d) {
                            dmax[k] = Some(c2);
                            relaxations += 1;
                            assert!(
                                relaxations <= budget * (n_max + 1),
                                "negative cycle under an improving strategy"
                            );
                            if !queued[k] {
                                queued[k] = true;
                                queue.push_back(k);
                            }
                        }
                    }
                }
            }
        }
        (dmin, dmax)
    }

    /// Scaled threshold for an unscaled value.
    fn scaled(&self, t: &Rational) -> Rational {
        t * Rational::from_integer(self.scale.clone())
    }

    fn unscaled(&self, t: &Rational) -> ExtScalar {
        ExtScalar::Finite(t / Rational::from_integer(self.scale.clone()))
    }

    /// The unique fraction with denominator `<= bound` in `[lo, hi)`.
    fn pick_fraction(&self, lo: &Rational, hi: &Rational) -> Rational {
        for d in 1..=self.denom_bound() {
            let d = BigInt::from(d);
            let e = (lo * Rational::from_integer(d.clone())).ceil();
            let c = e / Rational::from_integer(d);
            if c < *hi {
                return c;
            }
        }
        unreachable!("value interval contains no admissible fraction")
    }

    fn resolved(&self, lo: &Rational, hi: &Rational) -> bool {
        let n = BigInt::from(self.denom_bound());
        (hi - lo) * Rational::from_integer(&n * &n) < Rational::one()
    }

    fn initial_interval(&self) -> (Rational, Rational) {
        let w = self.weight_bound();
        (
            Rational::from_integer(BigInt::from(-w)),
            Rational::from_integer(BigInt::from(w + 1)),
        )
    }

    /// All values and a pair of optimal strategies.
    pub fn solve(&self) -> Result<Solved> {
        let (n_min, n_max) = (self.n_min, self.n_max);
        let mut min_values: Vec<ExtScalar> = self
            .class_min
            .iter()
            .map(|c| match c {
                Class::PosInf => ExtScalar::PosInf,
                Class::NegInf => ExtScalar::NegInf,
                Class::Core => ExtScalar::NegInf,
            })
            .collect();
        let mut max_values: Vec<ExtScalar> = self
            .class_max
            .iter()
            .map(|c| match c {
                Class::PosInf => ExtScalar::PosInf,
                _ => ExtScalar::NegInf,
            })
            .collect();
        let mut sigma = self.pre_sigma.clone();
        let mut tau = self.pre_tau.clone();

        let (lo, hi) = self.initial_interval();
        let mut stack = vec![(self.core(), lo, hi)];
        while let Some((region, lo, hi)) = stack.pop() {
            if region.is_empty() {
                continue;
            }
            if self.resolved(&lo, &hi) {
                let c = self.pick_fraction(&lo, &hi);
                let up = self.decide(&region, &c, false)?;
                let down = self.decide(&region, &c, true)?;
                let value = self.unscaled(&c);
                for j in 0..n_min {
                    if region.min[j] {
                        assert!(up.max_wins_min[j] && !down.max_wins_min[j]);
                        min_values[j] = value.clone();
                        tau[j] = down.tau[j];
                    }
                }
                for i in 0..n_max {
                    if region.max[i] {
                        max_values[i] = value.clone();
                        sigma[i] = up.sigma[i];
                    }
                }
                continue;
            }
            let mid = (&lo + &hi) / Rational::from_integer(BigInt::from(2));
            let dec = self.decide(&region, &mid, false)?;
            let win = Region {
                min: (0..n_min).map(|j| region.min[j] && dec.max_wins_min[j]).collect(),
                max: (0..n_max).map(|i| region.max[i] && dec.max_wins_max[i]).collect(),
            };
            let lose = Region {
                min: (0..n_min).map(|j| region.min[j] && !dec.max_wins_min[j]).collect(),
                max: (0..n_max).map(|i| region.max[i] && !dec.max_wins_max[i]).collect(),
            };
            stack.push((lose, lo, mid.clone()));
            stack.push((win, mid, hi));
        }
        Ok(Solved { min_values, max_values, sigma, tau })
    }

    /// Whether every Min node of the core is won by Max at `t` (scaled).
    fn core_min_all_win(&self, core: &Region, t: &Rational, strict: bool) -> Result<(bool, Decision)> {
        let dec = self.decide(core, t, strict)?;
        let all = (0..self.n_min).all(|j| !core.min[j] || dec.max_wins_min[j]);
        Ok((all, dec))
    }

    fn has_neg_inf_min(&self) -> bool {
        self.class_min.contains(&Class::NegInf)
    }

    /// Smallest value over Min nodes.
    pub fn min_value(&self) -> Result<ExtScalar> {
        if self.has_neg_inf_min() {
            return Ok(ExtScalar::NegInf);
        }
        let core = self.core();
        if !core.min.iter().any(|&b| b) {
            return Ok(if self.n_min == 0 { ExtScalar::NegInf } else { ExtScalar::PosInf });
        }
        let (mut lo, mut hi) = self.initial_interval();
        let two = Rational::from_integer(BigInt::from(2));
        while !self.resolved(&lo, &hi) {
            let mid = (&lo + &hi) / &two;
            if self.core_min_all_win(&core, &mid, false)?.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(self.unscaled(&self.pick_fraction(&lo, &hi)))
    }

    /// `min value >= t` (or `> t`), with `t` unscaled.
    pub fn min_value_at_least(&self, t: &Rational, strict: bool) -> Result<bool> {
        if self.has_neg_inf_min() {
            return Ok(false);
        }
        let core = self.core();
        Ok(self.core_min_all_win(&core, &self.scaled(t), strict)?.0)
    }

    /// A Max strategy securing `>= t` (unscaled) from every Min node, if one exists.
    pub fn securing_sigma(&self, t: &Rational) -> Result<Option<Vec<Option<usize>>>> {
        if self.has_neg_inf_min() {
            return Ok(None);
        }
        let core = self.core();
        let (all, dec) = self.core_min_all_win(&core, &self.scaled(t), false)?;
        if !all {
            return Ok(None);
        }
        let sigma = (0..self.n_max)
            .map(|i| if core.max[i] { dec.sigma[i] } else { self.pre_sigma[i] })
            .collect();
        Ok(Some(sigma))
    }

    /// Min nodes whose value is `<= t` (unscaled) and a Min strategy that keeps
    /// them there. Nodes outside the core keep their attractor moves.
    pub fn holding_tau(&self, t: &Rational) -> Result<(Vec<bool>, Vec<Option<usize>>)> {
        let core = self.core();
        let dec = self.decide(&core, &self.scaled(t), true)?;
        let held = (0..self.n_min)
            .map(|j| match self.class_min[j] {
                Class::NegInf => true,
                Class::PosInf => false,
                Class::Core => !dec.max_wins_min[j],
            })
            .collect();
        let tau = (0..self.n_min)
            .map(|j| if core.min[j] { dec.tau[j] } else { self.pre_tau[j] })
            .collect();
        Ok((held, tau))
    }

    /// Per-node minimal path weight (scaled, empty path allowed) in the graph
    /// where Max follows `sigma`. `None` if some weight is unbounded below.
    pub fn potentials(&self, sigma: &[Option<usize>]) -> Option<Vec<i128>> {
        let chosen: Vec<Option<(usize, i128)>> = (0..self.n_max)
            .map(|i| sigma[i].and_then(|l| self.max_adj[i].iter().find(|(t, _)| *t == l).copied()))
            .collect();
        let mut y = vec![0i128; self.n_min];
        for _ in 0..=self.n_min + 1 {
            let mut changed = false;
            for j in 0..self.n_min {
                for &(i, a) in &self.min_adj[j] {
                    let Some((l, b)) = chosen[i] else { continue };
                    let cand = a + b + y[l];
                    if cand < y[j] {
                        y[j] = cand;
                        changed = true;
                    }
                }
            }
            if !changed {
                return Some(y);
            }
        }
        None
    }

    pub fn scale_rational(&self) -> Rational {
        Rational::from_integer(self.scale.clone())
    }
}

/// `a > b` with `None` standing for `+inf`.
fn gt(a: Option<i128>, b: Option<i128>) -> bool {
    match (a, b) {
        (None, None) => false,
        (None, Some(_)) => true,
        (Some(_), None) => false,
        (Some(x), Some(y)) => x > y,
    }
}
