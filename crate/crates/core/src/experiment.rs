//! Random-instance experiments comparing bisection and Newton.
//!
//! For each dimension, `trials` instances are drawn with `n = dim` and
//! `m = dim` (or a fixed `m`). Only instances with feasible constraints and a
//! finite unconstrained lower bound are kept; on those both integer solvers
//! run and their iteration counts are averaged.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::generate::{gen_random, GenConfig};
use crate::io::Problem;
use crate::outcome::{Mode, NewtonMode, SolveOptions};
use crate::pseudolinear::{bisection_solve, initial_bounds, newton_solve};
use crate::scalar::ExtScalar;

/// Parameters of [`run_experiments`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub dims: Vec<usize>,
    /// Fixed number of constraints; `None` uses `m = dim`.
    pub rows: Option<usize>,
    /// Instances drawn per dimension, kept or not.
    pub trials: usize,
    pub range: i64,
    pub density: u32,
    pub seed: u64,
}

/// Outcome of one kept instance.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialResult {
    pub lower_bound_optimal: bool,
    pub bisection_iterations: usize,
    pub newton_iterations: usize,
    pub millis: f64,
}

/// One CSV row.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentRow {
    pub dim: usize,
    /// Kept instances.
    pub feasible: usize,
    pub lb_optimal_frac: f64,
    pub bisect_iters_mean: f64,
    pub newton_iters_mean: f64,
    pub ms_mean: f64,
}

/// Seed of trial `trial` at dimension `dim`, independent of evaluation order.
pub fn trial_seed(seed: u64, dim: usize, trial: usize) -> u64 {
    let mut z = seed ^ ((dim as u64) << 32) ^ (trial as u64);
    // splitmix64 finalizer
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Runs one trial; `None` if the instance is skipped.
pub fn run_trial(cfg: &GenConfig) -> Result<Option<TrialResult>> {
    let Problem::Linear(prob) = gen_random(cfg)? else {
        return Err(Error::InvalidParameter("experiments use pseudolinear instances".into()));
    };
    let bounds = initial_bounds(&prob)?;
    let ExtScalar::Finite(lower) = bounds.lower else { return Ok(None) };
    if bounds.witness.is_none() {
        return Ok(None);
    }
    let start = Instant::now();
    let bis = bisection_solve(&prob, &Mode::Integer, SolveOptions::default())?;
    let newton = newton_solve(&prob, &NewtonMode::Integer, SolveOptions::default())?;
    let millis = start.elapsed().as_secs_f64() * 1000.0;
    Ok(Some(TrialResult {
        lower_bound_optimal: bis.lambda() == Some(&lower),
        bisection_iterations: bis.iterations,
        newton_iterations: newton.iterations,
        millis,
    }))
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (sum, count) = xs.fold((0.0, 0usize), |(s, c), x| (s + x, c + 1));
    if count == 0 {
        f64::NAN
    } else {
        sum / count as f64
    }
}

/// Runs all trials in parallel; rows come out in `dims` order.
pub fn run_experiments(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRow>> {
    if cfg.dims.is_empty() || cfg.trials == 0 {
        return Err(Error::InvalidParameter("need at least one dimension and one trial".into()));
    }
    let jobs: Vec<(usize, usize)> =
        cfg.dims.iter().flat_map(|&dim| (0..cfg.trials).map(move |t| (dim, t))).collect();
    let results: Vec<Option<TrialResult>> = jobs
        .par_iter()
        .map(|&(dim, t)| {
            run_trial(&GenConfig {
                n: dim,
                m: cfg.rows.unwrap_or(dim),
                range: cfg.range,
                density: cfg.density,
                seed: trial_seed(cfg.seed, dim, t),
                quadratic: false,
            })
        })
        .collect::<Result<_>>()?;
    Ok(cfg
        .dims
        .iter()
        .zip(results.chunks(cfg.trials))
        .map(|(&dim, chunk)| {
            let kept: Vec<&TrialResult> = chunk.iter().flatten().collect();
            ExperimentRow {
                dim,
                feasible: kept.len(),
                lb_optimal_frac: mean(kept.iter().map(|r| f64::from(u8::from(r.lower_bound_optimal)))),
                bisect_iters_mean: mean(kept.iter().map(|r| r.bisection_iterations as f64)),
                newton_iters_mean: mean(kept.iter().map(|r| r.newton_iterations as f64)),
                ms_mean: mean(kept.iter().map(|r| r.millis)),
            }
        })
        .collect())
}

pub const CSV_HEADER: [&str; 6] =
    ["dim", "feasible", "lb_optimal_frac", "bisect_iters_mean", "newton_iters_mean", "ms_mean"];

/// Writes rows as CSV with [`CSV_HEADER`].
pub fn write_csv(rows: &[ExperimentRow], out: impl Write) -> Result<()> {
    let io_err = |e: csv::Error| Error::InvalidParameter(format!("cannot write CSV: {e}"));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(io_err)?;
    for r in rows {
        w.write_record([
            r.dim.to_string(),
            r.feasible.to_string(),
            format!("{:.4}", r.lb_optimal_frac),
            format!("{:.3}", r.bisect_iters_mean),
            format!("{:.3}", r.newton_iters_mean),
            format!("{:.3}", r.ms_mean),
        ])
        .map_err(io_err)?;
    }
    w.flush().map_err(|e| Error::InvalidParameter(format!("cannot write CSV: {e}")))?;
    Ok(())
}
