//! Runs every acceptance criterion and prints one PASS/FAIL line for each.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use common::oracles::*;
use common::{alcoved, all_strategies, e, tau_choices, N};
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;
use serde_json::Value;
use tropopt::experiment::{run_experiments, ExperimentConfig};
use tropopt::io::{parse_problem, Problem};
use tropopt::mpg::{build_game, feasible_finite, play_value, solve_values, StrategyPair, TwoSidedSystem};
use tropopt::pseudolinear::{
    bisection_solve, certify_optimal, initial_bounds, newton_solve, objective, optimality_witness, phi,
    solve_alcoved, PseudolinearProblem,
};
use tropopt::pseudoquadratic::bisection_solve_quad;
use tropopt::rounding::{round_bounded, Direction};
use tropopt::scalar::{int, ratio, Rational};
use tropopt::{ExtScalar, Mode, NewtonMode, SolveOptions, SolveOutcome, Status, TropMatrix};

type Verdict = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if $cond {
        } else {
            return Err(format!($($msg)+));
        }
    };
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn cli(args: &[&str]) -> Result<Value, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_tropopt")).args(args).output().map_err(|e| e.to_string())?;
    ensure!(out.status.code() == Some(0), "{args:?} exited with {:?}", out.status.code());
    serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())
}

fn trace_pairs(v: &Value) -> Vec<(String, String)> {
    v["trace"]
        .as_array()
        .map(|t| {
            t.iter()
                .map(|e| (e["lambda"].as_str().unwrap_or("").to_owned(), e["value"].as_str().unwrap_or("").to_owned()))
                .collect()
        })
        .unwrap_or_default()
}

fn golden_worked_example() -> Verdict {
    let file = data("worked.json");
    let path = file.to_str().unwrap();
    let Problem::Linear(prob) = parse_problem(&std::fs::read(&file).unwrap()).unwrap() else {
        return Err("worked example is not pseudolinear".into());
    };
    let start = Instant::now();
    let bis = cli(&["solve", path, "--method", "bisection", "--mode", "integer", "--trace"])?;
    let newton = cli(&["solve", path, "--method", "newton", "--mode", "integer", "--trace"])?;
    let elapsed = start.elapsed();
    ensure!(bis["lambda"] == "1", "bisection lambda {}", bis["lambda"]);
    let probes = trace_pairs(&bis);
    let expected = [("17/4", "2"), ("9/4", "5/6"), ("5/4", "1/6"), ("3/4", "-1/6")];
    ensure!(
        probes.iter().map(|(a, b)| (a.as_str(), b.as_str())).eq(expected),
        "bisection probes {probes:?}"
    );
    let x: Vec<Rational> = bis["x"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| tropopt::scalar::parse_rational(v.as_str().unwrap()).unwrap())
        .collect();
    ensure!(prob.is_feasible(&x).unwrap(), "bisection x infeasible");
    ensure!(objective(&prob, &x).unwrap() == e(1), "bisection x has objective != 1");
    let iterates: Vec<String> = trace_pairs(&newton).into_iter().map(|(l, _)| l).collect();
    ensure!(iterates == ["8", "2", "1"], "Newton iterates {iterates:?}");
    ensure!(newton["x"] == serde_json::json!(["-1", "1"]), "Newton x {}", newton["x"]);
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(format!("probes 17/4 9/4 5/4 3/4, iterates 8 2 1, x = (-1, 1), {elapsed:.0?} for both runs"))
}

fn golden_game() -> Verdict {
    let sys = TwoSidedSystem::new(
        TropMatrix::max_plus(vec![vec![e(3), N], vec![e(7), N], vec![N, e(0)]]),
        TropMatrix::max_plus(vec![vec![e(2), N], vec![N, e(1)], vec![e(-3), e(4)]]),
    )
    .unwrap();
    let g = build_game(&sys).unwrap();
    let pair = StrategyPair { sigma: vec![Some(0), Some(1), Some(1)], tau: vec![Some(0), Some(2)] };
    let plays = [play_value(&g, 0, &pair).unwrap(), play_value(&g, 1, &pair).unwrap()];
    ensure!(plays == [int(-1), int(4)], "play values {plays:?}");
    let chi = solve_values(&sys).unwrap().chi;
    ensure!(chi == [e(-1), e(4)], "values {chi:?}");
    ensure!(feasible_finite(&sys).unwrap().is_none(), "feasible_finite found a finite solution");
    Ok("play values -1, 4; equilibrium values -1, 4; no finite solution".into())
}

fn missing_lower_bound() -> Verdict {
    let Problem::Linear(prob) = parse_problem(&std::fs::read(data("swapped.json")).unwrap()).unwrap() else {
        return Err("instance is not pseudolinear".into());
    };
    let lower = initial_bounds(&prob).unwrap().lower;
    ensure!(lower == ExtScalar::NegInf, "lower bound {lower:?}");
    let bis = bisection_solve(&prob, &Mode::Integer, SolveOptions::default()).unwrap();
    let newton = newton_solve(&prob, &NewtonMode::Integer, SolveOptions::default()).unwrap();
    ensure!(bis.lambda() == Some(&int(0)), "bisection {:?}", bis.status);
    ensure!(newton.lambda() == Some(&int(0)), "Newton {:?}", newton.status);
    Ok("lower bound -inf, bisection and Newton return 0".into())
}

struct Solved {
    prob: PseudolinearProblem,
    bisection: SolveOutcome,
}

fn random_instances() -> Vec<PseudolinearProblem> {
    (0..1200u64)
        .map(|i| {
            let n = 1 + (i % 8) as usize;
            let density = [50, 75, 100][(i / 8 % 3) as usize];
            linear_instance(n, n, 10, density, 7_000 + i)
        })
        .collect()
}

fn valid_point(prob: &PseudolinearProblem, out: &SolveOutcome) -> bool {
    match &out.status {
        Status::Optimal { lambda, x } => {
            prob.is_feasible(x).unwrap() && objective(prob, x).unwrap() == ExtScalar::Finite(lambda.clone())
        }
        _ => true,
    }
}

fn half_integrality(solved: &mut Vec<Solved>) -> Verdict {
    let start = Instant::now();
    for prob in random_instances() {
        let bisection = bisection_solve(&prob, &Mode::Integer, SolveOptions::default()).unwrap();
        solved.push(Solved { prob, bisection });
    }
    let elapsed = start.elapsed();
    let finite: Vec<&Solved> = solved.iter().filter(|s| s.bisection.lambda().is_some()).collect();
    let violations = finite.iter().filter(|s| !(s.bisection.lambda().unwrap() * int(2)).is_integer()).count();
    let invalid = solved.iter().filter(|s| !valid_point(&s.prob, &s.bisection)).count();
    let halves = finite.iter().filter(|s| !s.bisection.lambda().unwrap().is_integer()).count();
    ensure!(violations == 0, "{violations} optima off the half-integer grid");
    ensure!(invalid == 0, "{invalid} returned points are infeasible or miss the value");
    ensure!(elapsed < Duration::from_secs(120), "took {elapsed:?}");
    Ok(format!(
        "{} instances, {} finite optima ({halves} non-integer), 0 violations, {elapsed:.1?}",
        solved.len(),
        finite.len()
    ))
}

fn status_key(out: &SolveOutcome) -> Optimum {
    match &out.status {
        Status::Optimal { lambda, .. } => Optimum::Value(lambda.clone()),
        Status::Unbounded => Optimum::Unbounded,
        Status::Infeasible => Optimum::Infeasible,
    }
}

fn solver_agreement(solved: &[Solved]) -> Verdict {
    let mut mismatches = 0;
    let mut invalid = 0;
    for s in solved {
        let newton = newton_solve(&s.prob, &NewtonMode::Integer, SolveOptions::default()).unwrap();
        mismatches += usize::from(status_key(&newton) != status_key(&s.bisection));
        invalid += usize::from(!valid_point(&s.prob, &newton));
    }
    ensure!(mismatches == 0 && invalid == 0, "{mismatches} Newton/bisection mismatches, {invalid} invalid points");
    let mut quad = 0;
    let mut quad_finite = 0;
    for i in 0..240u64 {
        let n = 1 + (i % 4) as usize;
        let prob = quadratic_instance(n, n, 5, [50, 75, 100][(i / 4 % 3) as usize], 9_000 + i);
        let out = bisection_solve_quad(&prob, &Mode::Integer, SolveOptions::default()).unwrap();
        let oracle = quadratic_grid_search(&prob);
        ensure!(status_key(&out) == oracle, "quadratic seed {}: {:?} vs grid {oracle:?}", 9_000 + i, out.status);
        quad += 1;
        quad_finite += usize::from(out.lambda().is_some());
    }
    Ok(format!(
        "bisection = Newton on {} instances; quadratic bisection = grid scan on {quad} ({quad_finite} finite)",
        solved.len()
    ))
}

fn alcoved_cross_check() -> Verdict {
    let mut runner = TestRunner::deterministic();
    let strategy = alcoved(5, 10);
    let mut finite = 0;
    for k in 0..600 {
        let ap = strategy.new_tree(&mut runner).unwrap().current();
        let (theta, x) = solve_alcoved(&ap).unwrap();
        let oracle = alcoved_minimum(&ap);
        ensure!(theta == oracle, "case {k}: closed form {theta:?}, oracle {oracle:?}");
        if let ExtScalar::Finite(t) = &theta {
            finite += 1;
            let x = x.ok_or(format!("case {k}: no minimizer"))?;
            let level = TwoSidedSystem::new(
                TropMatrix::max_plus(alcoved_rows(&ap, Some(t)).iter().map(|r| r.0.clone()).collect()),
                TropMatrix::max_plus(alcoved_rows(&ap, Some(t)).iter().map(|r| r.1.clone()).collect()),
            )
            .unwrap();
            let mut xt = tropopt::matrix::lift(&x);
            xt.push(ExtScalar::zero());
            ensure!(ap.contains(&x).unwrap() && level.satisfied_by(&xt).unwrap(), "case {k}: x outside the set");
        }
    }
    Ok(format!("600 alcoved problems ({finite} finite), closed form = game oracle, all x in the level set"))
}

fn minimax_collapse() -> Verdict {
    let mut checked = 0;
    let mut seed = 11_000u64;
    while checked < 120 {
        seed += 1;
        let n = 1 + (seed % 3) as usize;
        let m = 1 + (seed / 3 % (7 - n) as u64) as usize;
        let prob = linear_instance(n, m, 10, [70, 85, 100][(seed % 5 % 3) as usize], seed);
        let lambda = ratio((seed % 41) as i64 - 20, 2);
        let sys = parametric_system(&prob, &lambda);
        if sys.check_moves().is_err() {
            continue;
        }
        let (taus, sigmas) = strategy_counts(&sys);
        if taus * sigmas > 200_000 {
            continue;
        }
        let (min_tau, max_sigma) = strategy_extremes(&sys);
        let value = phi(&prob, &lambda).unwrap();
        ensure!(
            ExtScalar::Finite(min_tau.clone()) == value && ExtScalar::Finite(max_sigma.clone()) == value,
            "seed {seed}: min tau {min_tau}, phi {value:?}, max sigma {max_sigma}"
        );
        checked += 1;
    }
    Ok(format!("{checked} instances with m+n <= 7: min over tau = phi = max over sigma"))
}

fn rounding_extremality() -> Verdict {
    let mut count = 0;
    for k in -240..=240 {
        let lambda = ratio(k, 24);
        for bound in 2..=12u64 {
            let (up, down, strict) = farey_neighbours(&lambda, bound as i64);
            let got = [Direction::Up, Direction::Down, Direction::StrictDown].map(|d| round_bounded(&lambda, bound, d));
            ensure!(got == [up, down, strict], "lambda {lambda}, bound {bound}: {got:?}");
            count += 3;
        }
    }
    Ok(format!("{count} roundings match the Farey search"))
}

fn statistics() -> Verdict {
    let start = Instant::now();
    let mid = run_experiments(&ExperimentConfig {
        dims: vec![50],
        rows: None,
        trials: 900,
        range: 500,
        density: 100,
        seed: 2024,
    })
    .map_err(|e| e.to_string())?;
    let row = &mid[0];
    ensure!(row.feasible >= 400, "only {} feasible trials at n = 50", row.feasible);
    ensure!(
        (0.30..=0.50).contains(&row.lb_optimal_frac),
        "lower-bound-optimal fraction {:.3} at n = 50",
        row.lb_optimal_frac
    );
    let big = run_experiments(&ExperimentConfig {
        dims: vec![100],
        rows: None,
        trials: 24,
        range: 500_000,
        density: 100,
        seed: 2024,
    })
    .map_err(|e| e.to_string())?;
    let wide = &big[0];
    ensure!(wide.feasible >= 5, "only {} feasible trials at n = 100", wide.feasible);
    ensure!(
        wide.newton_iters_mean < wide.bisect_iters_mean,
        "Newton {:.2} vs bisection {:.2} iterations at n = 100",
        wide.newton_iters_mean,
        wide.bisect_iters_mean
    );
    Ok(format!(
        "n=50 W=500: {} feasible, lb-optimal {:.1}%; n=100 W=500000: {} feasible, Newton {:.2} < bisection {:.2} iterations; {:.0?}",
        row.feasible,
        100.0 * row.lb_optimal_frac,
        wide.feasible,
        wide.newton_iters_mean,
        wide.bisect_iters_mean,
        start.elapsed()
    ))
}

fn certificates(solved: &[Solved]) -> Verdict {
    let mut certified = 0;
    let mut exhaustive = 0;
    let mut rejected = 0usize;
    for s in solved {
        let Some(lambda) = s.bisection.lambda() else { continue };
        let tau = optimality_witness(&s.prob, lambda).unwrap();
        ensure!(certify_optimal(&s.prob, lambda, &tau).unwrap(), "witness rejected at the optimum {lambda}");
        certified += 1;
        if s.prob.rows() + s.prob.vars() <= 7 {
            let above = lambda + ratio(1, 2);
            for tau in all_strategies(&tau_choices(&parametric_system(&s.prob, &above))) {
                ensure!(!certify_optimal(&s.prob, &above, &tau).unwrap(), "certificate accepted {above}");
                rejected += 1;
            }
            exhaustive += 1;
        }
    }
    Ok(format!(
        "{certified} optima certified; {exhaustive} small instances reject all {rejected} strategies at optimum + 1/2"
    ))
}

fn main() -> ExitCode {
    let mut solved = Vec::new();
    let results: Vec<(&str, Verdict)> = vec![
        ("1 golden worked example", golden_worked_example()),
        ("2 golden game", golden_game()),
        ("3 missing lower bound", missing_lower_bound()),
        ("4 half-integrality", half_integrality(&mut solved)),
        ("5 solver agreement", solver_agreement(&solved)),
        ("6 alcoved closed form", alcoved_cross_check()),
        ("7 minimax collapse", minimax_collapse()),
        ("8 rounding extremality", rounding_extremality()),
        ("9 statistical reproduction", statistics()),
        ("10 certificate soundness", certificates(&solved)),
    ];
    let mut failed = 0;
    for (name, verdict) in &results {
        match verdict {
            Ok(detail) => println!("criterion {name}: PASS ({detail})"),
            Err(why) => {
                failed += 1;
                println!("criterion {name}: FAIL ({why})");
            }
        }
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
