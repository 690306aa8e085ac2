use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tropopt::experiment::{run_experiments, write_csv, ExperimentConfig};
use tropopt::generate::{gen_random, GenConfig};
use tropopt::io::{format_scalar, parse_problem, write_problem, Problem};
use tropopt::scalar::{format_rational, parse_rational, Rational};
use tropopt::{pseudolinear as pl, pseudoquadratic as pq};
use tropopt::{Mode, NewtonMode, SolveOptions, SolveOutcome, Status};

/// Tropical pseudolinear and pseudoquadratic optimization.
#[derive(Parser)]
#[command(name = "tropopt", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Bisection,
    Newton,
}

#[derive(Clone, Copy, ValueEnum)]
enum Arith {
    Integer,
    Real,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a problem file and print the result as JSON.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "bisection")]
        method: Method,
        #[arg(long, value_enum, default_value = "integer")]
        mode: Arith,
        /// Bracket width for real bisection, probe offset for real Newton.
        #[arg(long)]
        tol: Option<String>,
        /// Include the per-iteration trace.
        #[arg(long)]
        trace: bool,
    },
    /// Print the spectral function at a parameter value.
    Phi {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
    /// Run the optimality and unboundedness certificate checkers.
    Certify {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
    /// Write a random instance.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        range: i64,
        #[arg(long, default_value_t = 100)]
        density: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        quadratic: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run random-instance experiments and write a CSV report.
    Bench {
        /// `A:B` or `A:B:STEP`, inclusive.
        #[arg(long)]
        dims: String,
        /// Fixed number of constraints; defaults to the dimension.
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        range: i64,
        #[arg(long, default_value_t = 100)]
        density: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

type CliResult<T> = Result<T, String>;

fn load(file: &PathBuf) -> CliResult<Problem> {
    let bytes = fs::read(file).map_err(|e| format!("cannot read {}: {e}", file.display()))?;
    parse_problem(&bytes).map_err(|e| e.to_string())
}

fn rational(s: &str) -> CliResult<Rational> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn parse_dims(spec: &str) -> CliResult<Vec<usize>> {
    let parts: Vec<usize> = spec
        .split(':')
        .map(|p| p.trim().parse::<usize>().map_err(|_| format!("bad --dims {spec:?}")))
        .collect::<CliResult<_>>()?;
    let (a, b, step) = match parts.as_slice() {
        [a, b] => (*a, *b, 1),
        [a, b, s] => (*a, *b, *s),
        _ => return Err(format!("--dims must be A:B or A:B:STEP, got {spec:?}")),
    };
    if step == 0 || a == 0 || a > b {
        return Err(format!("--dims needs 1 <= A <= B and STEP >= 1, got {spec:?}"));
    }
    Ok((a..=b).step_by(step).collect())
}

fn outcome_json(out: &SolveOutcome, trace: bool) -> Value {
    let (status, lambda, x) = match &out.status {
        Status::Optimal { lambda, x } => (
            "optimal",
            Value::from(format_rational(lambda)),
            Value::Array(x.iter().map(|v| Value::from(format_rational(v))).collect()),
        ),
        Status::Infeasible => ("infeasible", Value::Null, Value::Null),
        Status::Unbounded => ("unbounded", Value::Null, Value::Null),
    };
    let mut obj = json!({ "status": status, "lambda": lambda, "x": x, "iterations": out.iterations });
    if trace {
        obj["trace"] = out
            .trace
            .iter()
            .map(|t| json!({ "lambda": format_rational(&t.lambda), "value": format_scalar(&t.value) }))
            .collect();
    }
    obj
}

fn solve(prob: &Problem, method: Method, mode: Arith, tol: Option<&str>, trace: bool) -> CliResult<SolveOutcome> {
    let opts = SolveOptions { trace };
    let tol = tol.map(rational).transpose()?;
    let err = |e: tropopt::Error| e.to_string();
    match method {
        Method::Bisection => {
            let mode = match mode {
                Arith::Integer => Mode::Integer,
                Arith::Real => Mode::Real { tol: tol.unwrap_or_else(|| Rational::new(1.into(), 1000.into())) },
            };
            match prob {
                Problem::Linear(p) => pl::bisection_solve(p, &mode, opts),
                Problem::Quadratic(p) => pq::bisection_solve_quad(p, &mode, opts),
            }
            .map_err(err)
        }
        Method::Newton => match prob {
            Problem::Linear(p) => {
                let mode = match mode {
                    Arith::Integer => NewtonMode::Integer,
                    Arith::Real => NewtonMode::RealProbe { eps: tol.unwrap_or_else(|| pl::default_probe(p)) },
                };
                pl::newton_solve(p, &mode, opts).map_err(err)
            }
            Problem::Quadratic(p) => {
                let mode = match mode {
                    Arith::Integer => NewtonMode::Integer,
                    Arith::Real => NewtonMode::RealProbe { eps: tol.unwrap_or_else(|| pq::default_probe_quad(p)) },
                };
                pq::newton_solve_quad(p, &mode, opts).map_err(err)
            }
        },
    }
}

fn certify(prob: &Problem, lambda: &Rational) -> tropopt::Result<Value> {
    let (optimal, unbounded) = match prob {
        Problem::Linear(p) => {
            let tau = pl::optimality_witness(p, lambda)?;
            let sigma = pl::unboundedness_witness(p)?;
            (pl::certify_optimal(p, lambda, &tau)?, pl::certify_unbounded(p, &sigma)?)
        }
        Problem::Quadratic(p) => {
            let tau = pq::optimality_witness_quad(p, lambda)?;
            let sigma = pq::unboundedness_witness_quad(p)?;
            (pq::certify_optimal_quad(p, lambda, &tau)?, pq::certify_unbounded_quad(p, &sigma)?)
        }
    };
    Ok(json!({ "lambda": format_rational(lambda), "optimal": optimal, "unbounded": unbounded }))
}

fn run(cli: Cli) -> CliResult<ExitCode> {
    match cli.command {
        Command::Solve { file, method, mode, tol, trace } => {
            let prob = load(&file)?;
            let out = solve(&prob, method, mode, tol.as_deref(), trace)?;
            println!("{}", outcome_json(&out, trace));
            Ok(ExitCode::from(match out.status {
                Status::Optimal { .. } => 0,
                Status::Infeasible => 2,
                Status::Unbounded => 3,
            }))
        }
        Command::Phi { file, lambda } => {
            let prob = load(&file)?;
            let lambda = rational(&lambda)?;
            let value = match &prob {
                Problem::Linear(p) => pl::phi(p, &lambda),
                Problem::Quadratic(p) => pq::phi_quad(p, &lambda),
            }
            .map_err(|e| e.to_string())?;
            println!("{}", format_scalar(&value));
            Ok(ExitCode::SUCCESS)
        }
        Command::Certify { file, lambda } => {
            let prob = load(&file)?;
            let verdict = certify(&prob, &rational(&lambda)?).map_err(|e| e.to_string())?;
            println!("{verdict}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Gen { n, m, range, density, seed, quadratic, out } => {
            let prob = gen_random(&GenConfig { n, m, range, density, seed, quadratic }).map_err(|e| e.to_string())?;
            fs::write(&out, write_problem(&prob)).map_err(|e| format!("cannot write {}: {e}", out.display()))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench { dims, m, trials, range, density, seed, out } => {
            let cfg = ExperimentConfig { dims: parse_dims(&dims)?, rows: m, trials, range, density, seed };
            let rows = run_experiments(&cfg).map_err(|e| e.to_string())?;
            let file = fs::File::create(&out).map_err(|e| format!("cannot write {}: {e}", out.display()))?;
            write_csv(&rows, file).map_err(|e| e.to_string())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
