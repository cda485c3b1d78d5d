use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use projgrad_bench::compare::{compare, jobs_from_env};
use projgrad_bench::oracle_check::oracle_check;
use projgrad_bench::run::{self, EXIT_LOAD_ERROR};
use projgrad_bench::spec::{ProblemRef, RunSpecFile};
use projgrad_bench::{load_spec, registry, ConfigOverrides, Result, Strategy};

#[derive(Parser)]
#[command(name = "projgrad", version, about = "Projected gradient solvers and their test bench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one spec; exit code 0 on convergence, 2 line-search failure,
    /// 3 intersection failure, 4 iteration cap.
    Solve {
        #[arg(long)]
        spec: PathBuf,
        /// a, b, c (A1), d or A2
        #[arg(long)]
        strategy: Option<Strategy>,
        #[arg(long)]
        max_iters: Option<usize>,
        /// Residual tolerance.
        #[arg(long)]
        tol: Option<f64>,
        /// Prefix for the `.trace.csv` and `.summary.json` files.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run several specs on the same instance and print a table. Worker
    /// threads are taken from PROJGRAD_JOBS.
    Compare {
        #[arg(long, num_args = 2.., required = true)]
        specs: Vec<PathBuf>,
        /// Print JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Compare every strategy's limit with a reference solution (dim ≤ 4).
    Oracle {
        #[arg(long)]
        spec: PathBuf,
    },
    /// List the registry instances.
    List,
    /// Write a spec file for a registry instance with the problem inlined.
    Export {
        #[arg(long)]
        id: String,
        #[arg(long, default_value = "c")]
        strategy: Strategy,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn solve(
    spec: PathBuf,
    strategy: Option<Strategy>,
    max_iters: Option<usize>,
    tol: Option<f64>,
    out: Option<PathBuf>,
) -> Result<i32> {
    let mut spec = load_spec(spec)?;
    if let Some(s) = strategy {
        spec = spec.with_strategy(s)?;
    }
    let extra = ConfigOverrides { max_outer_iters: max_iters, residual_tol: tol, ..Default::default() };
    spec = spec.with_overrides(&extra)?;
    if out.is_some() {
        spec.output = out;
    }
    let outcome = run::run(&spec)?;
    println!("{}", serde_json::to_string_pretty(&outcome.summary)?);
    Ok(outcome.summary.exit_code)
}

fn execute(command: Command) -> Result<i32> {
    match command {
        Command::Solve { spec, strategy, max_iters, tol, out } => solve(spec, strategy, max_iters, tol, out),
        Command::Compare { specs, json } => {
            let specs = specs.iter().map(load_spec).collect::<Result<Vec<_>>>()?;
            let table = compare(&specs, jobs_from_env()?)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&table)?);
            } else {
                print!("{}", table.render());
            }
            Ok(0)
        }
        Command::Oracle { spec } => {
            let spec = load_spec(spec)?;
            let report = oracle_check(&spec, &Strategy::ALL)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(0)
        }
        Command::List => {
            for e in registry::ENTRIES {
                println!("{:<20} {}", e.id, e.description);
            }
            Ok(0)
        }
        Command::Export { id, strategy, seed, out } => {
            let problem = registry::problem_spec(&id, seed)?;
            let file = RunSpecFile {
                id: Some(id),
                problem: ProblemRef::Inline(problem),
                strategy,
                config: ConfigOverrides::default(),
                seed,
                output: None,
            };
            let text = serde_json::to_string_pretty(&file)? + "\n";
            match out {
                Some(path) => std::fs::write(&path, text).map_err(|e| projgrad_bench::BenchError::Io { path, source: e })?,
                None => print!("{text}"),
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_LOAD_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_LOAD_ERROR as u8)
        }
    }
}
