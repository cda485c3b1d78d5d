//! Executes one spec and writes its trace and summary.

use std::fs::{self, File};
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use projgrad::solver::{a1_solve, a2_solve, classic_solve, ClassicStrategy};
use projgrad::{IterateRecord, RunReport, Status};
use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};
use crate::spec::{RunSpec, Strategy};

/// Exit code reported for a spec that could not be loaded or run.
pub const EXIT_LOAD_ERROR: i32 = 1;

pub fn exit_code(status: Status) -> i32 {
    match status {
        Status::OptimalResidual | Status::FixedPointStop => 0,
        Status::LineSearchFailure => 2,
        Status::IntersectionFailure => 3,
        Status::IterationCap => 4,
    }
}

/// One line of the trace CSV. Columns are fixed in this order; `None`
/// becomes an empty cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub k: usize,
    pub f: f64,
    pub residual: f64,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub inner_trials: Option<usize>,
    pub f_lev: Option<f64>,
    pub epsilon_qf: Option<f64>,
    pub dist_anchor: Option<f64>,
    pub dist_known_solution: Option<f64>,
}

pub const TRACE_COLUMNS: [&str; 10] =
    ["k", "f", "residual", "alpha", "beta", "inner_trials", "f_lev", "epsilon_qf", "dist_anchor", "dist_known_solution"];

impl From<&IterateRecord> for TraceRow {
    fn from(r: &IterateRecord) -> Self {
        Self {
            k: r.k,
            f: r.f_val,
            residual: r.residual,
            alpha: r.alpha,
            beta: r.beta,
            inner_trials: r.inner_trials,
            f_lev: r.f_lev,
            epsilon_qf: r.epsilon_qf,
            dist_anchor: r.dist_anchor,
            dist_known_solution: r.dist_known_solution,
        }
    }
}

/// Writes rows as CSV; floats use the shortest representation that parses
/// back to the same value.
pub fn write_trace<W: Write>(out: W, rows: &[TraceRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record(TRACE_COLUMNS)?;
    }
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn read_trace<R: Read>(input: R) -> Result<Vec<TraceRow>> {
    let mut r = csv::Reader::from_reader(input);
    let headers = r.headers()?.clone();
    if !headers.iter().eq(TRACE_COLUMNS) {
        return Err(BenchError::Spec(format!("unexpected trace header {headers:?}")));
    }
    Ok(r.deserialize().collect::<std::result::Result<_, _>>()?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonitorFlag {
    pub name: String,
    pub passed: bool,
    pub worst_margin: f64,
    pub tolerance: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub id: String,
    pub instance: String,
    pub strategy: Strategy,
    pub status: String,
    pub exit_code: i32,
    pub iterations: usize,
    pub final_residual: f64,
    pub final_f: f64,
    pub final_x: Vec<f64>,
    pub total_inner_trials: usize,
    pub max_inner_trials: usize,
    pub total_projections: usize,
    pub wall_time_s: f64,
    pub monitors_passed: bool,
    pub monitors: Vec<MonitorFlag>,
    /// Distance from the final iterate to the instance's known solution.
    pub dist_known_solution: Option<f64>,
    pub failure: Option<String>,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub summary: SummaryRow,
    pub report: RunReport,
}

pub fn solve(spec: &RunSpec) -> Result<RunReport> {
    let (inst, cfg) = (&spec.instance, &spec.config);
    Ok(match spec.strategy {
        Strategy::Constant => classic_solve(inst, cfg, ClassicStrategy::Constant)?,
        Strategy::Boundary => classic_solve(inst, cfg, ClassicStrategy::Boundary)?,
        Strategy::FeasibleDirection => a1_solve(inst, cfg)?,
        Strategy::Exogenous => classic_solve(inst, cfg, ClassicStrategy::Exogenous)?,
        Strategy::Strong => a2_solve(inst, cfg)?,
    })
}

/// Runs the solver without touching the file system.
pub fn execute(spec: &RunSpec) -> Result<RunOutcome> {
    let start = Instant::now();
    let report = solve(spec)?;
    let wall_time_s = start.elapsed().as_secs_f64();
    let dist_known_solution = match &spec.instance.known_solution {
        Some(xs) => Some(report.final_x.dist(xs)?),
        None => None,
    };
    let summary = SummaryRow {
        id: spec.id.clone(),
        instance: spec.instance_id.clone(),
        strategy: spec.strategy,
        status: report.status.to_string(),
        exit_code: exit_code(report.status),
        iterations: report.iterations,
        final_residual: report.final_residual,
        final_f: report.final_f,
        final_x: report.final_x.as_slice().to_vec(),
        total_inner_trials: report.total_inner_trials,
        max_inner_trials: report.max_inner_trials,
        total_projections: report.total_projections,
        wall_time_s,
        monitors_passed: report.monitors.all_passed(),
        monitors: report
            .monitors
            .checks
            .iter()
            .map(|c| MonitorFlag {
                name: c.name.to_string(),
                passed: c.passed(),
                worst_margin: c.worst_margin,
                tolerance: c.tolerance,
                evaluations: c.evaluations,
            })
            .collect(),
        dist_known_solution,
        failure: report.failure.as_ref().map(ToString::to_string),
    };
    Ok(RunOutcome { summary, report })
}

pub fn trace_path(prefix: &Path) -> PathBuf {
    with_suffix(prefix, ".trace.csv")
}

pub fn summary_path(prefix: &Path) -> PathBuf {
    with_suffix(prefix, ".summary.json")
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| BenchError::io(dir, e))?;
    }
    Ok(BufWriter::new(File::create(path).map_err(|e| BenchError::io(path, e))?))
}

/// Writes `<prefix>.trace.csv` and `<prefix>.summary.json`.
pub fn write_outputs(prefix: &Path, outcome: &RunOutcome) -> Result<()> {
    let rows: Vec<TraceRow> = outcome.report.trace.iter().map(TraceRow::from).collect();
    let path = trace_path(prefix);
    write_trace(create(&path)?, &rows)?;
    let path = summary_path(prefix);
    let mut out = create(&path)?;
    serde_json::to_writer_pretty(&mut out, &outcome.summary)?;
    out.write_all(b"\n").and_then(|_| out.flush()).map_err(|e| BenchError::io(&path, e))?;
    Ok(())
}

/// Executes the spec and writes its files when it names an output prefix.
pub fn run(spec: &RunSpec) -> Result<RunOutcome> {
    let outcome = execute(spec)?;
    if let Some(prefix) = &spec.output {
        write_outputs(prefix, &outcome)?;
    }
    Ok(outcome)
}
