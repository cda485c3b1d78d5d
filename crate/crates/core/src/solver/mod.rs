//! Outer iterations of the projected gradient methods.
//!
//! * [`a1_solve`]: feasible-direction Armijo search (strategy (c)); the
//!   classical weakly convergent method.
//! * [`a2_solve`]: the strongly convergent variant that projects the
//!   starting point onto `C ∩ W_k ∩ H_k` every iteration.
//! * [`classic_solve`]: strategies (a), (b) and (d) with full steps.

mod a1;
mod a2;
mod classic;

pub use a1::{a1_solve, a1_step};
pub use a2::{a2_solve, a2_step, A2State};
pub use classic::{classic_solve, ClassicStrategy};

use std::fmt;

use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::monitors::MonitorReport;
use crate::objectives::Objective;
use crate::sets::{CountingProjector, FeasibleSet, Projector};
use crate::trace::IterateRecord;
use crate::vector::Vector;

/// Feasibility slack allowed for the starting point.
pub const START_TOL: f64 = 1e-9;

/// `min f(x)` subject to `x ∈ C`, started from a feasible `x0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    pub objective: Objective,
    pub set: FeasibleSet,
    pub x0: Vector,
    /// A solution; for the strongly convergent method this should be the
    /// solution nearest to `x0`.
    pub known_solution: Option<Vector>,
    pub known_fstar: Option<f64>,
}

impl ProblemInstance {
    pub fn new(objective: Objective, set: FeasibleSet, x0: Vector) -> Result<Self> {
        if objective.dim() != set.dim() {
            return Err(Error::DimensionMismatch { expected: set.dim(), found: objective.dim() });
        }
        x0.check_dim(set.dim())?;
        let violation = set.violation(&x0)?;
        if violation > START_TOL {
            return Err(Error::InfeasibleStart { violation });
        }
        Ok(Self { objective, set, x0, known_solution: None, known_fstar: None })
    }

    pub fn with_known_solution(mut self, x: Vector) -> Result<Self> {
        x.check_dim(self.set.dim())?;
        self.known_solution = Some(x);
        Ok(self)
    }

    pub fn with_known_fstar(mut self, fstar: f64) -> Result<Self> {
        if !fstar.is_finite() {
            return Err(Error::NonFinite { context: "known optimal value" });
        }
        self.known_fstar = Some(fstar);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.set.dim()
    }
}

/// Natural residual `‖x − P_C(x − ∇f(x))‖`; zero exactly at solutions.
pub fn residual(inst: &ProblemInstance, x: &Vector) -> Result<f64> {
    let g = inst.objective.grad(x)?;
    let p = inst.set.project(&x.sub(&g)?)?;
    x.dist(&p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    OptimalResidual,
    FixedPointStop,
    IterationCap,
    LineSearchFailure,
    IntersectionFailure,
}

impl Status {
    pub fn is_success(self) -> bool {
        matches!(self, Status::OptimalResidual | Status::FixedPointStop)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::OptimalResidual => "optimal_residual",
            Status::FixedPointStop => "fixed_point_stop",
            Status::IterationCap => "iteration_cap",
            Status::LineSearchFailure => "line_search_failure",
            Status::IntersectionFailure => "intersection_failure",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub status: Status,
    /// Number of completed outer steps.
    pub iterations: usize,
    pub trace: Vec<IterateRecord>,
    pub final_x: Vector,
    pub final_f: f64,
    pub final_residual: f64,
    pub total_inner_trials: usize,
    pub total_projections: usize,
    pub max_inner_trials: usize,
    pub monitors: MonitorReport,
    /// The solver error behind a failure status.
    pub failure: Option<Error>,
}

/// Result of a single outer step.
#[derive(Debug, Clone, PartialEq)]
pub enum StepOutcome<S> {
    /// A stop test fired at the current iterate; no step was taken.
    Stopped { status: Status, record: IterateRecord },
    Advanced { next: S, record: IterateRecord },
}

/// Quantities at `x^k` shared by every strategy using `z^k = x^k − β_k∇f(x^k)`.
struct Probe {
    f: f64,
    grad: Vector,
    w: Vector,
    gap: f64,
    residual: f64,
}

fn probe(inst: &ProblemInstance, proj: &CountingProjector<'_>, x: &Vector, beta: f64) -> Result<Probe> {
    let f = inst.objective.eval(x)?;
    let grad = inst.objective.grad(x)?;
    let w = proj.project(&Vector::axpby(1.0, x, -beta, &grad)?)?;
    let gap = x.dist(&w)?;
    let residual = residual(inst, x)?;
    Ok(Probe { f, grad, w, gap, residual })
}

/// Stop tests shared by all strategies: vanishing gradient or `x = P_C(z)`
/// (fixed point), then the natural residual.
fn stop_status(p: &Probe, cfg: &SolverConfig) -> Option<Status> {
    if p.grad.norm() == 0.0 || p.gap <= cfg.fixed_point_tol {
        Some(Status::FixedPointStop)
    } else if p.residual <= cfg.residual_tol {
        Some(Status::OptimalResidual)
    } else {
        None
    }
}

fn base_record(inst: &ProblemInstance, k: usize, x: &Vector, f: f64, residual: f64) -> Result<IterateRecord> {
    let mut r = IterateRecord::new(k, x.clone(), f, residual);
    if let Some(xs) = &inst.known_solution {
        r.dist_known_solution = Some(x.dist(xs)?);
    }
    Ok(r)
}

fn plain_record(inst: &ProblemInstance, k: usize, x: &Vector) -> Result<IterateRecord> {
    let f = inst.objective.eval(x)?;
    base_record(inst, k, x, f, residual(inst, x)?)
}

/// Accumulates the trace and totals of one run.
struct RunLog {
    stride: usize,
    trace: Vec<IterateRecord>,
    monitors: MonitorReport,
    inner: usize,
    projections: usize,
    max_trials: usize,
}

impl RunLog {
    fn new(cfg: &SolverConfig) -> Self {
        Self {
            stride: cfg.trace_stride,
            trace: Vec::new(),
            monitors: MonitorReport::default(),
            inner: 0,
            projections: 0,
            max_trials: 0,
        }
    }

    fn step(&mut self, record: IterateRecord) {
        let trials = record.inner_trials.unwrap_or(0);
        self.inner += trials;
        self.max_trials = self.max_trials.max(trials);
        self.projections += record.projections;
        if record.k.is_multiple_of(self.stride) {
            self.trace.push(record);
        }
    }

    fn finish(
        mut self,
        status: Status,
        terminal: IterateRecord,
        iterations: usize,
        failure: Option<Error>,
    ) -> RunReport {
        self.projections += terminal.projections;
        let (final_x, final_f, final_residual) = (terminal.x.clone(), terminal.f_val, terminal.residual);
        self.trace.push(terminal);
        RunReport {
            status,
            iterations,
            trace: self.trace,
            final_x,
            final_f,
            final_residual,
            total_inner_trials: self.inner,
            total_projections: self.projections,
            max_inner_trials: self.max_trials,
            monitors: self.monitors,
            failure,
        }
    }
}
