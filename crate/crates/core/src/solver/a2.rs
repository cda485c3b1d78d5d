use super::a1::{probe_and_search, FeasibleDirectionStep, Probed};
use super::{plain_record, ProblemInstance, RunLog, RunReport, Status, StepOutcome};
use crate::config::SolverConfig;
use crate::dykstra::project_intersection;
use crate::error::{Error, Result};
use crate::monitors::A2Observation;
use crate::sets::Halfcut;
use crate::trace::IterateRecord;
use crate::vector::Vector;

/// Iteration state of the strongly convergent method.
#[derive(Debug, Clone, PartialEq)]
pub struct A2State {
    pub x: Vector,
    /// Running level value; `+∞` before the first step.
    pub f_lev: f64,
    pub anchor: Vector,
    pub k: usize,
}

impl A2State {
    pub fn start(inst: &ProblemInstance) -> Self {
        Self { x: inst.x0.clone(), f_lev: f64::INFINITY, anchor: inst.x0.clone(), k: 0 }
    }
}

/// `H_k = {x : ⟨∇f(x^k), x − x^k⟩ + f(x^k) − f_lev ≤ 0}`
pub(crate) fn level_cut(xk: &Vector, grad: &Vector, f_k: f64, f_lev: f64) -> Result<Halfcut> {
    Ok(Halfcut::new(grad.clone(), grad.dot(xk)? - f_k + f_lev))
}

/// `W_k = {x : ⟨x − x^k, x⁰ − x^k⟩ ≤ 0}`
pub(crate) fn anchor_cut(xk: &Vector, anchor: &Vector) -> Result<Halfcut> {
    let normal = anchor.sub(xk)?;
    let offset = normal.dot(xk)?;
    Ok(Halfcut::new(normal, offset))
}

struct A2StepData {
    step: FeasibleDirectionStep,
    h_cut: Halfcut,
    w_cut: Halfcut,
}

fn step_inner(
    inst: &ProblemInstance,
    state: &A2State,
    cfg: &SolverConfig,
) -> Result<(StepOutcome<A2State>, Option<A2StepData>)> {
    let annotate = |r: &mut IterateRecord| -> Result<()> {
        r.dist_anchor = Some(state.x.dist(&state.anchor)?);
        Ok(())
    };
    match probe_and_search(inst, &state.x, cfg, state.k)? {
        Probed::Stopped { status, mut record, .. } => {
            annotate(&mut record)?;
            if state.f_lev.is_finite() {
                record.f_lev = Some(state.f_lev);
            }
            Ok((StepOutcome::Stopped { status, record }, None))
        }
        Probed::Searched { step, mut record } => {
            annotate(&mut record)?;
            let f_lev = state.f_lev.min(step.search.f_trial);
            let h_cut = level_cut(&state.x, &step.grad, step.f_k, f_lev)?;
            let w_cut = anchor_cut(&state.x, &state.anchor)?;
            let projected = project_intersection(
                &inst.set,
                &[h_cut.clone(), w_cut.clone()],
                &state.anchor,
                cfg.intersection_tol,
                cfg.intersection_max_cycles,
            )?;
            record.f_lev = Some(f_lev);
            record.projections += projected.base_projections;
            let next = A2State { x: projected.point, f_lev, anchor: state.anchor.clone(), k: state.k + 1 };
            Ok((StepOutcome::Advanced { next, record }, Some(A2StepData { step, h_cut, w_cut })))
        }
    }
}

/// One iteration of the strongly convergent method:
/// `x^{k+1} = P_{C ∩ W_k ∩ H_k}(x⁰)`.
///
/// Returns `Advanced` even when `x^{k+1} = x^k`; the second stop test is
/// applied by [`a2_solve`].
pub fn a2_step(inst: &ProblemInstance, state: &A2State, cfg: &SolverConfig) -> Result<StepOutcome<A2State>> {
    Ok(step_inner(inst, state, cfg)?.0)
}

fn a2_plain_record(inst: &ProblemInstance, state: &A2State) -> Result<IterateRecord> {
    let mut r = plain_record(inst, state.k, &state.x)?;
    r.dist_anchor = Some(state.x.dist(&state.anchor)?);
    if state.f_lev.is_finite() {
        r.f_lev = Some(state.f_lev);
    }
    Ok(r)
}

/// Runs the strongly convergent method. Its limit is the solution nearest
/// to the starting point.
///
/// A stop with `x^{k+1} = x^k` is reported as `FixedPointStop` along with
/// the residual at that point; it is not by itself a certificate of
/// optimality.
pub fn a2_solve(inst: &ProblemInstance, cfg: &SolverConfig) -> Result<RunReport> {
    cfg.validate()?;
    let mut log = RunLog::new(cfg);
    let mut state = A2State::start(inst);
    let target = inst.known_solution.as_ref();

    for k in 0..cfg.max_outer_iters {
        if let Some(t) = target {
            log.monitors.observe_a2_ball(&state.x, &state.anchor, t)?;
        }
        let (outcome, data) = match step_inner(inst, &state, cfg) {
            Ok(v) => v,
            Err(e) => {
                let status = match e {
                    Error::LineSearchFailure { .. } => Status::LineSearchFailure,
                    Error::IntersectionNonconvergence { .. } | Error::EmptyCut => Status::IntersectionFailure,
                    other => return Err(other),
                };
                let terminal = a2_plain_record(inst, &state)?;
                return Ok(log.finish(status, terminal, k, Some(e)));
            }
        };
        match outcome {
            StepOutcome::Stopped { status, record } => return Ok(log.finish(status, record, k, None)),
            StepOutcome::Advanced { next, record } => {
                let data = data.expect("advanced steps carry search data");
                log.monitors.observe_armijo(&data.step.as_armijo(), cfg)?;
                log.monitors.observe_a2(
                    &A2Observation {
                        anchor: &state.anchor,
                        xk: &state.x,
                        x_next: &next.x,
                        f_k: data.step.f_k,
                        f_lev: next.f_lev,
                        grad_norm: data.step.grad.norm(),
                        h_cut: &data.h_cut,
                        w_cut: &data.w_cut,
                    },
                    inst.known_solution.as_ref(),
                    inst.known_fstar,
                )?;
                log.step(record);
                let moved = next.x.dist(&state.x)?;
                state = next;
                if moved <= cfg.fixed_point_tol {
                    if let Some(t) = target {
                        log.monitors.observe_a2_ball(&state.x, &state.anchor, t)?;
                    }
                    let terminal = a2_plain_record(inst, &state)?;
                    return Ok(log.finish(Status::FixedPointStop, terminal, k + 1, None));
                }
            }
        }
    }
    if let Some(t) = target {
        log.monitors.observe_a2_ball(&state.x, &state.anchor, t)?;
    }
    let terminal = a2_plain_record(inst, &state)?;
    Ok(log.finish(Status::IterationCap, terminal, cfg.max_outer_iters, None))
}
