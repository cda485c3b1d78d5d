use super::{base_record, plain_record, probe, stop_status, ProblemInstance, RunLog, RunReport, Status, StepOutcome};
use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::monitors::{a1_epsilon, ArmijoStep};
use crate::sets::CountingProjector;
use crate::stepsize::{armijo_feasible_direction_with, feasible_direction_point, LineSearchResult};
use crate::vector::Vector;

/// Everything the monitors need about one accepted step.
pub(super) struct FeasibleDirectionStep {
    pub xk: Vector,
    pub wk: Vector,
    pub grad: Vector,
    pub f_k: f64,
    pub beta: f64,
    pub slope: f64,
    pub search: LineSearchResult,
    pub f_previous_trial: Option<f64>,
}

impl FeasibleDirectionStep {
    pub fn as_armijo(&self) -> ArmijoStep<'_> {
        ArmijoStep {
            xk: &self.xk,
            wk: &self.wk,
            f_k: self.f_k,
            beta: self.beta,
            alpha: self.search.alpha,
            trials: self.search.trials,
            slope: self.slope,
            f_previous_trial: self.f_previous_trial,
        }
    }
}

pub(super) enum Probed {
    /// `gap` is `‖x^k − P_C(z^k)‖` at the stopping iterate.
    Stopped { status: Status, record: crate::trace::IterateRecord, gap: f64 },
    Searched { step: FeasibleDirectionStep, record: crate::trace::IterateRecord },
}

/// `z^k`, `w^k = P_C(z^k)`, the stop tests, and the Armijo search along
/// `[x^k, w^k]`. Shared by both feasible-direction methods.
pub(super) fn probe_and_search(
    inst: &ProblemInstance,
    x: &Vector,
    cfg: &SolverConfig,
    k: usize,
) -> Result<Probed> {
    let proj = CountingProjector::new(&inst.set);
    let beta = cfg.beta_schedule.beta(k);
    let p = probe(inst, &proj, x, beta)?;
    let mut record = base_record(inst, k, x, p.f, p.residual)?;
    record.beta = Some(beta);
    if let Some(status) = stop_status(&p, cfg) {
        // no step is taken, so the probe counts as a stop test like the
        // residual evaluations of the full-step strategies
        return Ok(Probed::Stopped { status, record, gap: p.gap });
    }
    record.projections = proj.calls();
    let search = armijo_feasible_direction_with(
        &inst.objective,
        x,
        p.f,
        &p.grad,
        &p.w,
        cfg.theta,
        cfg.delta,
        cfg.max_inner_iters,
    )?;
    let slope = p.grad.dot(&x.sub(&p.w)?)?;
    let f_previous_trial = if search.trials > 0 {
        let prev = feasible_direction_point(x, &p.w, search.alpha / cfg.theta)?;
        Some(inst.objective.eval(&prev)?)
    } else {
        None
    };
    record.alpha = Some(search.alpha);
    record.inner_trials = Some(search.trials);
    Ok(Probed::Searched {
        step: FeasibleDirectionStep {
            xk: x.clone(),
            wk: p.w,
            grad: p.grad,
            f_k: p.f,
            beta,
            slope,
            search,
            f_previous_trial,
        },
        record,
    })
}

enum A1Data {
    Stopped { gap: f64 },
    Searched(FeasibleDirectionStep),
}

fn step_inner(
    inst: &ProblemInstance,
    x: &Vector,
    cfg: &SolverConfig,
    k: usize,
) -> Result<(StepOutcome<Vector>, A1Data)> {
    match probe_and_search(inst, x, cfg, k)? {
        Probed::Stopped { status, record, gap } => Ok((StepOutcome::Stopped { status, record }, A1Data::Stopped { gap })),
        Probed::Searched { step, mut record } => {
            // x^{k+1} = α_k w^k + (1 − α_k) x^k is exactly the accepted trial
            let next = step.search.trial_point.clone();
            let eps = a1_epsilon(x, &step.wk, step.search.alpha, step.f_k, step.search.f_trial, cfg)?;
            record.epsilon_qf = Some(eps);
            Ok((StepOutcome::Advanced { next, record }, A1Data::Searched(step)))
        }
    }
}

/// One iteration of the feasible-direction projected gradient method.
pub fn a1_step(inst: &ProblemInstance, xk: &Vector, cfg: &SolverConfig, k: usize) -> Result<StepOutcome<Vector>> {
    Ok(step_inner(inst, xk, cfg, k)?.0)
}

/// Runs the feasible-direction method until a stop test fires or the
/// iteration budget is spent.
pub fn a1_solve(inst: &ProblemInstance, cfg: &SolverConfig) -> Result<RunReport> {
    cfg.validate()?;
    let mut log = RunLog::new(cfg);
    let f0 = inst.objective.eval(&inst.x0)?;
    let mut x = inst.x0.clone();
    let mut epsilon_sum = 0.0;
    let mut min_product: Option<f64> = None;

    for k in 0..cfg.max_outer_iters {
        let (outcome, data) = match step_inner(inst, &x, cfg, k) {
            Ok(v) => v,
            Err(e @ Error::LineSearchFailure { .. }) => {
                let terminal = plain_record(inst, k, &x)?;
                return Ok(finish_a1(log, Status::LineSearchFailure, terminal, k, Some(e), epsilon_sum, min_product, f0, inst, cfg));
            }
            Err(e) => return Err(e),
        };
        match outcome {
            StepOutcome::Stopped { status, record } => {
                // α_k ≤ 1, so the squared gap bounds the product here
                if let A1Data::Stopped { gap } = data {
                    let product = gap * gap;
                    min_product = Some(min_product.map_or(product, |m| m.min(product)));
                }
                return Ok(finish_a1(log, status, record, k, None, epsilon_sum, min_product, f0, inst, cfg));
            }
            StepOutcome::Advanced { next, record } => {
                let A1Data::Searched(step) = data else { unreachable!("advanced steps carry search data") };
                let eps = record.epsilon_qf.unwrap_or(0.0);
                epsilon_sum += eps;
                let product = step.search.alpha * step.xk.dist(&step.wk)?.powi(2);
                min_product = Some(min_product.map_or(product, |m| m.min(product)));
                log.monitors.observe_a1(
                    &step.as_armijo(),
                    &next,
                    step.search.f_trial,
                    eps,
                    inst.known_solution.as_ref(),
                    cfg,
                )?;
                log.step(record);
                x = next;
            }
        }
    }
    let terminal = plain_record(inst, cfg.max_outer_iters, &x)?;
    Ok(finish_a1(log, Status::IterationCap, terminal, cfg.max_outer_iters, None, epsilon_sum, min_product, f0, inst, cfg))
}

#[allow(clippy::too_many_arguments)]
fn finish_a1(
    mut log: RunLog,
    status: Status,
    terminal: crate::trace::IterateRecord,
    iterations: usize,
    failure: Option<Error>,
    epsilon_sum: f64,
    min_product: Option<f64>,
    f0: f64,
    inst: &ProblemInstance,
    cfg: &SolverConfig,
) -> RunReport {
    log.monitors.finish_a1(epsilon_sum, min_product, f0, inst.known_fstar, cfg);
    log.finish(status, terminal, iterations, failure)
}
