use super::{base_record, plain_record, residual, ProblemInstance, RunLog, RunReport, Status};
use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::sets::{CountingProjector, Projector};
use crate::stepsize::{armijo_boundary_with, constant_step, exogenous_length, exogenous_step};
use crate::vector::Vector;

/// Full-step (`α_k = 1`) stepsize strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassicStrategy {
    /// (a) fixed `β_k = cfg.constant_beta`.
    Constant,
    /// (b) Armijo backtracking on `β` starting from `cfg.boundary_beta`.
    Boundary,
    /// (d) `β_k = δ_k / ‖∇f(x^k)‖` with `δ_k = cfg.exo_constant / (k + 1)`.
    Exogenous,
}

/// Runs `x^{k+1} = P_C(x^k − β_k∇f(x^k))` with the chosen stepsize rule.
///
/// Stops on a vanishing gradient, on `x^{k+1} = x^k` (within
/// `fixed_point_tol`), or when the natural residual drops to
/// `residual_tol`.
pub fn classic_solve(inst: &ProblemInstance, cfg: &SolverConfig, strategy: ClassicStrategy) -> Result<RunReport> {
    cfg.validate()?;
    let constant = constant_step(cfg.constant_beta)?;
    let mut log = RunLog::new(cfg);
    let mut x = inst.x0.clone();

    for k in 0..cfg.max_outer_iters {
        let f = inst.objective.eval(&x)?;
        let grad = inst.objective.grad(&x)?;
        let res = residual(inst, &x)?;
        let mut record = base_record(inst, k, &x, f, res)?;
        if grad.norm() == 0.0 {
            return Ok(log.finish(Status::FixedPointStop, record, k, None));
        }
        if res <= cfg.residual_tol {
            return Ok(log.finish(Status::OptimalResidual, record, k, None));
        }

        let proj = CountingProjector::new(&inst.set);
        let (next, beta, trials) = match strategy {
            ClassicStrategy::Constant => {
                let beta = constant.beta(k);
                (proj.project(&Vector::axpby(1.0, &x, -beta, &grad)?)?, beta, 0)
            }
            ClassicStrategy::Boundary => {
                let search = armijo_boundary_with(
                    &inst.objective,
                    &proj,
                    &x,
                    f,
                    &grad,
                    cfg.boundary_beta,
                    cfg.theta,
                    cfg.delta,
                    cfg.max_inner_iters,
                );
                match search {
                    Ok(s) => {
                        log.monitors.observe_descent(f, s.f_trial);
                        (s.trial_point, s.beta, s.trials)
                    }
                    Err(e @ Error::LineSearchFailure { .. }) => {
                        return Ok(log.finish(Status::LineSearchFailure, record, k, Some(e)));
                    }
                    Err(e) => return Err(e),
                }
            }
            ClassicStrategy::Exogenous => {
                let beta = exogenous_step(grad.norm(), k, cfg.exo_constant)?;
                let next = proj.project(&Vector::axpby(1.0, &x, -beta, &grad)?)?;
                log.monitors.observe_step_bound(next.dist(&x)?, exogenous_length(k, cfg.exo_constant));
                (next, beta, 0)
            }
        };

        record.alpha = Some(1.0);
        record.beta = Some(beta);
        record.inner_trials = Some(trials);
        record.projections = proj.calls();
        let moved = next.dist(&x)?;
        log.step(record);
        x = next;
        if moved <= cfg.fixed_point_tol {
            let terminal = plain_record(inst, k + 1, &x)?;
            return Ok(log.finish(Status::FixedPointStop, terminal, k + 1, None));
        }
    }
    let terminal = plain_record(inst, cfg.max_outer_iters, &x)?;
    Ok(log.finish(Status::IterationCap, terminal, cfg.max_outer_iters, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::{Matrix, Objective};
    use crate::sets::FeasibleSet;
    use crate::solver::a1_solve;

    fn v(x: &[f64]) -> Vector {
        Vector::new(x.to_vec()).unwrap()
    }

    fn quadratic_over_box() -> ProblemInstance {
        let f = Objective::quadratic(Matrix::identity(2), v(&[-2.0, -2.0]), 4.0).unwrap();
        let c = FeasibleSet::boxed(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
        ProblemInstance::new(f, c, v(&[0.0, 0.0])).unwrap()
    }

    #[test]
    fn constant_step_within_textbook_range() {
        let inst = quadratic_over_box();
        let cfg = SolverConfig { constant_beta: 0.5, ..Default::default() };
        let report = classic_solve(&inst, &cfg, ClassicStrategy::Constant).unwrap();
        assert!(report.status.is_success());
        assert!(report.final_residual <= 1e-6);
        let a1 = a1_solve(&inst, &SolverConfig::default()).unwrap();
        assert!(report.final_x.dist(&a1.final_x).unwrap() <= 1e-6);
    }

    #[test]
    fn exogenous_respects_step_bound() {
        let inst = quadratic_over_box();
        let cfg = SolverConfig { max_outer_iters: 10_000, ..Default::default() };
        let report = classic_solve(&inst, &cfg, ClassicStrategy::Exogenous).unwrap();
        assert!(report.final_residual < 1e-2);
        let bound = report.monitors.get("exogenous_step_bound").unwrap();
        assert!(bound.passed());
        for r in &report.trace[..report.trace.len() - 1] {
            assert_eq!(r.alpha, Some(1.0));
        }
    }

    #[test]
    fn boundary_matches_feasible_direction_limit() {
        let inst = super::super::tests::half_square_on_ray();
        let cfg = SolverConfig::default();
        let b = classic_solve(&inst, &cfg, ClassicStrategy::Boundary).unwrap();
        let c = a1_solve(&inst, &cfg).unwrap();
        assert!(b.final_x.dist(&c.final_x).unwrap() <= 1e-6);
        for r in &b.trace[..b.trace.len() - 1] {
            assert_eq!(r.projections, r.inner_trials.unwrap() + 1);
        }
    }

    #[test]
    fn oversized_constant_step_does_not_converge() {
        // ½‖x − (½,½)‖² over [0,1]², L = 1, β = 2.5 > 2/L
        let f = Objective::quadratic(Matrix::identity(2), v(&[-0.5, -0.5]), 0.25).unwrap();
        let c = FeasibleSet::boxed(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
        let inst = ProblemInstance::new(f, c, v(&[0.0, 0.0])).unwrap();
        let cfg = SolverConfig { constant_beta: 2.5, max_outer_iters: 500, ..Default::default() };
        let report = classic_solve(&inst, &cfg, ClassicStrategy::Constant).unwrap();
        assert_eq!(report.status, Status::IterationCap);
        assert!(report.final_residual > cfg.residual_tol);
    }
}
