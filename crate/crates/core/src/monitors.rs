//! Runtime checks of the convergence inequalities along a solver run.
//!
//! Each check tracks the worst observed margin; a check passes while every
//! margin stays at or above `-tolerance` (or strictly above zero for
//! strict checks).

use crate::config::SolverConfig;
use crate::error::Result;
use crate::sets::Halfcut;
use crate::vector::Vector;

pub const DESCENT_TOL: f64 = 1e-12;
pub const INNERGRAD_TOL: f64 = 1e-10;
pub const QUASI_FEJER_TOL: f64 = 1e-8;
pub const EPSILON_SUM_TOL: f64 = 1e-6;
pub const VANISHING_PRODUCT_BOUND: f64 = 1e-8;
pub const ANCHOR_DIST_TOL: f64 = 1e-10;
pub const BALL_TOL: f64 = 1e-7;
pub const LEVEL_TOL: f64 = 1e-9;
pub const CUT_CHAIN_TOL: f64 = 1e-8;
pub const CUT_MEMBERSHIP_TOL: f64 = 1e-8;
pub const STEP_BOUND_TOL: f64 = 1e-12;
/// Backtracking depth below which the inner loop is considered finite.
pub const MAX_TRIALS_BOUND: usize = 80;

#[derive(Debug, Clone, PartialEq)]
pub struct MonitorCheck {
    pub name: &'static str,
    pub tolerance: f64,
    pub strict: bool,
    pub worst_margin: f64,
    pub evaluations: usize,
}

impl MonitorCheck {
    pub fn passed(&self) -> bool {
        if self.evaluations == 0 {
            return true;
        }
        if self.strict {
            self.worst_margin > 0.0
        } else {
            self.worst_margin >= -self.tolerance
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct MonitorReport {
    pub checks: Vec<MonitorCheck>,
}

impl MonitorReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(MonitorCheck::passed)
    }

    pub fn get(&self, name: &str) -> Option<&MonitorCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> Vec<&MonitorCheck> {
        self.checks.iter().filter(|c| !c.passed()).collect()
    }

    fn observe(&mut self, name: &'static str, tolerance: f64, strict: bool, margin: f64) {
        let margin = if margin.is_nan() { f64::NEG_INFINITY } else { margin };
        match self.checks.iter_mut().find(|c| c.name == name) {
            Some(c) => {
                c.worst_margin = c.worst_margin.min(margin);
                c.evaluations += 1;
            }
            None => self.checks.push(MonitorCheck {
                name,
                tolerance,
                strict,
                worst_margin: margin,
                evaluations: 1,
            }),
        }
    }

    pub(crate) fn check(&mut self, name: &'static str, tolerance: f64, margin: f64) {
        self.observe(name, tolerance, false, margin);
    }

    pub(crate) fn check_strict(&mut self, name: &'static str, margin: f64) {
        self.observe(name, 0.0, true, margin);
    }
}

/// Quasi-Fejér error term
/// `ε_k = −α_k‖x^k − w^k‖² + 2(β̂/δ)(f(x^k) − f(x^{k+1}))`.
pub fn a1_epsilon(
    xk: &Vector,
    wk: &Vector,
    alpha: f64,
    f_k: f64,
    f_next: f64,
    cfg: &SolverConfig,
) -> Result<f64> {
    let gap = xk.dist(wk)?;
    Ok(-alpha * gap * gap + 2.0 * (cfg.beta_max / cfg.delta) * (f_k - f_next))
}

/// Data from one accepted feasible-direction step, shared by the A1 and A2
/// monitors.
#[derive(Debug, Clone)]
pub struct ArmijoStep<'a> {
    pub xk: &'a Vector,
    pub wk: &'a Vector,
    pub f_k: f64,
    pub beta: f64,
    pub alpha: f64,
    pub trials: usize,
    /// `⟨∇f(x^k), x^k − w^k⟩`
    pub slope: f64,
    /// Objective at the rejected trial `j(k) − 1`, when `j(k) > 0`.
    pub f_previous_trial: Option<f64>,
}

impl MonitorReport {
    pub(crate) fn observe_armijo(&mut self, step: &ArmijoStep<'_>, cfg: &SolverConfig) -> Result<()> {
        let gap = step.xk.dist(step.wk)?;
        self.check("innergrad", INNERGRAD_TOL, step.slope - gap * gap / step.beta);
        self.check(
            "finite_inner_loop",
            0.0,
            MAX_TRIALS_BOUND as f64 - 1.0 - step.trials as f64,
        );
        if let Some(f_prev) = step.f_previous_trial {
            let prev_step = step.alpha / cfg.theta;
            // the rejected trial must violate sufficient decrease
            self.check_strict("armijo_minimality", f_prev - (step.f_k - cfg.delta * prev_step * step.slope));
        }
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    pub(crate) fn observe_a1(
        &mut self,
        step: &ArmijoStep<'_>,
        x_next: &Vector,
        f_next: f64,
        epsilon: f64,
        known_solution: Option<&Vector>,
        cfg: &SolverConfig,
    ) -> Result<()> {
        self.observe_armijo(step, cfg)?;
        self.check("monotone_descent", DESCENT_TOL, step.f_k - f_next);
        if let Some(xs) = known_solution {
            let before = step.xk.dist(xs)?.powi(2);
            let after = x_next.dist(xs)?.powi(2);
            self.check("quasi_fejer", QUASI_FEJER_TOL, before + epsilon - after);
        }
        Ok(())
    }

    /// End-of-run A1 checks over the accumulated step data.
    pub(crate) fn finish_a1(
        &mut self,
        epsilon_sum: f64,
        min_product: Option<f64>,
        f0: f64,
        known_fstar: Option<f64>,
        cfg: &SolverConfig,
    ) {
        if let Some(fs) = known_fstar {
            let bound = 2.0 * (cfg.beta_max / cfg.delta) * (f0 - fs);
            self.check("epsilon_sum_bound", EPSILON_SUM_TOL, bound - epsilon_sum);
        }
        if let Some(p) = min_product {
            self.check("vanishing_product", 0.0, VANISHING_PRODUCT_BOUND - p);
        }
    }
}

/// Data from one A2 iteration `x^k → x^{k+1}`.
#[derive(Debug, Clone)]
pub struct A2Observation<'a> {
    pub anchor: &'a Vector,
    pub xk: &'a Vector,
    pub x_next: &'a Vector,
    pub f_k: f64,
    pub f_lev: f64,
    pub grad_norm: f64,
    pub h_cut: &'a Halfcut,
    pub w_cut: &'a Halfcut,
}

impl MonitorReport {
    pub(crate) fn observe_a2(
        &mut self,
        obs: &A2Observation<'_>,
        known_solution: Option<&Vector>,
        known_fstar: Option<f64>,
    ) -> Result<()> {
        let d_k = obs.xk.dist(obs.anchor)?;
        let d_next = obs.x_next.dist(obs.anchor)?;
        let step = obs.xk.dist(obs.x_next)?;
        self.check("anchor_distance_nondecreasing", ANCHOR_DIST_TOL, d_next - d_k);
        self.check(
            "anchor_pythagoras",
            ANCHOR_DIST_TOL,
            d_next * d_next - d_k * d_k - step * step,
        );
        self.check("level_below_value", LEVEL_TOL, obs.f_k - obs.f_lev);
        if let Some(fs) = known_fstar {
            self.check("level_above_optimum", LEVEL_TOL, obs.f_lev - fs);
        }
        if obs.grad_norm > 0.0 {
            self.check("cut_distance_chain", CUT_CHAIN_TOL, step - (obs.f_k - obs.f_lev) / obs.grad_norm);
        }
        if let Some(xs) = known_solution {
            self.check("solution_in_h_cut", CUT_MEMBERSHIP_TOL, -obs.h_cut.excess(xs)?);
            self.check("solution_in_w_cut", CUT_MEMBERSHIP_TOL, -obs.w_cut.excess(xs)?);
        }
        Ok(())
    }

    /// Ball containment of an A2 iterate given `x_* = P_{S_*}(x⁰)`.
    pub(crate) fn observe_a2_ball(&mut self, x: &Vector, anchor: &Vector, target: &Vector) -> Result<()> {
        let center = Vector::axpby(0.5, anchor, 0.5, target)?;
        let radius = 0.5 * target.dist(anchor)?;
        self.check("ball_containment", BALL_TOL, radius - x.dist(&center)?);
        Ok(())
    }

    pub(crate) fn observe_step_bound(&mut self, step_length: f64, bound: f64) {
        self.check("exogenous_step_bound", STEP_BOUND_TOL, bound - step_length);
    }

    pub(crate) fn observe_descent(&mut self, f_k: f64, f_next: f64) {
        self.check("monotone_descent", DESCENT_TOL, f_k - f_next);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[f64]) -> Vector {
        Vector::new(x.to_vec()).unwrap()
    }

    #[test]
    fn epsilon_vanishes_for_stationary_iterates() {
        let cfg = SolverConfig::default();
        let x = v(&[1.0, 2.0]);
        for alpha in [1.0, 0.5, 0.125] {
            assert_eq!(a1_epsilon(&x, &x, alpha, 3.0, 3.0, &cfg).unwrap(), 0.0);
        }
    }

    #[test]
    fn epsilon_formula() {
        let cfg = SolverConfig { beta_max: 2.0, delta: 0.5, ..Default::default() };
        // −0.5·‖(3,4)‖² + 2·(2/0.5)·(1.0 − 0.25)
        let e = a1_epsilon(&v(&[3.0, 4.0]), &v(&[0.0, 0.0]), 0.5, 1.0, 0.25, &cfg).unwrap();
        assert!((e - (-12.5 + 6.0)).abs() < 1e-15);
    }

    #[test]
    fn checks_track_worst_margin() {
        let mut r = MonitorReport::default();
        r.check("x", 1e-3, 1.0);
        r.check("x", 1e-3, -5e-4);
        assert!(r.all_passed());
        r.check("x", 1e-3, -2e-3);
        assert!(!r.all_passed());
        assert_eq!(r.get("x").unwrap().evaluations, 3);
        assert_eq!(r.get("x").unwrap().worst_margin, -2e-3);
        r.check_strict("s", 0.0);
        assert_eq!(r.failures().len(), 2);
    }

    #[test]
    fn nan_margin_fails() {
        let mut r = MonitorReport::default();
        r.check("n", 1.0, f64::NAN);
        assert!(!r.all_passed());
    }
}
