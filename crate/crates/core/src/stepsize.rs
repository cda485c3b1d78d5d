//! Stepsize rules: constant, Armijo along the boundary, Armijo along the
//! feasible direction, and exogenous.
//!
//! Sufficient-decrease tests are plain `<=` comparisons in floating point,
//! with no slack, so the returned trial index is exactly the first one
//! that passes.

use crate::error::{Error, Result};
use crate::objectives::Objective;
use crate::sets::Projector;
use crate::vector::Vector;

pub const DEFAULT_MAX_INNER: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct LineSearchResult {
    /// `θ^j` for the feasible-direction search, `1` for the boundary search.
    pub alpha: f64,
    /// `β̄θ^ℓ` for the boundary search; unused (NaN) otherwise.
    pub beta: f64,
    pub trials: usize,
    pub trial_point: Vector,
    pub f_trial: f64,
    pub projections: usize,
}

/// `θ^j w + (1 − θ^j) x`
pub fn feasible_direction_point(xk: &Vector, wk: &Vector, step: f64) -> Result<Vector> {
    Vector::axpby(step, wk, 1.0 - step, xk)
}

/// Armijo search along the segment from `xk` to `wk = P_C(z^k)`.
///
/// Returns the smallest `j` with
/// `f(x^{k,j}) ≤ f(xk) − δ θ^j ⟨∇f(xk), xk − wk⟩`.
pub fn armijo_feasible_direction(
    obj: &Objective,
    xk: &Vector,
    wk: &Vector,
    theta: f64,
    delta: f64,
    max_inner: usize,
) -> Result<LineSearchResult> {
    let fxk = obj.eval(xk)?;
    let grad = obj.grad(xk)?;
    armijo_feasible_direction_with(obj, xk, fxk, &grad, wk, theta, delta, max_inner)
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn armijo_feasible_direction_with(
    obj: &Objective,
    xk: &Vector,
    fxk: f64,
    grad: &Vector,
    wk: &Vector,
    theta: f64,
    delta: f64,
    max_inner: usize,
) -> Result<LineSearchResult> {
    let slope = grad.dot(&xk.sub(wk)?)?;
    let mut step = 1.0;
    for j in 0..=max_inner {
        let trial = feasible_direction_point(xk, wk, step)?;
        let f_trial = obj.eval(&trial)?;
        if f_trial <= fxk - delta * step * slope {
            return Ok(LineSearchResult {
                alpha: step,
                beta: f64::NAN,
                trials: j,
                trial_point: trial,
                f_trial,
                projections: 0,
            });
        }
        step *= theta;
    }
    Err(Error::LineSearchFailure { max_inner })
}

/// Armijo search on the pre-projection stepsize, projecting every trial.
///
/// Returns the smallest `ℓ` with
/// `f(P_C(x^{k,ℓ})) ≤ f(xk) − δ⟨∇f(xk), xk − P_C(x^{k,ℓ})⟩` where
/// `x^{k,ℓ} = xk − β̄θ^ℓ∇f(xk)`. Costs `ℓ + 1` projections.
pub fn armijo_boundary<P: Projector + ?Sized>(
    obj: &Objective,
    set: &P,
    xk: &Vector,
    beta_bar: f64,
    theta: f64,
    delta: f64,
    max_inner: usize,
) -> Result<LineSearchResult> {
    let fxk = obj.eval(xk)?;
    let grad = obj.grad(xk)?;
    armijo_boundary_with(obj, set, xk, fxk, &grad, beta_bar, theta, delta, max_inner)
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn armijo_boundary_with<P: Projector + ?Sized>(
    obj: &Objective,
    set: &P,
    xk: &Vector,
    fxk: f64,
    grad: &Vector,
    beta_bar: f64,
    theta: f64,
    delta: f64,
    max_inner: usize,
) -> Result<LineSearchResult> {
    let mut beta = beta_bar;
    for l in 0..=max_inner {
        let trial = set.project(&Vector::axpby(1.0, xk, -beta, grad)?)?;
        let f_trial = obj.eval(&trial)?;
        if f_trial <= fxk - delta * grad.dot(&xk.sub(&trial)?)? {
            return Ok(LineSearchResult {
                alpha: 1.0,
                beta,
                trials: l,
                trial_point: trial,
                f_trial,
                projections: l + 1,
            });
        }
        beta *= theta;
    }
    Err(Error::LineSearchFailure { max_inner })
}

/// Fixed `β_k = β` with full steps `α_k = 1`.
///
/// Convergence is only guaranteed for `β ∈ (0, 2/L)` where `L` is a
/// Lipschitz constant of the gradient, which is usually unknown.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantStep {
    beta: f64,
}

pub fn constant_step(beta: f64) -> Result<ConstantStep> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidConfig(format!("constant stepsize must be positive, got {beta}")));
    }
    Ok(ConstantStep { beta })
}

impl ConstantStep {
    pub fn beta(&self, _k: usize) -> f64 {
        self.beta
    }

    pub fn alpha(&self, _k: usize) -> f64 {
        1.0
    }
}

/// `δ_k = c / (k + 1)`: divergent sum, summable squares.
pub fn exogenous_length(k: usize, c: f64) -> f64 {
    c / (k as f64 + 1.0)
}

/// `β_k = δ_k / ‖∇f(x^k)‖`. Not a descent method.
pub fn exogenous_step(grad_norm: f64, k: usize, c: f64) -> Result<f64> {
    if grad_norm == 0.0 {
        return Err(Error::ZeroGradient);
    }
    if !(grad_norm > 0.0 && c > 0.0) {
        return Err(Error::InvalidConfig("exogenous step needs positive gradient norm and constant".into()));
    }
    Ok(exogenous_length(k, c) / grad_norm)
}
