use crate::error::{Error, Result};

/// Rule producing the gradient stepsize `β_k` for the feasible-direction
/// search.
#[derive(Debug, Clone, PartialEq)]
pub enum BetaSchedule {
    Constant(f64),
    /// Cycles through the listed values.
    Cyclic(Vec<f64>),
}

impl BetaSchedule {
    pub fn beta(&self, k: usize) -> f64 {
        match self {
            BetaSchedule::Constant(b) => *b,
            BetaSchedule::Cyclic(values) => values[k % values.len()],
        }
    }

    fn values(&self) -> &[f64] {
        match self {
            BetaSchedule::Constant(b) => std::slice::from_ref(b),
            BetaSchedule::Cyclic(values) => values,
        }
    }
}

/// All tunable parameters of the solvers.
///
/// `beta_min`/`beta_max` bound the schedule and enter the quasi-Fejér
/// error term through `beta_max`. `theta` is the backtracking factor and
/// `delta` the sufficient-decrease constant.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub beta_min: f64,
    pub beta_max: f64,
    pub theta: f64,
    pub delta: f64,
    pub beta_schedule: BetaSchedule,
    pub residual_tol: f64,
    /// Threshold standing in for the exact equalities of the stop tests.
    pub fixed_point_tol: f64,
    pub max_outer_iters: usize,
    pub max_inner_iters: usize,
    /// `c` in the exogenous schedule `δ_k = c / (k + 1)`.
    pub exo_constant: f64,
    /// Initial trial stepsize `β̄` of the boundary search.
    pub boundary_beta: f64,
    /// Fixed stepsize of the constant strategy.
    pub constant_beta: f64,
    pub intersection_tol: f64,
    pub intersection_max_cycles: usize,
    /// Keep every `trace_stride`-th record (the terminal one is always kept).
    pub trace_stride: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            beta_min: 1e-4,
            beta_max: 10.0,
            theta: 0.5,
            delta: 1e-4,
            beta_schedule: BetaSchedule::Constant(1.0),
            residual_tol: 1e-8,
            fixed_point_tol: 1e-12,
            max_outer_iters: 10_000,
            max_inner_iters: 100,
            exo_constant: 1.0,
            boundary_beta: 1.0,
            constant_beta: 1.0,
            intersection_tol: 1e-10,
            intersection_max_cycles: 10_000,
            trace_stride: 1,
        }
    }
}

fn open_unit(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v < 1.0) {
        return Err(Error::InvalidConfig(format!("{name} must lie in (0, 1), got {v}")));
    }
    Ok(())
}

fn positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::InvalidConfig(format!("{name} must be positive and finite, got {v}")));
    }
    Ok(())
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        positive("beta_min", self.beta_min)?;
        positive("beta_max", self.beta_max)?;
        if self.beta_min > self.beta_max {
            return Err(Error::InvalidConfig(format!(
                "beta_min {} exceeds beta_max {}",
                self.beta_min, self.beta_max
            )));
        }
        open_unit("theta", self.theta)?;
        open_unit("delta", self.delta)?;
        let values = self.beta_schedule.values();
        if values.is_empty() {
            return Err(Error::InvalidConfig("beta schedule is empty".into()));
        }
        if let Some(b) = values.iter().find(|&&b| !(b >= self.beta_min && b <= self.beta_max)) {
            return Err(Error::InvalidConfig(format!(
                "beta schedule value {b} outside [{}, {}]",
                self.beta_min, self.beta_max
            )));
        }
        positive("residual_tol", self.residual_tol)?;
        if !(self.fixed_point_tol >= 0.0) {
            return Err(Error::InvalidConfig("fixed_point_tol must be nonnegative".into()));
        }
        positive("exo_constant", self.exo_constant)?;
        positive("boundary_beta", self.boundary_beta)?;
        positive("constant_beta", self.constant_beta)?;
        positive("intersection_tol", self.intersection_tol)?;
        for (name, n) in [
            ("max_outer_iters", self.max_outer_iters),
            ("max_inner_iters", self.max_inner_iters),
            ("intersection_max_cycles", self.intersection_max_cycles),
            ("trace_stride", self.trace_stride),
        ] {
            if n == 0 {
                return Err(Error::InvalidConfig(format!("{name} must be positive")));
            }
        }
        Ok(())
    }
}
