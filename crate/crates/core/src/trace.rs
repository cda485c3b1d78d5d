use crate::vector::Vector;

/// One row of a solver trace.
///
/// Step quantities (`alpha`, `beta`, `inner_trials`, `epsilon_qf`) are
/// `None` on the terminal record, where no step is taken.
#[derive(Debug, Clone, PartialEq)]
pub struct IterateRecord {
    pub k: usize,
    pub x: Vector,
    pub f_val: f64,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub inner_trials: Option<usize>,
    /// Natural residual `‖x − P_C(x − ∇f(x))‖`.
    pub residual: f64,
    pub f_lev: Option<f64>,
    pub epsilon_qf: Option<f64>,
    pub dist_anchor: Option<f64>,
    pub dist_known_solution: Option<f64>,
    /// Projections onto the feasible set spent by the step (diagnostic
    /// residual evaluations excluded).
    pub projections: usize,
}

impl IterateRecord {
    pub(crate) fn new(k: usize, x: Vector, f_val: f64, residual: f64) -> Self {
        Self {
            k,
            x,
            f_val,
            alpha: None,
            beta: None,
            inner_trials: None,
            residual,
            f_lev: None,
            epsilon_qf: None,
            dist_anchor: None,
            dist_known_solution: None,
            projections: 0,
        }
    }
}
