use crate::vector::Vector;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("vectors must have at least one entry")]
    EmptyVector,

    #[error("non-finite value encountered ({context})")]
    NonFinite { context: &'static str },

    #[error("invalid feasible set: {0}")]
    InvalidSet(String),

    #[error("invalid objective: {0}")]
    InvalidObjective(String),

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("starting point is not feasible (violation {violation:e})")]
    InfeasibleStart { violation: f64 },

    #[error("gradient vanishes; the point is stationary and no exogenous step is defined")]
    ZeroGradient,

    /// The backtracking loop exhausted its budget. Under convexity and a
    /// correct gradient oracle this cannot happen at a non-optimal point.
    #[error("line search did not find an acceptable step within {max_inner} trials")]
    LineSearchFailure { max_inner: usize },

    #[error("halfspace cut with zero normal and negative offset is empty")]
    EmptyCut,

    #[error("intersection projection did not converge after {cycles} cycles")]
    IntersectionNonconvergence { cycles: usize, best: Vector },
}
