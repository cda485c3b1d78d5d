use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, BenchError>;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}:{column}: {message}")]
    Parse { path: PathBuf, line: usize, column: usize, message: String },
    #[error("invalid spec: {0}")]
    Spec(String),
    #[error("strategy {strategy} requires `{parameter}` in the config")]
    MissingParameter { strategy: String, parameter: &'static str },
    #[error("unknown registry instance `{0}`")]
    UnknownInstance(String),
    #[error(transparent)]
    Solver(#[from] projgrad::Error),
    #[error("trace file: {0}")]
    Csv(#[from] csv::Error),
    #[error("summary file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("comparison needs at least 2 specs, got {0}")]
    TooFewSpecs(usize),
    #[error("spec `{other}` solves a different instance than `{first}`")]
    MismatchedInstances { first: String, other: String },
    #[error("strategy {strategy} spent {found} projections at step {k}, expected {expected}")]
    ProjectionCount { strategy: String, k: usize, expected: usize, found: usize },
    #[error("oracle supports dimension ≤ 4, instance has {0}")]
    DimensionTooLarge(usize),
    #[error("invalid thread count in {var}: {value}")]
    Jobs { var: &'static str, value: String },
}

impl BenchError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        BenchError::Io { path: path.into(), source }
    }
}
