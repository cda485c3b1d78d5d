//! Harness around the `projgrad` solvers: a registry of test problems, JSON
//! run specifications, trace and summary files, strategy comparisons and
//! oracle cross-checks.

pub mod compare;
mod error;
pub mod oracle_check;
pub mod registry;
pub mod run;
pub mod schema;
pub mod spec;

pub use error::{BenchError, Result};
pub use spec::{load_spec, ConfigOverrides, RunSpec, Strategy};
