//! Projected gradient methods for `min f(x)` subject to `x ∈ C`, where
//! `f` is convex and differentiable and `C` is closed and convex.
//!
//! Two line-search based solvers are provided:
//!
//! * [`solver::a1_solve`]: the classical projected gradient method with
//!   an Armijo search along the feasible direction `P_C(z^k) − x^k`. It
//!   needs one projection per iteration and no Lipschitz constant.
//! * [`solver::a2_solve`]: a variant that projects the starting point onto
//!   `C ∩ W_k ∩ H_k`, where `H_k` is a level cut and `W_k` an anchor cut.
//!   Its iterates stay in a ball and converge to the solution closest to
//!   the starting point.
//!
//! The constant, boundary-Armijo and exogenous stepsize strategies are
//! available through [`solver::classic_solve`] for comparison, and
//! [`monitors`] checks the convergence inequalities on every run.

pub mod config;
pub mod dykstra;
mod error;
pub mod monitors;
pub mod objectives;
pub mod oracle;
mod polyhedral;
pub mod sets;
pub mod solver;
pub mod stepsize;
pub mod trace;
mod vector;

pub use config::{BetaSchedule, SolverConfig};
pub use dykstra::{dykstra, project_intersection, IntersectionMethod, IntersectionProjection};
pub use error::{Error, Result};
pub use monitors::{MonitorCheck, MonitorReport};
pub use objectives::{Matrix, Objective};
pub use sets::{FeasibleSet, Halfcut, SetKind};
pub use solver::{ProblemInstance, RunReport, Status};
pub use trace::IterateRecord;
pub use vector::Vector;
