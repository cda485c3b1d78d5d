//! Side-by-side runs of several strategies on one instance.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{BenchError, Result};
use crate::run::{self, RunOutcome, SummaryRow};
use crate::spec::{RunSpec, Strategy};

/// Environment variable holding the number of worker threads for batch
/// runs. Unset means one per core.
pub const JOBS_VAR: &str = "PROJGRAD_JOBS";

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonRow {
    pub summary: SummaryRow,
    /// Final natural residual at or below the spec's `residual_tol`.
    pub converged: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub instance: String,
    pub rows: Vec<ComparisonRow>,
}

pub fn jobs_from_env() -> Result<Option<usize>> {
    match std::env::var(JOBS_VAR) {
        Err(_) => Ok(None),
        Ok(value) => match value.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(BenchError::Jobs { var: JOBS_VAR, value }),
        },
    }
}

/// Runs every spec in parallel, writing each one's files when it names an
/// output prefix.
pub fn run_batch(specs: &[RunSpec], jobs: Option<usize>) -> Result<Vec<Result<RunOutcome>>> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| BenchError::Spec(format!("thread pool: {e}")))?;
    Ok(pool.install(|| specs.par_iter().map(run::run).collect()))
}

/// Checks the per-step projection budget of the search strategies:
/// one for (c), `ℓ(k) + 1` for (b).
pub fn check_projection_counts(strategy: Strategy, outcome: &RunOutcome) -> Result<()> {
    for r in outcome.report.trace.iter().filter(|r| r.inner_trials.is_some()) {
        let expected = match strategy {
            Strategy::FeasibleDirection => 1,
            Strategy::Boundary => r.inner_trials.unwrap_or(0) + 1,
            _ => continue,
        };
        if r.projections != expected {
            return Err(BenchError::ProjectionCount {
                strategy: strategy.to_string(),
                k: r.k,
                expected,
                found: r.projections,
            });
        }
    }
    Ok(())
}

pub fn compare(specs: &[RunSpec], jobs: Option<usize>) -> Result<Comparison> {
    if specs.len() < 2 {
        return Err(BenchError::TooFewSpecs(specs.len()));
    }
    let first = &specs[0];
    if let Some(other) = specs.iter().find(|s| s.instance != first.instance) {
        return Err(BenchError::MismatchedInstances { first: first.id.clone(), other: other.id.clone() });
    }
    let mut rows = Vec::with_capacity(specs.len());
    for (spec, outcome) in specs.iter().zip(run_batch(specs, jobs)?) {
        let outcome = outcome?;
        check_projection_counts(spec.strategy, &outcome)?;
        let converged = outcome.summary.final_residual <= spec.config.residual_tol;
        rows.push(ComparisonRow { summary: outcome.summary, converged });
    }
    Ok(Comparison { instance: first.instance_id.clone(), rows })
}

impl Comparison {
    pub fn render(&self) -> String {
        let mut out = format!("instance: {}\n", self.instance);
        let _ = writeln!(
            out,
            "{:<16} {:>4} {:<20} {:>8} {:>11} {:>9} {:>8} {:>12} {:>9} {:>8}",
            "id", "strat", "status", "iters", "projections", "trials", "max j", "residual", "monitors", "conv"
        );
        for row in &self.rows {
            let s = &row.summary;
            let _ = writeln!(
                out,
                "{:<16} {:>4} {:<20} {:>8} {:>11} {:>9} {:>8} {:>12.3e} {:>9} {:>8}",
                s.id,
                s.strategy.code(),
                s.status,
                s.iterations,
                s.total_projections,
                s.total_inner_trials,
                s.max_inner_trials,
                s.final_residual,
                if s.monitors_passed { "ok" } else { "FAIL" },
                if row.converged { "yes" } else { "NO" },
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::ConfigOverrides;

    fn spec(id: &str, instance: &str, strategy: Strategy, overrides: ConfigOverrides) -> RunSpec {
        let inst = crate::registry::instance(instance, 0).unwrap();
        RunSpec::new(id.into(), instance.into(), inst, strategy, overrides, 0, None).unwrap()
    }

    #[test]
    fn single_spec_is_rejected() {
        let s = spec("c", "ray-1d", Strategy::FeasibleDirection, Default::default());
        assert!(matches!(compare(&[s], Some(1)), Err(BenchError::TooFewSpecs(1))));
    }

    #[test]
    fn mismatched_instances_are_rejected() {
        let a = spec("a", "ray-1d", Strategy::FeasibleDirection, Default::default());
        let b = spec("b", "quadratic-box", Strategy::FeasibleDirection, Default::default());
        assert!(matches!(compare(&[a, b], Some(1)), Err(BenchError::MismatchedInstances { .. })));
    }

    #[test]
    fn feasible_direction_uses_fewer_projections_than_boundary_search() {
        let b = spec("b", "ray-1d", Strategy::Boundary, Default::default());
        let c = spec("c", "ray-1d", Strategy::FeasibleDirection, Default::default());
        let cmp = compare(&[b, c], Some(2)).unwrap();
        assert!(cmp.rows[1].summary.total_projections <= cmp.rows[0].summary.total_projections);
        assert!(cmp.render().contains("ray-1d"));
    }

    #[test]
    fn oversized_constant_step_is_flagged() {
        let big = ConfigOverrides { constant_beta: Some(2.5), max_outer_iters: Some(500), ..Default::default() };
        let a = spec("a", "quadratic-interior", Strategy::Constant, big);
        let c = spec("c", "quadratic-interior", Strategy::FeasibleDirection, Default::default());
        let cmp = compare(&[a, c], None).unwrap();
        assert!(!cmp.rows[0].converged);
        assert!(cmp.rows[1].converged);
        assert!(cmp.render().contains("NO"));
    }
}
