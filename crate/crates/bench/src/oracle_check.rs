//! Cross-check of solver limits against an independent reference solution.

use projgrad::oracle::{reference_solution, ReferenceSolution};
use projgrad::{Objective, ProblemInstance};
use serde::Serialize;

use crate::error::{BenchError, Result};
use crate::run;
use crate::spec::{RunSpec, Strategy};

pub const MAX_ORACLE_DIM: usize = 4;

#[derive(Debug, Clone, Serialize)]
pub struct OracleRun {
    pub strategy: Strategy,
    pub status: String,
    pub final_x: Vec<f64>,
    pub dist_to_oracle: Option<f64>,
    /// Distance to the projection of `x0` onto the solution set, when the
    /// oracle knows that set.
    pub dist_to_nearest: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub instance: String,
    pub method: Option<&'static str>,
    pub solution: Option<Vec<f64>>,
    pub fstar: Option<f64>,
    pub solution_set: Option<String>,
    pub nearest_to_x0: Option<Vec<f64>>,
    /// Set when the oracle produced nothing; the runs are still reported.
    pub flag: Option<String>,
    pub runs: Vec<OracleRun>,
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn describe_solution_set(inst: &ProblemInstance, r: &ReferenceSolution) -> Option<String> {
    match &inst.objective {
        Objective::Quadratic { .. } => Some(format!(
            "C ∩ {{x : Q(x − x̄) = 0, ⟨Qx̄ + b, x − x̄⟩ = 0}} with x̄ = {:?}",
            r.solution
        )),
        _ => None,
    }
}

/// Computes the reference solution of `spec.instance` and runs every
/// strategy from `strategies` with the spec's settings.
pub fn oracle_check(spec: &RunSpec, strategies: &[Strategy]) -> Result<OracleReport> {
    let inst = &spec.instance;
    if inst.dim() > MAX_ORACLE_DIM {
        return Err(BenchError::DimensionTooLarge(inst.dim()));
    }
    let reference = reference_solution(&inst.objective, &inst.set, inst.x0.as_slice());
    let mut runs = Vec::new();
    for &strategy in strategies {
        let mut s = spec.clone();
        s.strategy = strategy;
        s.output = None;
        let run = match run::execute(&s) {
            Ok(out) => {
                let x = out.summary.final_x;
                OracleRun {
                    strategy,
                    status: out.summary.status,
                    dist_to_oracle: reference.as_ref().map(|r| dist(&x, &r.solution)),
                    dist_to_nearest: reference.as_ref().and_then(|r| r.nearest_to_anchor.as_ref()).map(|n| dist(&x, n)),
                    final_x: x,
                    error: None,
                }
            }
            Err(e) => OracleRun {
                strategy,
                status: "error".into(),
                final_x: Vec::new(),
                dist_to_oracle: None,
                dist_to_nearest: None,
                error: Some(e.to_string()),
            },
        };
        runs.push(run);
    }
    Ok(OracleReport {
        instance: spec.instance_id.clone(),
        method: reference.as_ref().map(|r| r.method),
        solution_set: reference.as_ref().and_then(|r| describe_solution_set(inst, r)),
        nearest_to_x0: reference.as_ref().and_then(|r| r.nearest_to_anchor.clone()),
        fstar: reference.as_ref().map(|r| r.fstar),
        solution: reference.map(|r| r.solution),
        flag: None,
        runs,
    }
    .flagged())
}

impl OracleReport {
    fn flagged(mut self) -> Self {
        if self.solution.is_none() {
            self.flag = Some("oracle did not produce a reference solution".into());
        }
        self
    }
}
