//! JSON description of problem instances.

use projgrad::{FeasibleSet, Matrix, Objective, ProblemInstance, SetKind, Vector};
use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ObjectiveSpec {
    Pnorm { p: f64, shift: Vec<f64> },
    Quadratic {
        q: Vec<Vec<f64>>,
        b: Vec<f64>,
        #[serde(default)]
        c: f64,
    },
    Logsumexp { rows: Vec<Vec<f64>>, offsets: Vec<f64> },
}

/// `null` bounds in a box stand for `±∞`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SetSpec {
    Box { lower: Vec<Option<f64>>, upper: Vec<Option<f64>> },
    Ball { center: Vec<f64>, radius: f64 },
    Halfspace { normal: Vec<f64>, offset: f64 },
    Hyperplane { normal: Vec<f64>, offset: f64 },
    Simplex {
        dim: usize,
        #[serde(default = "unit")]
        scale: f64,
    },
    Whole { dim: usize },
}

fn unit() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub objective: ObjectiveSpec,
    pub set: SetSpec,
    pub x0: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub known_solution: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub known_fstar: Option<f64>,
}

fn vector(v: &[f64], what: &str) -> Result<Vector> {
    Vector::new(v.to_vec()).map_err(|e| BenchError::Spec(format!("{what}: {e}")))
}

impl ObjectiveSpec {
    pub fn build(&self) -> Result<Objective> {
        Ok(match self {
            ObjectiveSpec::Pnorm { p, shift } => Objective::pnorm(*p, vector(shift, "objective.shift")?)?,
            ObjectiveSpec::Quadratic { q, b, c } => {
                Objective::quadratic(Matrix::from_rows(q.clone())?, vector(b, "objective.b")?, *c)?
            }
            ObjectiveSpec::Logsumexp { rows, offsets } => {
                Objective::log_sum_exp(Matrix::from_rows(rows.clone())?, vector(offsets, "objective.offsets")?)?
            }
        })
    }

    pub fn from_objective(obj: &Objective) -> Self {
        match obj {
            Objective::PNorm { p, shift } => ObjectiveSpec::Pnorm { p: *p, shift: shift.as_slice().to_vec() },
            Objective::Quadratic { q, b, c } => {
                ObjectiveSpec::Quadratic { q: q.to_rows(), b: b.as_slice().to_vec(), c: *c }
            }
            Objective::LogSumExp { rows, offsets } => {
                ObjectiveSpec::Logsumexp { rows: rows.to_rows(), offsets: offsets.as_slice().to_vec() }
            }
        }
    }
}

impl SetSpec {
    pub fn build(&self) -> Result<FeasibleSet> {
        Ok(match self {
            SetSpec::Box { lower, upper } => FeasibleSet::boxed(
                lower.iter().map(|l| l.unwrap_or(f64::NEG_INFINITY)).collect(),
                upper.iter().map(|u| u.unwrap_or(f64::INFINITY)).collect(),
            )?,
            SetSpec::Ball { center, radius } => FeasibleSet::ball(vector(center, "set.center")?, *radius)?,
            SetSpec::Halfspace { normal, offset } => FeasibleSet::halfspace(vector(normal, "set.normal")?, *offset)?,
            SetSpec::Hyperplane { normal, offset } => {
                FeasibleSet::hyperplane(vector(normal, "set.normal")?, *offset)?
            }
            SetSpec::Simplex { dim, scale } => FeasibleSet::simplex(*dim, *scale)?,
            SetSpec::Whole { dim } => FeasibleSet::whole_space(*dim)?,
        })
    }

    pub fn from_set(set: &FeasibleSet) -> Self {
        let finite = |v: &f64| v.is_finite().then_some(*v);
        match set.kind() {
            SetKind::Box { lower, upper } => SetSpec::Box {
                lower: lower.iter().map(finite).collect(),
                upper: upper.iter().map(finite).collect(),
            },
            SetKind::Ball { center, radius } => SetSpec::Ball { center: center.as_slice().to_vec(), radius: *radius },
            SetKind::Halfspace { normal, offset } => {
                SetSpec::Halfspace { normal: normal.as_slice().to_vec(), offset: *offset }
            }
            SetKind::Hyperplane { normal, offset } => {
                SetSpec::Hyperplane { normal: normal.as_slice().to_vec(), offset: *offset }
            }
            SetKind::Simplex { dim, scale } => SetSpec::Simplex { dim: *dim, scale: *scale },
            SetKind::WholeSpace { dim } => SetSpec::Whole { dim: *dim },
        }
    }
}

impl ProblemSpec {
    /// Builds the instance; an infeasible `x0` is rejected here.
    pub fn build(&self) -> Result<ProblemInstance> {
        let mut inst = ProblemInstance::new(self.objective.build()?, self.set.build()?, vector(&self.x0, "x0")?)?;
        if let Some(xs) = &self.known_solution {
            inst = inst.with_known_solution(vector(xs, "known_solution")?)?;
        }
        if let Some(fs) = self.known_fstar {
            inst = inst.with_known_fstar(fs)?;
        }
        Ok(inst)
    }

    pub fn from_instance(inst: &ProblemInstance) -> Self {
        Self {
            objective: ObjectiveSpec::from_objective(&inst.objective),
            set: SetSpec::from_set(&inst.set),
            x0: inst.x0.as_slice().to_vec(),
            known_solution: inst.known_solution.as_ref().map(|x| x.as_slice().to_vec()),
            known_fstar: inst.known_fstar,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_with_open_side() {
        let json = r#"{"objective": {"kind": "quadratic", "q": [[1]], "b": [0]},
                       "set": {"kind": "box", "lower": [1], "upper": [null]},
                       "x0": [2]}"#;
        let spec: ProblemSpec = serde_json::from_str(json).unwrap();
        let inst = spec.build().unwrap();
        assert_eq!(inst.set.kind(), &SetKind::Box { lower: vec![1.0], upper: vec![f64::INFINITY] });
        assert_eq!(ProblemSpec::from_instance(&inst), spec);
    }

    #[test]
    fn unknown_kind_is_rejected() {
        let json = r#"{"kind": "cone", "dim": 2}"#;
        assert!(serde_json::from_str::<SetSpec>(json).is_err());
    }

    #[test]
    fn infeasible_start_reports_violation() {
        let spec = ProblemSpec {
            objective: ObjectiveSpec::Pnorm { p: 2.0, shift: vec![0.0] },
            set: SetSpec::Box { lower: vec![Some(1.0)], upper: vec![Some(2.0)] },
            x0: vec![3.5],
            known_solution: None,
            known_fstar: None,
        };
        match spec.build() {
            Err(BenchError::Solver(projgrad::Error::InfeasibleStart { violation })) => assert_eq!(violation, 1.5),
            other => panic!("unexpected {other:?}"),
        }
    }
}
