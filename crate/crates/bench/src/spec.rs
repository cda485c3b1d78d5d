//! Run specifications: which instance, which strategy, which settings.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use projgrad::{BetaSchedule, ProblemInstance, SolverConfig};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{BenchError, Result};
use crate::registry;
use crate::schema::ProblemSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Strategy {
    /// Constant `β`, full steps.
    #[serde(rename = "a")]
    Constant,
    /// Armijo search along the projection arc, full steps.
    #[serde(rename = "b")]
    Boundary,
    /// Armijo search along the feasible direction.
    #[serde(rename = "c", alias = "A1")]
    FeasibleDirection,
    /// Exogenous `β_k = δ_k/‖∇f(x^k)‖`.
    #[serde(rename = "d")]
    Exogenous,
    /// The strongly convergent method.
    #[serde(rename = "A2")]
    Strong,
}

impl Strategy {
    pub const ALL: [Strategy; 5] =
        [Strategy::Constant, Strategy::Boundary, Strategy::FeasibleDirection, Strategy::Exogenous, Strategy::Strong];

    pub fn code(self) -> &'static str {
        match self {
            Strategy::Constant => "a",
            Strategy::Boundary => "b",
            Strategy::FeasibleDirection => "c",
            Strategy::Exogenous => "d",
            Strategy::Strong => "A2",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Strategy {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" => Ok(Strategy::Constant),
            "b" => Ok(Strategy::Boundary),
            "c" | "A1" => Ok(Strategy::FeasibleDirection),
            "d" => Ok(Strategy::Exogenous),
            "A2" => Ok(Strategy::Strong),
            other => Err(BenchError::Spec(format!("unknown strategy `{other}` (expected a, b, c, d or A2)"))),
        }
    }
}

/// Optional overrides of [`SolverConfig`] fields.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    /// A single value gives a constant schedule, several a cyclic one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_schedule: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixed_point_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_outer_iters: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_inner_iters: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exo_constant: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boundary_beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constant_beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub intersection_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub intersection_max_cycles: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace_stride: Option<usize>,
}

impl ConfigOverrides {
    pub fn apply(&self, mut cfg: SolverConfig) -> SolverConfig {
        macro_rules! set {
            ($($field:ident),*) => {$(
                if let Some(v) = self.$field { cfg.$field = v; }
            )*};
        }
        set!(
            beta_min,
            beta_max,
            theta,
            delta,
            residual_tol,
            fixed_point_tol,
            max_outer_iters,
            max_inner_iters,
            exo_constant,
            boundary_beta,
            constant_beta,
            intersection_tol,
            intersection_max_cycles,
            trace_stride
        );
        match self.beta_schedule.as_deref() {
            Some([b]) => cfg.beta_schedule = BetaSchedule::Constant(*b),
            Some(values) => cfg.beta_schedule = BetaSchedule::Cyclic(values.to_vec()),
            None => {}
        }
        cfg
    }
}

/// Either a registry id or an inline problem.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ProblemRef {
    Registry(String),
    Inline(ProblemSpec),
}

impl<'de> Deserialize<'de> for ProblemRef {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::String(id) => Ok(ProblemRef::Registry(id)),
            v @ serde_json::Value::Object(_) => serde_json::from_value(v)
                .map(ProblemRef::Inline)
                .map_err(|e| D::Error::custom(format!("problem: {e}"))),
            other => Err(D::Error::custom(format!("problem must be a registry id or an object, got {other}"))),
        }
    }
}

/// The on-disk form of a run specification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpecFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub problem: ProblemRef,
    pub strategy: Strategy,
    #[serde(default)]
    pub config: ConfigOverrides,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

/// A validated run specification.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub id: String,
    /// Registry id, or the spec id for inline problems.
    pub instance_id: String,
    pub instance: ProblemInstance,
    pub strategy: Strategy,
    pub overrides: ConfigOverrides,
    pub config: SolverConfig,
    pub seed: u64,
    pub output: Option<PathBuf>,
}

impl RunSpec {
    pub fn from_file_form(file: RunSpecFile, default_id: &str) -> Result<Self> {
        let id = file.id.unwrap_or_else(|| default_id.to_string());
        let (instance_id, instance) = match &file.problem {
            ProblemRef::Registry(name) => (name.clone(), registry::instance(name, file.seed)?),
            ProblemRef::Inline(p) => (id.clone(), p.build()?),
        };
        Self::new(id, instance_id, instance, file.strategy, file.config, file.seed, file.output)
    }

    pub fn new(
        id: String,
        instance_id: String,
        instance: ProblemInstance,
        strategy: Strategy,
        overrides: ConfigOverrides,
        seed: u64,
        output: Option<PathBuf>,
    ) -> Result<Self> {
        let config = overrides.apply(SolverConfig::default());
        config.validate()?;
        let spec = Self { id, instance_id, instance, strategy, overrides, config, seed, output };
        spec.check_strategy_parameters()?;
        Ok(spec)
    }

    /// Re-targets the spec at another strategy, revalidating.
    pub fn with_strategy(mut self, strategy: Strategy) -> Result<Self> {
        self.strategy = strategy;
        self.check_strategy_parameters()?;
        Ok(self)
    }

    /// Applies further overrides on top of the current ones.
    pub fn with_overrides(mut self, extra: &ConfigOverrides) -> Result<Self> {
        self.config = extra.apply(self.config);
        self.config.validate()?;
        let merged = serde_json::to_value(&self.overrides)?;
        let extra_value = serde_json::to_value(extra)?;
        let mut merged = merged.as_object().cloned().unwrap_or_default();
        if let Some(obj) = extra_value.as_object() {
            merged.extend(obj.clone());
        }
        self.overrides = serde_json::from_value(serde_json::Value::Object(merged))?;
        self.check_strategy_parameters()?;
        Ok(self)
    }

    fn check_strategy_parameters(&self) -> Result<()> {
        let missing = match self.strategy {
            Strategy::Constant if self.overrides.constant_beta.is_none() => Some("constant_beta"),
            Strategy::Exogenous if self.overrides.exo_constant.is_none() => Some("exo_constant"),
            _ => None,
        };
        match missing {
            Some(parameter) => Err(BenchError::MissingParameter { strategy: self.strategy.to_string(), parameter }),
            None => Ok(()),
        }
    }
}

fn parse_error(path: &Path, e: &serde_json::Error) -> BenchError {
    BenchError::Parse { path: path.to_path_buf(), line: e.line(), column: e.column(), message: e.to_string() }
}

pub fn parse_spec(text: &str, path: &Path) -> Result<RunSpec> {
    let file: RunSpecFile = serde_json::from_str(text).map_err(|e| parse_error(path, &e))?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("run");
    RunSpec::from_file_form(file, stem)
}

/// Reads, parses and validates a spec file.
pub fn load_spec(path: impl AsRef<Path>) -> Result<RunSpec> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| BenchError::io(path, e))?;
    parse_spec(&text, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<RunSpec> {
        parse_spec(text, Path::new("t.json"))
    }

    #[test]
    fn registry_reference() {
        let spec = parse(r#"{"problem": "quadratic-box", "strategy": "c"}"#).unwrap();
        assert_eq!(spec.id, "t");
        assert_eq!(spec.instance_id, "quadratic-box");
        assert_eq!(spec.config, SolverConfig::default());
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = parse("{\n  \"problem\": \"quadratic-box\",\n  \"strategy\": \"c\",\n  \"colour\": 1\n}").unwrap_err();
        match err {
            BenchError::Parse { line, message, .. } => {
                assert_eq!(line, 4);
                assert!(message.contains("colour"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn inline_problem_field_errors_name_the_field() {
        let text = r#"{"problem": {"objective": {"kind": "pnorm", "p": 2, "shift": [0]},
                                    "set": {"kind": "ball", "center": [0], "radius": 1},
                                    "x0": [0], "x_star": [0]},
                       "strategy": "c"}"#;
        match parse(text).unwrap_err() {
            BenchError::Parse { message, .. } => assert!(message.contains("x_star"), "{message}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn infeasible_inline_start_is_rejected() {
        let text = r#"{"problem": {"objective": {"kind": "pnorm", "p": 2, "shift": [0]},
                                    "set": {"kind": "ball", "center": [0], "radius": 1},
                                    "x0": [3]},
                       "strategy": "c"}"#;
        match parse(text).unwrap_err() {
            BenchError::Solver(projgrad::Error::InfeasibleStart { violation }) => assert_eq!(violation, 2.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn theta_one_is_rejected() {
        let err = parse(r#"{"problem": "quadratic-box", "strategy": "c", "config": {"theta": 1.0}}"#).unwrap_err();
        assert!(matches!(err, BenchError::Solver(projgrad::Error::InvalidConfig(_))), "{err:?}");
    }

    #[test]
    fn strategy_parameters_are_required() {
        let err = parse(r#"{"problem": "ray-1d", "strategy": "d"}"#).unwrap_err();
        assert!(matches!(err, BenchError::MissingParameter { parameter: "exo_constant", .. }));
        let ok = parse(r#"{"problem": "ray-1d", "strategy": "a", "config": {"constant_beta": 0.5}}"#).unwrap();
        assert_eq!(ok.config.constant_beta, 0.5);
        assert!(ok.with_strategy(Strategy::Exogenous).is_err());
    }

    #[test]
    fn schedule_override() {
        let spec =
            parse(r#"{"problem": "ray-1d", "strategy": "c", "config": {"beta_schedule": [0.5, 2.0]}}"#).unwrap();
        assert_eq!(spec.config.beta_schedule, BetaSchedule::Cyclic(vec![0.5, 2.0]));
    }

    #[test]
    fn merging_overrides_keeps_earlier_ones() {
        let spec = parse(r#"{"problem": "ray-1d", "strategy": "a", "config": {"constant_beta": 0.5}}"#).unwrap();
        let extra = ConfigOverrides { max_outer_iters: Some(3), ..Default::default() };
        let spec = spec.with_overrides(&extra).unwrap();
        assert_eq!(spec.overrides.constant_beta, Some(0.5));
        assert_eq!(spec.config.max_outer_iters, 3);
    }

    #[test]
    fn strategy_codes_round_trip() {
        for s in Strategy::ALL {
            assert_eq!(s.code().parse::<Strategy>().unwrap(), s);
            assert_eq!(serde_json::to_string(&s).unwrap(), format!("\"{}\"", s.code()));
        }
        assert_eq!("A1".parse::<Strategy>().unwrap(), Strategy::FeasibleDirection);
    }
}
