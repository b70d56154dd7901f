//! Run configuration: per-problem defaults, an optional JSON file, and
//! command-line overrides, merged in that order and validated before any
//! computation starts.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use frdt_core::{Grid, Problem, ProblemSpec};
use serde::{Deserialize, Serialize};

/// Invalid configuration, reported with the offending field.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{field}: {message}")]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
    Svg,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
            OutputFormat::Svg => "svg",
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.extension())
    }
}

impl std::str::FromStr for OutputFormat {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            "svg" => Ok(OutputFormat::Svg),
            other => Err(ConfigError::new(
                "outputs",
                format!("unknown format '{other}' (expected csv, json or svg)"),
            )),
        }
    }
}

/// Grid as written in a config file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl From<GridConfig> for Grid {
    fn from(g: GridConfig) -> Self {
        Grid {
            min: g.min,
            max: g.max,
            count: g.count,
        }
    }
}

/// Fully resolved configuration of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub problem: Problem,
    pub alpha: f64,
    pub sigma: f64,
    pub a: f64,
    pub b: f64,
    pub n: f64,
    pub m: f64,
    pub terms: usize,
    pub x_grid: GridConfig,
    pub t_grid: GridConfig,
    pub outputs: Vec<OutputFormat>,
    pub verify: bool,
    pub output_path: String,
}

/// Partial configuration: a JSON file or the set of flags given on the
/// command line. Absent fields fall through to the layer below.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigLayer {
    pub problem: Option<Problem>,
    pub alpha: Option<f64>,
    pub sigma: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub n: Option<f64>,
    pub m: Option<f64>,
    pub terms: Option<usize>,
    pub x_grid: Option<GridConfig>,
    pub t_grid: Option<GridConfig>,
    pub outputs: Option<Vec<OutputFormat>>,
    pub verify: Option<bool>,
    pub output_path: Option<String>,
}

impl ConfigLayer {
    pub fn from_json_str(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError::new("config", e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            ConfigError::new("config", format!("cannot read {}: {e}", path.display()))
        })?;
        Self::from_json_str(&text)
    }

    /// Fields of `over` replace those of `self`.
    pub fn overlay(self, over: ConfigLayer) -> ConfigLayer {
        ConfigLayer {
            problem: over.problem.or(self.problem),
            alpha: over.alpha.or(self.alpha),
            sigma: over.sigma.or(self.sigma),
            a: over.a.or(self.a),
            b: over.b.or(self.b),
            n: over.n.or(self.n),
            m: over.m.or(self.m),
            terms: over.terms.or(self.terms),
            x_grid: over.x_grid.or(self.x_grid),
            t_grid: over.t_grid.or(self.t_grid),
            outputs: over.outputs.or(self.outputs),
            verify: over.verify.or(self.verify),
            output_path: over.output_path.or(self.output_path),
        }
    }

    /// Fills gaps from the problem defaults and validates the result.
    pub fn resolve(self) -> Result<RunConfig, ConfigError> {
        let problem = self
            .problem
            .ok_or_else(|| ConfigError::new("problem", "required (e.g. --problem lse-cosh)"))?;
        let d = RunConfig::defaults(problem);
        let config = RunConfig {
            problem,
            alpha: self.alpha.unwrap_or(d.alpha),
            sigma: self.sigma.unwrap_or(d.sigma),
            a: self.a.unwrap_or(d.a),
            b: self.b.unwrap_or(d.b),
            n: self.n.unwrap_or(d.n),
            m: self.m.unwrap_or(d.m),
            terms: self.terms.unwrap_or(d.terms),
            x_grid: self.x_grid.unwrap_or(d.x_grid),
            t_grid: self.t_grid.unwrap_or(d.t_grid),
            outputs: self.outputs.unwrap_or(d.outputs),
            verify: self.verify.unwrap_or(d.verify),
            output_path: self.output_path.unwrap_or(d.output_path),
        };
        config.validate()?;
        Ok(config)
    }
}

impl RunConfig {
    /// Parameters and grids of the reference figures for `problem`.
    pub fn defaults(problem: Problem) -> Self {
        let spec = ProblemSpec::with_defaults(problem);
        let grid = |min, max, count| GridConfig { min, max, count };
        let (x_grid, t_grid) = match problem {
            Problem::LseCosh | Problem::LseExp => (grid(-PI, PI, 33), grid(0.0, 0.01, 11)),
            Problem::NlsePlane => (grid(-PI, PI, 33), grid(0.0, 0.1, 11)),
            Problem::NlseTrap => (grid(-2.0 * PI, 2.0 * PI, 65), grid(0.0, 0.1, 11)),
            Problem::Coupled => (grid(-10.0, 10.0, 41), grid(0.0, 1.0, 11)),
        };
        RunConfig {
            problem,
            alpha: spec.alpha,
            sigma: spec.sigma,
            a: spec.a,
            b: spec.b,
            n: spec.n,
            m: spec.m,
            terms: spec.terms,
            x_grid,
            t_grid,
            outputs: vec![OutputFormat::Csv],
            verify: false,
            output_path: format!("frdt-{}", problem.name()),
        }
    }

    pub fn problem_spec(&self) -> ProblemSpec {
        ProblemSpec {
            problem: self.problem,
            alpha: self.alpha,
            sigma: self.sigma,
            a: self.a,
            b: self.b,
            n: self.n,
            m: self.m,
            terms: self.terms,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(ConfigError::new(
                "alpha",
                format!("must lie in (0, 1], got {}", self.alpha),
            ));
        }
        for (name, v) in [
            ("sigma", self.sigma),
            ("a", self.a),
            ("b", self.b),
            ("n", self.n),
            ("m", self.m),
        ] {
            if !v.is_finite() {
                return Err(ConfigError::new(name, format!("must be finite, got {v}")));
            }
        }
        if self.terms < 1 {
            return Err(ConfigError::new("terms", "must be at least 1"));
        }
        if self.problem == Problem::Coupled && self.sigma != 2.0 {
            return Err(ConfigError::new(
                "sigma",
                format!("the coupled problem requires sigma = 2, got {}", self.sigma),
            ));
        }
        for (name, g) in [("x_grid", self.x_grid), ("t_grid", self.t_grid)] {
            Grid::from(g)
                .validate(name)
                .map_err(|e| ConfigError::new(name, e.to_string()))?;
        }
        if self.t_grid.min < 0.0 {
            return Err(ConfigError::new(
                "t_grid",
                format!("min must be >= 0, got {}", self.t_grid.min),
            ));
        }
        if self.outputs.is_empty() && !self.verify {
            return Err(ConfigError::new(
                "outputs",
                "nothing to do: no output format and verification disabled",
            ));
        }
        if self.output_path.is_empty() {
            return Err(ConfigError::new("output_path", "must not be empty"));
        }
        Ok(())
    }
}
