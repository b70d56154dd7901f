//! One solver run: solve, sample, write artifacts, and optionally verify.

use std::path::PathBuf;

use frdt_core::{
    max_oracle_error, residual_spectrum, sample, solve, Error as SolverError, Execution, Family,
    Grid, Solution,
};
use serde::Serialize;

use crate::config::{ConfigError, OutputFormat, RunConfig};
use crate::emit::{self, EmitError};

/// Largest tolerated residual coefficient, relative to the size of the
/// terms that cancel in it.
pub const RESIDUAL_THRESHOLD: f64 = 1e-9;
/// Oracle tolerance for the linear problems.
pub const LINEAR_ORACLE_THRESHOLD: f64 = 1e-10;
/// Oracle tolerance for the nonlinear problems at `alpha = 1`.
pub const NONLINEAR_ORACLE_THRESHOLD: f64 = 1e-8;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("invalid configuration: {0}")]
    Config(#[from] ConfigError),
    #[error("{problem} (alpha = {alpha}, terms = {terms}): {source}")]
    Solver {
        problem: String,
        alpha: f64,
        terms: usize,
        #[source]
        source: SolverError,
    },
    #[error(transparent)]
    Emit(#[from] EmitError),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => EXIT_USAGE,
            RunError::Solver {
                source: SolverError::Usage(_),
                ..
            } => EXIT_USAGE,
            RunError::Solver { .. } | RunError::Emit(_) => EXIT_RUNTIME,
        }
    }
}

/// Test hook: multiplies `U_k` (and `V_k`) by this factor after solving.
const CORRUPTION_FACTOR: f64 = 1.1;

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub corrupt_coefficient: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub problem: String,
    pub alpha: f64,
    pub terms: usize,
    /// Largest residual coefficient magnitude, unscaled.
    pub max_residual: f64,
    /// Largest residual relative to `max(1, magnitude of cancelling terms)`.
    pub max_residual_scaled: f64,
    pub residual_threshold: f64,
    /// `None` when no closed form exists for this problem and order.
    pub max_oracle_error: Option<f64>,
    pub oracle_threshold: Option<f64>,
    pub oracle: String,
    pub passed: bool,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub artifacts: Vec<PathBuf>,
    pub report: Option<VerificationReport>,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        match &self.report {
            Some(r) if !r.passed => EXIT_VERIFY,
            _ => EXIT_OK,
        }
    }
}

pub fn run(config: &RunConfig, options: &RunOptions) -> Result<RunOutcome, RunError> {
    config.validate()?;
    let spec = config.problem_spec();
    let solver_err = |source| RunError::Solver {
        problem: config.problem.name().to_owned(),
        alpha: config.alpha,
        terms: config.terms,
        source,
    };

    let mut solution = solve(&spec).map_err(solver_err)?;
    if let Some(k) = options.corrupt_coefficient {
        solution = corrupt(&solution, k).map_err(solver_err)?;
    }
    let table = sample(
        &solution,
        Grid::from(config.x_grid),
        Grid::from(config.t_grid),
        Execution::default(),
    )
    .map_err(solver_err)?;

    let mut artifacts = Vec::new();
    let mut formats = config.outputs.clone();
    formats.sort();
    formats.dedup();
    for format in formats {
        let path = PathBuf::from(format!("{}.{}", config.output_path, format.extension()));
        match format {
            OutputFormat::Csv => emit::emit_csv(&table, &path)?,
            OutputFormat::Json => emit::emit_json(&table, config, &path)?,
            OutputFormat::Svg => emit::emit_svg(&table, &svg_title(config), &path)?,
        }
        artifacts.push(path);
    }

    let report = if config.verify {
        let residual = residual_spectrum(&spec, &solution).map_err(solver_err)?;
        let (oracle_error, oracle) = match max_oracle_error(&spec, &table) {
            Ok(e) => (Some(e), "closed form sampled on the output grid".to_owned()),
            Err(SolverError::NoOracle(why)) => (None, format!("none: {why}")),
            Err(e) => return Err(solver_err(e)),
        };
        let oracle_threshold = oracle_error.map(|_| match spec.family() {
            Family::Lse => LINEAR_ORACLE_THRESHOLD,
            _ => NONLINEAR_ORACLE_THRESHOLD,
        });
        let max_residual_scaled = residual.max_scaled();
        let passed = max_residual_scaled <= RESIDUAL_THRESHOLD
            && match (oracle_error, oracle_threshold) {
                (Some(e), Some(tol)) => e <= tol,
                _ => true,
            };
        let report = VerificationReport {
            problem: config.problem.name().to_owned(),
            alpha: config.alpha,
            terms: config.terms,
            max_residual: residual.max_abs(),
            max_residual_scaled,
            residual_threshold: RESIDUAL_THRESHOLD,
            max_oracle_error: oracle_error,
            oracle_threshold,
            oracle,
            passed,
        };
        let path = PathBuf::from(format!("{}.verify.json", config.output_path));
        let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
        text.push('\n');
        std::fs::write(&path, text).map_err(|source| EmitError::Io {
            path: path.display().to_string(),
            source,
        })?;
        artifacts.push(path);
        Some(report)
    } else {
        None
    };

    Ok(RunOutcome { artifacts, report })
}

fn corrupt(solution: &Solution, k: usize) -> Result<Solution, SolverError> {
    let bump = |s: &frdt_core::Spectrum| {
        let field = s.coeff(k)?.scale(frdt_core::Complex64::from(CORRUPTION_FACTOR));
        s.with_coeff(k, field)
    };
    Ok(Solution {
        u: bump(&solution.u)?,
        v: solution.v.as_ref().map(bump).transpose()?,
    })
}

fn svg_title(config: &RunConfig) -> String {
    format!(
        "{}  alpha = {}  K = {}",
        config.problem.name(),
        config.alpha,
        config.terms
    )
}
