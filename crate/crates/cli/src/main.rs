use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use frdt_cli::config::{ConfigError, ConfigLayer, GridConfig, OutputFormat};
use frdt_cli::run::{run, RunOptions, EXIT_OK, EXIT_USAGE};
use frdt_core::Problem;

/// Fractional reduced differential transform solver for time-fractional
/// Schrödinger equations.
///
/// Exit status: 0 success, 1 verification failure, 2 usage error,
/// 3 runtime or solver error.
#[derive(Debug, Parser)]
#[command(name = "frdt", version, allow_negative_numbers = true)]
struct Cli {
    /// lse-cosh, lse-exp, nlse-plane, nlse-trap or coupled.
    #[arg(long)]
    problem: Option<Problem>,
    /// Fractional order in (0, 1].
    #[arg(long)]
    alpha: Option<f64>,
    /// Strength of the cubic term.
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    n: Option<f64>,
    #[arg(long)]
    m: Option<f64>,
    /// Truncation order K.
    #[arg(long)]
    terms: Option<usize>,
    /// Spatial grid: MIN MAX COUNT.
    #[arg(long, num_args = 3, value_names = ["MIN", "MAX", "COUNT"])]
    x: Option<Vec<String>>,
    /// Time grid: MIN MAX COUNT.
    #[arg(long, num_args = 3, value_names = ["MIN", "MAX", "COUNT"])]
    t: Option<Vec<String>>,
    /// Output formats (csv, json, svg), comma separated or repeated.
    #[arg(long = "out", value_delimiter = ',')]
    out: Vec<OutputFormat>,
    /// Check the spectrum residual and the closed form, if any.
    #[arg(long)]
    verify: bool,
    /// Artifact path without extension.
    #[arg(long)]
    output_path: Option<String>,
    /// JSON run configuration; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Scale coefficient K of the spectrum by 1.1 before sampling.
    #[arg(long, hide = true, value_name = "K")]
    corrupt_coefficient: Option<usize>,
}

fn grid(name: &str, raw: &[String]) -> Result<GridConfig, ConfigError> {
    let field = format!("{name}_grid");
    let real = |s: &str| {
        s.parse::<f64>()
            .map_err(|e| ConfigError::new(&field, format!("'{s}': {e}")))
    };
    let count = raw[2]
        .parse::<usize>()
        .map_err(|e| ConfigError::new(&field, format!("count '{}': {e}", raw[2])))?;
    Ok(GridConfig {
        min: real(&raw[0])?,
        max: real(&raw[1])?,
        count,
    })
}

impl Cli {
    fn layer(&self) -> Result<ConfigLayer, ConfigError> {
        Ok(ConfigLayer {
            problem: self.problem,
            alpha: self.alpha,
            sigma: self.sigma,
            a: self.a,
            b: self.b,
            n: self.n,
            m: self.m,
            terms: self.terms,
            x_grid: self.x.as_deref().map(|r| grid("x", r)).transpose()?,
            t_grid: self.t.as_deref().map(|r| grid("t", r)).transpose()?,
            outputs: (!self.out.is_empty()).then(|| self.out.clone()),
            verify: self.verify.then_some(true),
            output_path: self.output_path.clone(),
        })
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK } as u8);
        }
    };

    let config = cli
        .config
        .as_deref()
        .map(ConfigLayer::from_file)
        .transpose()
        .and_then(|file| Ok(file.unwrap_or_default().overlay(cli.layer()?)))
        .and_then(ConfigLayer::resolve);
    let config = match config {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: invalid configuration: {e}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };

    let options = RunOptions {
        corrupt_coefficient: cli.corrupt_coefficient,
    };
    match run(&config, &options) {
        Ok(outcome) => {
            for path in &outcome.artifacts {
                eprintln!("wrote {}", path.display());
            }
            if let Some(report) = &outcome.report {
                println!(
                    "{}",
                    serde_json::to_string_pretty(report).expect("report serializes")
                );
                if !report.passed {
                    eprintln!("verification FAILED");
                }
            }
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
