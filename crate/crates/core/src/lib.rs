//! Semi-analytic solver for time-fractional (coupled, nonlinear) Schrödinger
//! equations via the fractional reduced differential transform.
//!
//! A solution `u(x, t)` is represented by its spectrum `U_0, …, U_K`, with
//! `u = Σ U_k(x) t^{kα}`. Each `U_k` is an exact exponential sum
//! ([`ExpField`]), so the transformed recurrences are carried out without
//! any spatial discretization.
//!
//! ```
//! use frdt_core::{solve, FractionalSeries, Problem, ProblemSpec};
//!
//! let spec = ProblemSpec { alpha: 1.0, terms: 20, ..ProblemSpec::with_defaults(Problem::NlseTrap) };
//! let series = FractionalSeries::new(solve(&spec).unwrap().u);
//! let u = series.evaluate(1.0, 0.2).unwrap();
//! let exact = frdt_core::Complex64::from_polar(1.0, -0.3) * 1.0_f64.sin();
//! assert!((u - exact).norm() < 1e-12);
//! ```

pub mod error;
pub mod expfield;
pub mod par;
pub mod problem;
pub mod series;
pub mod special;
pub mod spectrum;
mod sum;

pub use error::{Error, Result};
pub use expfield::{ExpField, ExpTerm, InitialCondition, TermRecord};
pub use num_complex::Complex64;
pub use par::Execution;
pub use problem::{
    solve, solve_coupled, solve_lse, solve_nlse, solve_nlse_trap, Family, Problem, ProblemSpec,
    Solution,
};
pub use series::{
    evaluate, max_oracle_error, oracle, residual_spectrum, sample, FractionalSeries, Grid,
    OracleValue, Residual, Row, Sample, SolutionTable,
};
pub use special::{
    caputo_power, delta, gamma, mittag_leffler, rl_integral_power, PowerTerm,
};
pub use spectrum::{conv2, conv3, deriv_shift, monomial_spectrum, Spectrum};
