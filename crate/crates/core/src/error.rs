use thiserror::Error;

/// Errors produced by the solver kernel.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    #[error("Mittag-Leffler series did not converge after {terms} terms (last term magnitude {residual:e})")]
    Convergence { terms: usize, residual: f64 },

    #[error("{op} produced {terms} terms, above the cap of {cap}")]
    BlowUp {
        op: &'static str,
        terms: usize,
        cap: usize,
    },

    #[error("evaluation overflow at x = {x}")]
    Overflow { x: f64 },

    #[error("insufficient order: index {index} requested but spectrum has {len} coefficients")]
    InsufficientOrder { index: usize, len: usize },

    #[error("unsupported representation: {0}")]
    Unsupported(String),

    #[error("no closed-form oracle: {0}")]
    NoOracle(String),

    #[error("usage error: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        op,
        detail: detail.into(),
    }
}
