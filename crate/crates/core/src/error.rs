use thiserror::Error;

/// Errors raised by the analysis and solver layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("eigenvalue solver did not converge (k_hat = {k_hat}{})", tau.map(|t| format!(", tau = {t}")).unwrap_or_default())]
    EigenFailure { k_hat: f64, tau: Option<f64> },

    #[error("bisection not bracketed: {0}")]
    NotBracketed(String),

    #[error("non-finite value after step {step}")]
    NonFinite { step: usize },

    #[error("non-physical state in element {element}, point {point}: rho = {density}, p = {pressure}")]
    NonPhysical {
        element: usize,
        point: usize,
        density: f64,
        pressure: f64,
    },

    #[error("mesh tangled at node {node} after {attempts} jitter attempts")]
    TangledMesh { node: usize, attempts: usize },

    #[error("degenerate element {0}")]
    DegenerateElement(usize),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("spectral leakage {leakage:.3e} exceeds {threshold:.1e} for mode {mode}")]
    Leakage {
        mode: usize,
        leakage: f64,
        threshold: f64,
    },

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
