use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unsupported dimension {0}, only 2 and 3 are supported")]
    UnsupportedDimension(usize),

    #[error("wavevectors do not form a basis (|det K| = {det:e})")]
    DegenerateBasis { det: f64 },

    #[error("wavevectors have unequal lengths: {norms:?}")]
    UnequalWavenumber { norms: Vec<f64> },

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("zero vector where a nonzero vector is required")]
    ZeroVector,

    #[error("unknown Bravais class `{name}`; valid classes: {valid}")]
    UnknownClass { name: String, valid: String },

    #[error("parameter `{name}` = {value} out of range: {range}")]
    OutOfRange {
        name: String,
        value: f64,
        range: &'static str,
    },

    #[error("grid resolution {0} too small (minimum 8)")]
    InvalidResolution(usize),

    #[error("relaxation diverged for particle {particle} at iteration {iteration}")]
    Divergence { particle: usize, iteration: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
