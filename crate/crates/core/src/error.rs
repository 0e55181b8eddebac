use thiserror::Error;

/// Errors reported by graph construction, sampling, and certification routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid matching: {0}")]
    InvalidMatching(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("seed too short: need at least {needed} bits, got {got}")]
    SeedTooShort { needed: usize, got: usize },

    #[error("invalid seed: {0}")]
    InvalidSeed(String),

    #[error("index {index} out of range (size {size})")]
    IndexOutOfRange { index: u64, size: u64 },

    #[error("not enough signs: graph has {needed} edges, got {got}")]
    InsufficientBits { needed: usize, got: usize },

    #[error("degenerate non-backtracking eigenvalue {0}")]
    DegenerateEigenvalue(String),

    #[error("vector is not an eigenvector: residual {residual:e}")]
    NotEigenvector { residual: f64 },

    #[error("parameter regime violated: {0}")]
    Regime(String),

    #[error("numerically singular evaluation at z = {0}")]
    Singular(String),

    #[error("threshold decision indeterminate: estimate {estimate} within {band} of {threshold}")]
    Indeterminate {
        estimate: f64,
        threshold: f64,
        band: f64,
    },

    #[error("search budget exhausted after {attempts} attempts: {detail}")]
    BudgetExhausted { attempts: u64, detail: String },

    #[error("label out of range: {0}")]
    LabelOutOfRange(String),

    #[error("configuration mismatch: {0}")]
    ConfigMismatch(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
