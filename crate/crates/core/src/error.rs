use thiserror::Error;

use crate::graph::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(ValidationReport),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("erdos-renyi graph on {n} vertices with p = {p} stayed disconnected after {attempts} attempts")]
    RetryExhausted { n: usize, p: f64, attempts: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: edge ({i}, {j}) listed with conflicting weights {first} and {second}")]
    ConflictingEdge {
        line: usize,
        i: usize,
        j: usize,
        first: f64,
        second: f64,
    },

    #[error("symmetric eigendecomposition of a {n}x{n} matrix did not converge")]
    NoConvergence { n: usize },

    #[error("basis source {found} is not compatible with {variant} (requires {required})")]
    IncompatibleBasis {
        variant: &'static str,
        required: &'static str,
        found: String,
    },

    #[error("matrix is not unitary: residual {residual:e}")]
    NotUnitary { residual: f64 },

    #[error("power series did not converge within {max_terms} terms")]
    SeriesDiverged { max_terms: usize },

    #[error("joint operator of size {size}x{size} exceeds the dense limit of {limit}")]
    TooLarge { size: usize, limit: usize },

    #[error("{0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
