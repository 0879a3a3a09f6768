use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericError {
    #[error("non-finite entry at index {0}")]
    NonFinite(usize),
    #[error("shape mismatch: expected {expected} entries, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("invalid sparse layout: {0}")]
    SparseLayout(String),
    #[error("power iteration did not converge within {0} iterations")]
    NoConvergence(usize),
    #[error("matrix is singular to working precision")]
    Singular,
    #[error("zero matrix has no dominant direction")]
    ZeroMatrix,
}

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("invalid problem data: {0}")]
    Invalid(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("data set is empty")]
    Empty,
    #[error("rejection sampling exceeded {0} attempts")]
    RejectionLimit(usize),
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(
        "internal inconsistency at iteration {iteration}: nominal step violates descent \
         ({lhs:e} > {rhs:e})"
    )]
    DescentViolated { iteration: usize, lhs: f64, rhs: f64 },
    #[error("backtracking cap of {cap} exceeded at iteration {iteration}; F may not be injective")]
    BacktrackCap { iteration: usize, cap: usize },
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error("argument {0} outside the open interval (0, 1)")]
    Domain(f64),
}
