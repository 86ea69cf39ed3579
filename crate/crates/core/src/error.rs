use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    /// Indices are 0-based; messages show them 1-based.
    #[error("non-finite entry at ({}, {})", .i + 1, .j + 1)]
    NonFinite { i: usize, j: usize },

    #[error("matrix is not symmetric: entries ({a}, {b}) and ({b}, {a}) differ by {diff:e}", a = .i + 1, b = .j + 1)]
    Asymmetric { i: usize, j: usize, diff: f64 },

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps (off-diagonal mass {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("enumeration of {count} items exceeds the cap of {cap}")]
    EnumerationCap { count: u128, cap: u128 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
