use thiserror::Error;

/// Errors raised by the numerical kernels and the experiment harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue:e}) at {} grid point(s){}", points.len(), preview(points))]
    NonPositiveDefinite {
        min_eigenvalue: f64,
        /// Offending grid points; empty for a single constant matrix.
        points: Vec<usize>,
    },

    #[error("matrix is not Hermitian: residual {residual:e}")]
    NotHermitian { residual: f64 },

    #[error("dense dimension {dim} exceeds the cap of {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("linear solve failed: {0}")]
    Solver(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

fn preview(points: &[usize]) -> String {
    if points.is_empty() {
        return String::new();
    }
    let shown: Vec<String> = points.iter().take(8).map(|p| p.to_string()).collect();
    let tail = if points.len() > 8 { ", ..." } else { "" };
    format!(" [{}{}]", shown.join(", "), tail)
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
