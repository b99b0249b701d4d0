use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("grid mismatch: {left} nodes vs {right} nodes")]
    GridMismatch { left: usize, right: usize },

    #[error("invalid grid size {0}: must be even and at least 16")]
    InvalidGrid(usize),

    #[error("aliasing: {0}")]
    Aliasing(String),

    #[error("numerical precision lost: {what} (residual {residual:e})")]
    Precision { what: String, residual: f64 },

    #[error(
        "power iteration did not converge (best estimate {estimate}, relative change {residual:e})"
    )]
    NonConvergence {
        estimate: f64,
        residual: f64,
        best_vector: Vec<Complex64>,
    },

    #[error("degenerate anchor: |Θ(λ)| = {0} is too close to 1")]
    DegenerateAnchor(f64),

    #[error("degenerate inner function: Θ is constant")]
    ConstantTheta,

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("parse error: {0}")]
    Parse(String),
}
