use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ring needs at least 3 nodes, got {0}")]
    TooFewNodes(usize),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("non-finite entry in {field}[{index}]")]
    NonFinite { field: &'static str, index: usize },

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("coupling b[{index}] is zero; no imaginary eigenvalue is possible")]
    ZeroCoupling { index: usize },

    #[error("{mu} is not an eigenvalue (closure product deviates from 1 by {deviation:e})")]
    NotAnEigenvalue {
        mu: num_complex::Complex64,
        deviation: f64,
    },

    #[error("root finder did not converge after {iterations} iterations (worst residual {worst_residual:e})")]
    NoConvergence {
        iterations: usize,
        worst_residual: f64,
    },

    #[error("operation requires n = 3, got n = {0}")]
    NotThreeNodes(usize),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("ambiguous eigenvalue tracking: {0}")]
    AmbiguousTracking(String),

    #[error("perturbation budget {epsilon:e} insufficient; nearest forbidden coupling product {nearest:e}")]
    BudgetInsufficient { epsilon: f64, nearest: f64 },

    #[error("trajectory diverged at t = {t} (|x| = {norm:e})")]
    Diverged { t: f64, norm: f64 },

    #[error("no limit cycle: {0}")]
    NoCycle(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
