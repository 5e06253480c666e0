//! Error type shared by all modules.

use num_complex::Complex64;

/// Failure modes of the numerical routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Invalid configuration such as a bad node count or material.
    #[error("configuration error: {0}")]
    Config(String),
    /// A closed-form expression hit a vanishing denominator.
    #[error("singular configuration: {0}")]
    Singular(String),
    /// Evaluation point too close to the boundary or radius too small.
    #[error("accuracy error: {0}")]
    Accuracy(String),
    /// Lattice sum did not reach its tail tolerance.
    #[error("truncation error: tail estimate {tail:e} above tolerance {tol:e}")]
    Truncation { tail: f64, tol: f64 },
    /// Iterative solver failed; carries the best iterate.
    #[error("solver did not converge after {iterations} iterations (best iterate {best}, residual {residual:e})")]
    Solver {
        iterations: usize,
        best: Complex64,
        residual: f64,
    },
    /// Dense linear solve failed.
    #[error("linear algebra failure: {0}")]
    Linalg(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
