use thiserror::Error;

/// Errors raised by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter lies outside the admissible set.
    #[error("domain error: {0}")]
    Domain(String),
    /// A terminating hypergeometric sum hit a zero denominator.
    #[error("pole: {0}")]
    Pole(String),
    /// An iterative method failed to reach its tolerance.
    #[error("no convergence: {0}")]
    Convergence(String),
    /// A triangular matrix has a zero pivot.
    #[error("singular matrix: {0}")]
    Singular(String),
    /// A matrix does not have the structure a routine requires.
    #[error("structure error: {0}")]
    Structure(String),
    /// A bound was requested outside the range where it is proven.
    #[error("range error: {0}")]
    Range(String),
}

pub type Result<T> = std::result::Result<T, Error>;
