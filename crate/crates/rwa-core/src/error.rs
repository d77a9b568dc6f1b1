use thiserror::Error;

/// Errors surfaced by the fallible operations in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Arguments outside an operation's domain.
    #[error("domain: {0}")]
    Domain(String),
    /// An iterative method hit its cap before reaching tolerance.
    #[error("no convergence: {0}")]
    NoConvergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;
