use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum CoreError {
    /// A parameter is outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A requested array would exceed the configured memory budget.
    #[error("capacity error: {needed} cells exceed budget of {budget}")]
    Capacity { needed: u128, budget: u128 },

    /// A floating-point exactness check failed (e.g. integer rounding residual).
    #[error("precision error: {0}")]
    Precision(String),

    /// A structural configuration requirement was violated (grid divisibility etc.).
    #[error("configuration error: {0}")]
    Config(String),

    /// An internal algebraic identity failed to hold; indicates a bug.
    #[error("internal consistency error: {0}")]
    Inconsistency(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;

impl CoreError {
    pub fn domain(msg: impl Into<String>) -> Self {
        CoreError::Domain(msg.into())
    }
    pub fn config(msg: impl Into<String>) -> Self {
        CoreError::Config(msg.into())
    }
    pub fn precision(msg: impl Into<String>) -> Self {
        CoreError::Precision(msg.into())
    }
    pub fn inconsistency(msg: impl Into<String>) -> Self {
        CoreError::Inconsistency(msg.into())
    }
}
