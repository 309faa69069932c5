use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AtlasError {
    /// Malformed input data (parse failures, bad shapes, invalid moduli).
    #[error("invalid input: {0}")]
    Input(String),
    #[error("domain error: {0}")]
    Domain(String),
    /// A mathematical precondition of an operation does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("shape mismatch: {0}")]
    Mismatch(String),
    /// The witness search failed although the class test says it should not.
    #[error("solver failure: {0}")]
    Solver(String),
}

pub type Result<T> = std::result::Result<T, AtlasError>;
