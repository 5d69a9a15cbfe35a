use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("matrix is not unitary (max |UU† - I| = {deviation:.3e})")]
    NotUnitary { deviation: f64 },
    #[error("matrix is not symmetric (max |M - Mᵀ| = {deviation:.3e})")]
    NotSymmetric { deviation: f64 },
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),
    #[error("invalid segment: {0}")]
    InvalidSegment(String),
    #[error("invalid entangler parameters: {0}")]
    InvalidParams(String),
    #[error("integration failure: {0}")]
    IntegrationFailure(String),
    #[error("impossible outcome: {0}")]
    ImpossibleOutcome(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the command-line front end: 2 for contract
    /// violations, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NumericalFailure(_) | Error::IntegrationFailure(_) => 3,
            _ => 2,
        }
    }
}
