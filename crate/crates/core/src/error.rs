use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} coordinates, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unresolvable cohomology: {0}")]
    UnresolvableCohomology(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("no cover exists: {0}")]
    NonDivisible(String),

    #[error("K^2 = {0} is not an integer; the building data are inconsistent")]
    NonIntegralK2(String),

    #[error("invalid group data: {0}")]
    Group(String),

    #[error("invalid building data: {0}")]
    BuildingData(String),

    #[error("invalid generating pair: {0}")]
    GeneratingPair(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("expression error: {0}")]
    Expression(String),

    #[error("{0}")]
    Io(String),
}

impl Error {
    /// Process exit code associated with the error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::UnresolvableCohomology(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
