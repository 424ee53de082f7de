use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid bounds in dimension {dim}: lower {lower} must be strictly below upper {upper}")]
    InvalidBounds { dim: usize, lower: f64, upper: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// The evaluation budget ran out; `evaluated` counts the evaluations the
    /// interrupted operation managed to perform before stopping.
    #[error("evaluation budget of {budget} exhausted after {evaluated} evaluations in the current operation")]
    BudgetExhausted { budget: usize, evaluated: usize },

    #[error("unknown function `{name}`; available: {}", available.join(", "))]
    UnknownFunction { name: String, available: Vec<&'static str> },

    #[error("rotation matrix is not orthogonal (max |M^T M - I| = {deviation:e})")]
    NonOrthogonalRotation { deviation: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("entropy needs at least 2 bins, got {0}")]
    TooFewBins(usize),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
