use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    #[error("value {value} outside model domain (lower bound {lower_bound})")]
    Domain { value: f64, lower_bound: f64 },

    /// The optimizer never converged; `best` holds the best parameters seen.
    #[error("fit failed: {reason}")]
    FitFailure { reason: String, best: Vec<f64> },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// Short machine-readable tag for the error class.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid-argument",
            Error::Precondition(_) => "precondition",
            Error::InsufficientData(_) => "insufficient-data",
            Error::DegenerateSample(_) => "degenerate-sample",
            Error::Domain { .. } => "domain",
            Error::FitFailure { .. } => "fit-failure",
            Error::Parse(_) => "parse",
            Error::Csv(_) => "csv",
            Error::Io(_) => "io",
        }
    }
}
