use thiserror::Error;

/// Errors raised by the estimation library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("too close to the boundary: {0}")]
    NearBoundary(String),

    #[error("custom covariance has lags 0..={available}, lag {needed} requested")]
    InsufficientData { needed: usize, available: usize },

    #[error("covariance is not embeddable: eigenvalue {value:e} below -{tol:e} x max eigenvalue {max:e}")]
    NotEmbeddable { value: f64, max: f64, tol: f64 },

    #[error("series too short: need at least {needed} values, got {got}")]
    TooShort { needed: usize, got: usize },

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
