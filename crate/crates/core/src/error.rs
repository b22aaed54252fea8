use thiserror::Error;

/// Failures surfaced by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("interaction matrix not contractive (spectral radius estimate {0:.6})")]
    SpectralRadius(f64),
    #[error("unsupported request: {0}")]
    Unsupported(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn no_convergence(msg: impl Into<String>) -> Self {
        Error::NoConvergence(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
