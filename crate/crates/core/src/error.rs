use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// An invalid combination of options or parameters.
    #[error("configuration error: {0}")]
    Config(String),
    /// A numerical procedure did not reach its target.
    #[error("numerical failure: {what} ({diagnostics})")]
    Numerical { what: String, diagnostics: String },
    /// A power series was evaluated outside its disc of convergence.
    #[error("series diverges: |y| = {y} is not below the radius {radius}")]
    Divergence { y: f64, radius: f64 },
    /// A displacement map had a fixed point on a sampled boundary point.
    #[error("invalid map: {0}")]
    InvalidMap(String),
    /// Malformed body file or record input.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
