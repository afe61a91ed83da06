use thiserror::Error;

/// Errors produced by spectrum construction, statistics and averaging.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid configuration (bad aspect ratio, bad plan, unknown experiment...).
    #[error("config: {0}")]
    Config(String),

    /// Query outside the trustworthy part of a spectrum.
    #[error("range: {0}")]
    Range(String),

    /// Invalid argument to an operation (inverted window, zero width...).
    #[error("argument: {0}")]
    Argument(String),

    /// Level count would exceed the configured memory budget.
    #[error("resource: {0}")]
    Resource(String),

    /// A periodic-orbit sum did not meet its tail tolerance at the configured cutoff.
    #[error("convergence: {0}")]
    Convergence(String),

    /// Statistic kind not defined for the requested averaging method.
    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short machine-parseable category, used in CLI exit messages.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Config(_) => "config",
            Error::Range(_) => "range",
            Error::Argument(_) => "argument",
            Error::Resource(_) => "resource",
            Error::Convergence(_) => "convergence",
            Error::Unsupported(_) => "unsupported",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
