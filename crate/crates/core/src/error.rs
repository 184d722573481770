use thiserror::Error;

/// Error taxonomy shared by all modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parameter error: {0}")]
    Param(String),
    #[error("numerical error: {0}")]
    Numerical(String),
    #[error("convergence failure: {0}")]
    Convergence(String),
    #[error("contraction violated: {0}")]
    Contraction(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("config error at line {line}: {msg}")]
    Config { line: usize, msg: String },
    #[error("numerical blowup: {0}")]
    Blowup(String),
    #[error("step rejected: {0}")]
    StepRejected(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn config(line: usize, msg: impl Into<String>) -> Self {
        Error::Config {
            line,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
