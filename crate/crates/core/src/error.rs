use thiserror::Error;

/// Errors raised by the simulator and its verification suites.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A norm exceeded the blow-up threshold or became non-finite.
    #[error("numerical blow-up detected at t = {t}")]
    BlowUp { t: f64 },

    /// Picard sweeps stopped contracting.
    #[error("horizon too large: Picard increments grew for {sweeps} consecutive sweeps (last increment {increment:e})")]
    HorizonTooLarge { sweeps: usize, increment: f64 },

    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("checkpoint format: {0}")]
    Checkpoint(String),

    #[error("property violation: {0}")]
    PropertyViolation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }
}
