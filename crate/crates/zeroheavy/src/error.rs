use thiserror::Error;

/// Errors surfaced by the certified computation paths.
#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Expression text failed to parse.
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    /// An iteration or precision budget was exhausted before certification.
    #[error("budget exhausted: {0}")]
    Budget(String),

    /// Sign-change refinement could not separate critical points.
    #[error("non-isolation: {0}")]
    NonIsolation(String),

    /// No pair of points with certified distinct values was found.
    #[error("witness not found: {0}")]
    WitnessNotFound(String),

    /// The requested depth or precision does not cover the needed data.
    #[error("insufficient depth: {0}")]
    InsufficientDepth(String),

    /// Malformed serialized data (digit files, transcripts).
    #[error("format error: {0}")]
    Format(String),

    /// An internal invariant was violated; indicates a bug.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn budget(msg: impl Into<String>) -> Self {
        Error::Budget(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }
}
