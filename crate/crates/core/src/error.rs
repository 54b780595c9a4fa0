use thiserror::Error;

/// Errors produced by chain construction, diagonalization and analytics.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A caller-supplied value violates a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A basis state or index fell outside the sector it was looked up in.
    #[error("not found: {0}")]
    NotFound(String),

    /// The request exceeds a configured size cap.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    /// A numerical routine failed or produced results outside its validated range.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// The computation completed but without the inputs it needed for full
    /// fidelity; the message carries diagnostics.
    #[error("degraded result: {0}")]
    Degraded(String),
}

pub type Result<T> = std::result::Result<T, Error>;
