use thiserror::Error;

/// Errors reported by the core library.
#[derive(Debug, Error)]
pub enum HartreeError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("band limit violated: {0}")]
    BandViolation(String),
    #[error("state not resolved on the grid: {0}")]
    Unresolved(String),
    #[error("excluded time window: {0}")]
    ExcludedWindow(String),
    #[error("non-finite values encountered: {0}")]
    NonFinite(String),
    #[error("scattering did not converge: {0}")]
    NotConverged(String),
    #[error("profiles not comparable: {0}")]
    Incomparable(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("format: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, HartreeError>;
