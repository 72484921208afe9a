use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Unsupported group, malformed parameters, or invalid norm ranges.
    #[error("configuration error: {0}")]
    Configuration(String),

    /// An operation was called outside its domain (shape mismatch, grid too coarse, ...).
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The dual slice is too small for the requested difference order.
    #[error("insufficient truncation margin: cutoff {available} is too small, at least {required} is required")]
    InsufficientMargin { required: f64, available: f64 },

    /// Wigner matrices are only validated up to a fixed spin.
    #[error("spin {spin} is outside the validated range (spin <= {max})")]
    OutOfValidatedRange { spin: f64, max: f64 },

    /// A coefficient or symbol file does not follow the schema.
    #[error("malformed data: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
