//! Crate-wide error type.

use thiserror::Error;

/// Errors reported by library operations.
///
/// Domain failures (degenerate configurations, capacity limits, chart
/// exits) are reported here; soft "flags" such as a singular density value
/// are encoded in return types instead.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("division by the zero polynomial")]
    ZeroDivisor,

    #[error("repeated interpolation node at index {0} and {1} (value {2})")]
    RepeatedNode(usize, usize, String),

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("chart degeneration: {0}")]
    Chart(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
