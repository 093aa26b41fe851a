use thiserror::Error;

/// Errors raised by the generators, simulations and numeric routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the range an operation accepts.
    #[error("{operation}: argument {value} outside supported range {range}")]
    Domain {
        operation: &'static str,
        value: String,
        range: &'static str,
    },

    /// Exact integer arithmetic would not fit the result type.
    #[error("{operation}: integer overflow at n = {n}")]
    Overflow { operation: &'static str, n: u64 },

    /// A numeric routine produced a non-finite value or failed to bracket a root.
    #[error("{operation}: {detail}")]
    Numeric {
        operation: &'static str,
        detail: String,
    },

    /// Two partition points landed on the same floating point position.
    #[error("partition step {step}: positions not strictly increasing at index {index} ({left} >= {right})")]
    PositionCollision {
        step: u32,
        index: usize,
        left: f64,
        right: f64,
    },

    /// No period up to the configured maximum was found.
    #[error("no period <= {max_period} detected at r = {r} (tolerance {tolerance:e})")]
    PeriodNotFound {
        r: f64,
        max_period: usize,
        tolerance: f64,
    },

    /// Forward visibility of a window point still depends on values past the end of the series.
    #[error("forward visibility of point {index} not settled within a series of length {len}")]
    NotStabilized { index: usize, len: usize },

    /// Two routes that must agree produced different values.
    #[error("{identity}: routes disagree ({detail})")]
    Mismatch {
        identity: &'static str,
        detail: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(operation: &'static str, value: impl ToString, range: &'static str) -> Error {
    Error::Domain {
        operation,
        value: value.to_string(),
        range,
    }
}
