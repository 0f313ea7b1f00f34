use thiserror::Error;

/// Errors raised by the statistics, bound and selection routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sample must contain at least one value")]
    EmptySample,

    #[error("value {value} at position {index} lies outside [0,1]")]
    OutOfUnitInterval { index: usize, value: f64 },

    #[error("variance undefined for n<2")]
    VarianceUndefined,

    #[error("loss matrix entry ({row}, {column}) = {value} lies outside [0,1]")]
    MatrixEntryOutOfRange { row: usize, column: usize, value: f64 },

    #[error("loss matrix is malformed: {0}")]
    MalformedMatrix(String),

    #[error("hypothesis index {index} out of range for {count} hypotheses")]
    IndexOutOfRange { index: usize, count: usize },

    #[error("{count} subsets exceed the enumeration cap of {cap}; choose a smaller d or n")]
    TooManySubsets { count: u128, cap: u128 },

    /// A numeric argument violates the precondition of the routine it feeds.
    #[error("{0}")]
    Parameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}

pub(crate) fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta < 1.0 {
        Ok(())
    } else {
        param(format!("delta must lie strictly inside (0,1), got {delta}"))
    }
}

pub(crate) fn check_min_n(n: usize, min: usize, what: &str) -> Result<()> {
    if n >= min {
        Ok(())
    } else {
        param(format!("{what} requires n >= {min}, got n = {n}"))
    }
}
