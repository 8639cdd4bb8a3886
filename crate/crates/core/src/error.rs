use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("operation requires characteristic zero (got {0})")]
    PositiveCharacteristic(String),

    #[error("insufficient precision: {what} needs {needed}, have {available}")]
    InsufficientPrecision {
        what: String,
        needed: i64,
        available: i64,
    },

    #[error("insufficient depth: {what} needs depth {needed}, have {available}")]
    InsufficientDepth {
        what: String,
        needed: i64,
        available: i64,
    },

    #[error("zero series has no inverse")]
    ZeroSeries,

    #[error("division by zero")]
    DivisionByZero,

    #[error("element is not a unit: {0}")]
    NotUnit(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid valuation set: {0}")]
    InvalidValuations(String),

    #[error("linearly dependent frame: {0}")]
    DependentFrame(String),

    #[error("index mismatch: {0}")]
    IndexMismatch(String),

    #[error("point is off the big cell (stratum {stratum}); tau(0) = 0")]
    OffBigCell { stratum: String },

    #[error("hypothesis failed: {0}")]
    Hypothesis(String),

    #[error("repeated evaluation point: Vandermonde determinant vanishes")]
    VandermondeZero,

    #[error("membership certification failed: {0}")]
    Membership(String),

    #[error("invalid curve: {0}")]
    Curve(String),

    #[error("algebra closure fails: {0}")]
    ClosureFailed(String),

    #[error("bound too small: first missing generator has pole order {0}")]
    BoundTooSmall(i64),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn precision(what: impl Into<String>, needed: i64, available: i64) -> Self {
        Error::InsufficientPrecision {
            what: what.into(),
            needed,
            available,
        }
    }

    pub(crate) fn depth(what: impl Into<String>, needed: i64, available: i64) -> Self {
        Error::InsufficientDepth {
            what: what.into(),
            needed,
            available,
        }
    }

    /// True for errors caused by insufficient truncation (depth or precision).
    pub fn is_precision(&self) -> bool {
        matches!(
            self,
            Error::InsufficientPrecision { .. } | Error::InsufficientDepth { .. }
        )
    }
}
