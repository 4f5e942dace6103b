use thiserror::Error;

/// Failure to parse symbolic partition notation, with a byte offset into the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at position {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(position: usize, message: impl Into<String>) -> Self {
        Self {
            position,
            message: message.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("{0} requires a nonempty partition")]
    EmptyPartition(&'static str),
    #[error("removable cell index {index} out of range 1..={count}")]
    CellIndexOutOfRange { index: usize, count: usize },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("cannot factor the zero polynomial")]
    ZeroPolynomial,
    #[error("series orders differ ({0} vs {1})")]
    OrderMismatch(usize, usize),
    #[error("series constant term {0} is not a unit")]
    NonUnitConstant(String),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("dimension {0} is outside the supported range 1..={max}", max = crate::oracle::MAX_DIM)]
    DimensionTooLarge(usize),
    #[error("entry ({row},{col}) on or below the diagonal is nonzero")]
    NotStrictlyUpper { row: usize, col: usize },
    #[error("enumeration needs {required} matrices, budget is {budget}")]
    BudgetExceeded { required: String, budget: u64 },
    #[error("invariant `{invariant}` failed for {lambda}: {detail}")]
    Inconsistent {
        lambda: String,
        invariant: &'static str,
        detail: String,
    },
    #[error("cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
