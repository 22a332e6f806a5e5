use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("rank parameter n must be at least 1")]
    InvalidRank,
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("invalid Weyl group element: {0}")]
    InvalidWeylElement(String),
    #[error("invalid tuple: {0}")]
    InvalidTuple(String),
    #[error("invalid compressed row: {0}")]
    InvalidCompressedRow(String),
    #[error("resource guard exceeded: {0}")]
    GuardExceeded(String),
    #[error("minimal semistable element is not unique: {0} minimal candidates")]
    NonUniqueMinimum(usize),
    #[error("matrix is not skew-symmetric: {0}")]
    NotSkew(String),
    #[error("tuple {0} has mismatched dual pair")]
    DualPairMismatch(String),
    #[error("index sets must have odd cardinality (got {0} and {1})")]
    EvenCardinality(usize, usize),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("straightening failed: {0}")]
    Straightening(String),
    #[error("polynomial is not in standard form: {0}")]
    NonStandard(String),
    #[error("rewrite system error: {0}")]
    Rewrite(String),
    #[error("reduction system is not confluent")]
    NotConfluent,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
