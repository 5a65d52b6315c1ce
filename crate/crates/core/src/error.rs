use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("Rényi order must be a finite number greater than 1, got {0}")]
    InvalidOrder(f64),
    #[error("weight must be finite and positive, got {0}")]
    InvalidWeight(f64),
    #[error("cannot delete weight {removed} from a set of total weight {total}")]
    Underflow { total: f64, removed: f64 },
    #[error("query range contains no points")]
    EmptyRange,
    #[error("Rényi order {0} was not indexed at build time")]
    OrderNotIndexed(f64),
    #[error("cannot form {k} buckets from {n} points")]
    TooManyBuckets { k: usize, n: usize },
    #[error("no leaf can be split further; reached {reached} of {requested} buckets")]
    Unsplittable { reached: usize, requested: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("this structure only accepts unit weights")]
    WeightedInputUnsupported,
    #[error("entropy kinds do not match")]
    KindMismatch,
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("not an index file")]
    NotAnIndex,
    #[error("unsupported index version {found} (this build reads up to {supported})")]
    UnsupportedVersion { found: u16, supported: u16 },
    #[error("index holds a {found} structure, expected {expected}")]
    WrongIndexKind { expected: String, found: String },
    #[error("corrupt index: {0}")]
    Corrupt(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
