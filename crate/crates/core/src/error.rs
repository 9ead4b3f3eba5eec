use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("operands belong to different fields ({0} vs {1})")]
    FieldMismatch(String, String),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("zero raised to a negative power")]
    ZeroNegativePower,
    #[error("invalid modulus {modulus:#x} for degree {degree}: {reason}")]
    InvalidModulus {
        modulus: u32,
        degree: u32,
        reason: &'static str,
    },
    #[error("unsupported extension degree {0} (must be 1..=8)")]
    UnsupportedDegree(u32),
    #[error("value {value:#x} out of range for a field of size {size}")]
    ElementOutOfRange { value: u32, size: u32 },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("index {index} out of range for size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid construction: {0}")]
    InvalidSpec(String),
    #[error("row {0} has no nonzero entry")]
    AllZeroRow(usize),
    #[error("size guard violated: {0}")]
    SizeGuard(String),
    #[error("no stored XOR count for {0}")]
    MissingCatalogXor(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
