use alloc::string::String;

/// Errors reported by the core library.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("operands belong to different variable registries")]
    RegistryMismatch,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("sequence too short: need {required} terms, got {got}")]
    SequenceTooShort { required: usize, got: usize },
    #[error("missing weight {0}")]
    MissingWeight(String),
    #[error("truncation too small: need size {required}, have {available}")]
    Truncation { required: usize, available: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("zero pivot at index {index}; specialize the symbols to distinct rationals and retry")]
    ZeroPivot { index: usize },
    #[error(
        "inexact division at index {index}; coefficients leave the polynomial ring, specialize the symbols and retry"
    )]
    NotPolynomial { index: usize },
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("family `{family}` requires parameter `{param}`")]
    MissingParam { family: String, param: String },
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("no catalogued factorization for `{0}`")]
    NotCatalogued(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("size guard exceeded: {0}")]
    Guard(String),
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}

pub type Result<T> = core::result::Result<T, Error>;
