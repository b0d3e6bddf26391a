use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid arguments: {0}")]
    InvalidArguments(String),
    #[error("unsupported weight {0}")]
    UnsupportedWeight(u32),
    #[error("invalid letter {letter} for genus {genus}")]
    InvalidLetter { letter: i32, genus: u32 },
    #[error("shape error: {0}")]
    Shape(String),
    #[error("tensor has a slot monomial of degree > 1")]
    NotPure,
    #[error("invalid leaf: {0}")]
    InvalidLeaf(String),
    #[error("leaf not constructible: {0}")]
    LeafNotConstructible(String),
    #[error("unsupported product: {0}")]
    UnsupportedProduct(String),
    #[error("not integrable: {0}")]
    NotIntegrable(String),
    #[error("internal consistency error: {0}")]
    InternalConsistency(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("entry {0} is not in the index set")]
    NotInIndex(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("corrupt fixture: {0}")]
    CorruptFixture(String),
    #[error("io error: {0}")]
    Io(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precision error: {0}")]
    Precision(String),
    #[error("divergent integral: {0}")]
    DivergentIntegral(String),
    #[error("depth limit: {0}")]
    DepthLimit(String),
    #[error("matrix is not in the group: {0}")]
    NotInGroup(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
