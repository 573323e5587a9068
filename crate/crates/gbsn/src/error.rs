use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("singular matrix")]
    SingularMatrix,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("unknown symbol: {0}")]
    UnknownSymbol(String),

    #[error("invalid family parameter: {0}")]
    InvalidFamilyParameter(String),

    #[error("not a subgroup: {0}")]
    NotASubgroup(String),

    #[error("malformed path word: {0}")]
    MalformedPathWord(String),

    #[error("no hyperbolic element: the underlying graph is a tree")]
    NoHyperbolicElement,

    #[error("empty input")]
    EmptyInput,

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
