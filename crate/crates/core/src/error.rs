use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown identifier `{name}` at {pos}")]
    UnknownIdentifier { name: String, pos: usize },
    #[error("unbound parameter `{0}`")]
    UnboundParameter(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("family {family}: constraint violated: {msg}")]
    Constraint { family: String, msg: String },
    #[error("family {family}: denominator `{denominator}` vanishes")]
    Denominator { family: String, denominator: String },
    #[error("sigma is undefined at a base point: {0}")]
    Degenerate(String),
    #[error("curve sampling failed after {0} draws")]
    SamplingFailed(usize),
    #[error("central element `{0}` does not act by a scalar")]
    NonScalarCentral(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("schema error: {0}")]
    Schema(String),
}
