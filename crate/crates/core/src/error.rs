use thiserror::Error;

/// Errors raised by the family calculus, the enumerator and the classifier.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("parameter mismatch: {0} vs {1}")]
    ParamMismatch(String, String),
    #[error("invalid set: {0}")]
    InvalidSet(String),
    #[error("invalid shift ({i}, {j}) for n = {n}")]
    InvalidShift { i: u32, j: u32, n: u32 },
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("generator {0} is not contained in [2r]")]
    UnsupportedGenerator(String),
    #[error("invalid family spec: {0}")]
    InvalidSpec(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("empty hitting set: every family is trivially optimal")]
    EmptyX,
    #[error("family is not an MLCIF: {0}")]
    NotMlcif(String),
    #[error("rank-two classification violated: {0}")]
    ClassificationViolation(String),
    #[error("unknown theorem id `{0}`")]
    UnknownTheorem(String),
    #[error("hypothesis range violated for `{id}`: {reason}")]
    HypothesisRange { id: String, reason: String },
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::ResourceLimit(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
