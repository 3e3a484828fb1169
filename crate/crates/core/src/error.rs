use thiserror::Error;

/// Errors raised while building, parsing or transforming problem objects.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("empty vertex identifier")]
    EmptyVertexId,
    #[error("self-loop on `{0}` is not allowed")]
    SelfLoop(String),
    #[error("graphs do not share the same vertex list")]
    VertexMismatch,
    #[error("label {label} out of range 1..={k}")]
    LabelOutOfRange { label: u32, k: usize },
    #[error("k must be at least 1 and match the number of pairs (k = {k}, pairs = {pairs})")]
    BadK { k: usize, pairs: usize },
    #[error("ordering has {order} vertices but {labels} labels")]
    LengthMismatch { order: usize, labels: usize },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("size limit exceeded: {0}")]
    TooLarge(String),
    #[error("internal discrepancy: {0}")]
    Internal(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}
