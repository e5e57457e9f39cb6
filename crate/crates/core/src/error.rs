use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {detail}")]
    DimensionMismatch { op: &'static str, detail: String },

    #[error("ragged block layout: {0}")]
    Ragged(String),

    #[error("matrix is not Hermitian")]
    NotHermitian,

    #[error("`{0}` is not supported in exact mode")]
    UnsupportedMode(&'static str),

    #[error("{0} is not positive semi-definite")]
    NotPsd(&'static str),

    #[error("shape precondition violated: {0}")]
    ShapePrecondition(String),

    #[error("grid search would enumerate {0} combinations (limit 1000000)")]
    GridTooLarge(u128),

    #[error("invalid scalar literal `{0}`")]
    ParseScalar(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("identity check failed: {0}")]
    IdentityViolation(String),
}

pub(crate) fn mismatch(op: &'static str, detail: impl Into<String>) -> Error {
    Error::DimensionMismatch {
        op,
        detail: detail.into(),
    }
}
