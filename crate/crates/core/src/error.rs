use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("not divisible: {0}")]
    NotDivisible(String),
    #[error("Φ-adic truncation overflow: {0}")]
    TruncationOverflow(String),
    #[error("unsupported site representation kind `{0}`")]
    UnsupportedKind(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("operator is not graded: {0}")]
    NotGraded(String),
    #[error("clock wrap-around breaks the half-power commutation: {0}")]
    WrapInconsistency(String),
    #[error("parameters outside the identity's regime: {0}")]
    InvalidRegime(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("unknown identity `{0}`")]
    UnknownId(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("cache error: {0}")]
    Cache(String),
}

impl Error {
    /// Short stable tag used in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InternalInconsistency(_) => "InternalInconsistency",
            Error::NotDivisible(_) => "NotDivisible",
            Error::TruncationOverflow(_) => "TruncationOverflow",
            Error::UnsupportedKind(_) => "UnsupportedKind",
            Error::InvalidParams(_) => "InvalidParams",
            Error::NotGraded(_) => "NotGraded",
            Error::WrapInconsistency(_) => "WrapInconsistency",
            Error::InvalidRegime(_) => "InvalidRegime",
            Error::RingMismatch(_) => "RingMismatch",
            Error::UnknownId(_) => "UnknownId",
            Error::Config(_) => "ConfigError",
            Error::Cache(_) => "CacheError",
        }
    }

    /// Resource-type failures get their own process exit code.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::TruncationOverflow(_) | Error::Cache(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
