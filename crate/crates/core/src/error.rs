use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("invalid cover: {0}")]
    InvalidCover(String),

    #[error("unsupported range dimension: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("region containment violated: {0}")]
    Containment(String),

    /// A map induced by an inclusion was not single-valued. This is always an
    /// implementation bug, never a property of the input.
    #[error("inclusion map not well defined: {0}")]
    WellDefinedness(String),

    #[error("cover intervals violate the consecutive-overlap ordering: {0}")]
    Ordering(String),

    #[error("graph too large for isomorphism search ({0} nodes, limit 200)")]
    SizeLimit(usize),

    #[error("interleaving verification failed: {0}")]
    Verification(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
