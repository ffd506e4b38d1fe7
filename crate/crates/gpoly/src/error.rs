use thiserror::Error;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors shared by every module.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("unknown edge id `{0}`")]
    UnknownEdge(String),

    #[error("unknown vertex id `{0}`")]
    UnknownVertex(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("graph must be connected for {0}")]
    Disconnected(&'static str),

    #[error("flag `{0}` carries no momentum")]
    MissingMomentum(String),

    #[error("resource limit exceeded: {0} edges > limit {1} (raise --max-edges)")]
    ResourceLimit(usize, usize),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// Process exit code for the CLI contract: 2 parse, 3 unsupported, 4 limit.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } => 2,
            Error::ResourceLimit(..) => 4,
            Error::Internal(..) => 70,
            _ => 3,
        }
    }
}
