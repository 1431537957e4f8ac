use thiserror::Error;

/// Errors raised by the lattice, smooth and verification layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid deformation parameters: {0}")]
    InvalidParams(String),

    #[error("invalid basis index: {0}")]
    InvalidIndex(String),

    #[error("invalid truncation window: {0}")]
    InvalidWindow(String),

    #[error("window holds {size} states, above the configured cap of {cap}")]
    Capacity { size: usize, cap: usize },

    #[error("unknown operator `{0}`")]
    UnknownOperator(String),

    #[error("operator `{0}` is not diagonal in the lattice basis")]
    NotDiagonal(String),

    #[error("operator `{0}` has no lattice realization")]
    NotOnLattice(String),

    #[error("domain error in factor `{factor}`: {detail}")]
    Domain { factor: String, detail: String },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
