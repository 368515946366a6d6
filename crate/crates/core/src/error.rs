use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("vertex {vertex} is out of range for a board with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("vertex {0} is already marked")]
    Occupied(usize),

    #[error("the game is already over")]
    GameOver,

    #[error("policy `{policy}` returned illegal move {vertex}: {reason}")]
    IllegalPolicyMove {
        policy: String,
        vertex: usize,
        reason: String,
    },

    #[error("board has {n} vertices, above the solver cap of {cap}")]
    BoardTooLarge { n: usize, cap: usize },

    #[error("unknown micro-strategy `{0}`")]
    UnknownStrategy(String),

    #[error("invalid experiment spec: {0}")]
    Spec(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
