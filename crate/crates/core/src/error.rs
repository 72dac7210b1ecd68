use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph has no nodes")]
    EmptyGraph,

    #[error("node {node} out of range for graph with {node_count} nodes")]
    NodeOutOfRange { node: usize, node_count: usize },

    #[error(
        "node {node} is isolated (degree 0); the relative degree cost max(a,b)/min(a,b)-1 is \
         undefined at degree 0. Remove isolated nodes from the edge list"
    )]
    IsolatedNode { node: usize },

    #[error("degree must be at least 1, got {0}")]
    ZeroDegree(usize),

    #[error("DTW needs two nonempty sequences")]
    EmptySequence,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown node ids in label file: {0:?}")]
    UnknownNodes(Vec<String>),

    #[error("duplicate node row for {0}")]
    DuplicateNode(String),

    #[error("corrupt distance cache {path}: {reason}")]
    CorruptCache { path: PathBuf, reason: String },

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
