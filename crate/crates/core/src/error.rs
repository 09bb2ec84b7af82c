use thiserror::Error;

use crate::graph::Vertex;

/// Errors shared by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("vertex {0} is out of range")]
    VertexOutOfRange(Vertex),

    #[error("vertex {0} has already been deleted")]
    DeadVertex(Vertex),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("maximum degree {found} exceeds the allowed bound {bound}")]
    DegreeTooLarge { found: usize, bound: usize },

    /// One or more components are isomorphic to `K_{k+1}`; the payload lists
    /// the vertex sets of the offending components.
    #[error("component isomorphic to K_{clique_size}: {components:?}")]
    ForbiddenClique {
        clique_size: usize,
        components: Vec<Vec<Vertex>>,
    },

    #[error("not a partition of the vertex set: {0}")]
    NotAPartition(String),

    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("vertex order is not {bound}-degenerate at position {position}")]
    NotDegenerateOrder { bound: usize, position: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("improper colouring: {0}")]
    ImproperColouring(String),

    #[error("colouring is frozen")]
    Frozen,

    #[error("no vertex carries the top colour")]
    EmptyTopClass,

    #[error("graph is not connected")]
    NotConnected,

    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    #[error("path of length {length} exceeds the bound {bound}")]
    PathTooLong { length: usize, bound: usize },

    #[error("budget exceeded: {0}")]
    Budget(String),

    /// A branch the underlying proofs rule out was reached.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn internal(msg: impl Into<String>) -> Error {
    Error::Internal(msg.into())
}
