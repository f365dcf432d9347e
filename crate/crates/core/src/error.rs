use crate::graph::VertexLabel;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex `{0}` not found")]
    MissingVertex(VertexLabel),

    #[error("namespace collision on `{0}`: both graphs use this namespace")]
    NamespaceCollision(VertexLabel),

    #[error("cannot merge a vertex with itself: `{0}`")]
    MergeSelf(VertexLabel),

    #[error("self-loop rejected on `{0}`")]
    SelfLoop(VertexLabel),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("input graph is not a tree")]
    NotATree,

    #[error("size limit exceeded: {what} = {got}, maximum {max}")]
    SizeLimit {
        what: &'static str,
        got: usize,
        max: usize,
    },

    #[error("{0}")]
    InvalidArgument(String),

    #[error("origin set is empty")]
    EmptyOrigins,

    #[error("round {round}: sender `{from}` is not informed")]
    UninformedSender {
        round: usize,
        from: VertexLabel,
        to: VertexLabel,
    },

    #[error("round {round}: receiver `{to}` is already informed")]
    ReceiverInformed {
        round: usize,
        from: VertexLabel,
        to: VertexLabel,
    },

    #[error("round {round}: call `{from}` -> `{to}` uses a non-edge")]
    NonEdgeCall {
        round: usize,
        from: VertexLabel,
        to: VertexLabel,
    },

    #[error("round {round}: `{vertex}` sends more than one call")]
    DuplicateSender { round: usize, vertex: VertexLabel },

    #[error("round {round}: `{vertex}` receives more than one call")]
    DuplicateReceiver { round: usize, vertex: VertexLabel },

    #[error("broadcast incomplete: {} vertices uninformed, first `{}`", .uninformed.len(), .uninformed[0])]
    IncompleteBroadcast { uninformed: Vec<VertexLabel> },

    #[error("malformed broadcast tree: {0}")]
    MalformedTree(String),

    #[error("budget exhausted, proven lower bound {proven_lower}")]
    BudgetExhausted { proven_lower: usize },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid witness: {0}")]
    InvalidWitness(String),

    #[error("parse error: {0}")]
    Parse(String),
}
