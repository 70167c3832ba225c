use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("line {line}: self-loop on node `{node}`")]
    SelfLoop { line: usize, node: String },

    #[error("line {line}: duplicate edge `{u}`-`{v}`")]
    DuplicateEdge { line: usize, u: String, v: String },

    #[error("negative weight {weight} on edge {edge}")]
    NegativeWeight { edge: usize, weight: f64 },

    #[error("node {node} out of range (graph has {n} nodes)")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("graph has no edges")]
    EmptyGraph,

    #[error("total edge weight is zero")]
    ZeroWeight,

    #[error("size mismatch: expected {expected}, got {got} ({what})")]
    Mismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("discard cap exceeded: {discards} dead-end walks for {successes} retraced walks (graph is acyclic or nearly so)")]
    DiscardCapExceeded { discards: u64, successes: u64 },

    #[error("graph too large for exhaustive oracle: {n} nodes (limit {limit})")]
    TooLarge { n: usize, limit: usize },

    #[error("graph has no cycle")]
    Acyclic,

    #[error("benchmark generation failed: {0}")]
    Generation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
