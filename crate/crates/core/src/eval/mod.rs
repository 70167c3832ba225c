//! Partition scoring and exhaustive oracles for small graphs.

mod nmi;
mod oracle;

pub use nmi::{nmi, ConfusionTable};
pub use oracle::{
    exact_max_modularity, exact_retracing, read_golden, write_golden, ExactRetracing, MAX_MODULARITY_NODES,
    MAX_RETRACING_NODES,
};
