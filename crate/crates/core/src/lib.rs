//! Renewal non-backtracking random walks (RNBRW) for edge weighting, plus
//! weighted modularity maximization (Louvain, CNM), benchmark generators,
//! NMI scoring and exact small-graph oracles.
//!
//! The usual pipeline is:
//!
//! 1. load or generate a [`Graph`],
//! 2. estimate per-edge retracing probabilities with [`estimate_retracing`],
//! 3. turn them into weights with [`rnbrw_weights`] and [`Graph::apply_weights`],
//! 4. run [`louvain`] or [`cnm`] on the weighted graph and score with [`nmi`].

pub mod detection;
pub mod error;
pub mod eval;
pub mod generate;
pub mod graph;
pub mod partition;
pub mod rng;
pub mod walk;

pub use detection::{cnm, condense, louvain, modularity, CnmResult, LouvainResult};
pub use error::{Error, Result};
pub use eval::{exact_max_modularity, exact_retracing, nmi, ExactRetracing};
pub use generate::{generate_lfr_like, generate_planted_partition, BenchmarkInstance, BenchmarkSpec, GeneratorParams, PlantedSpec};
pub use graph::{ArcId, EdgeId, Graph, NodeId};
pub use partition::Partition;
pub use walk::{
    estimate_retracing, required_walks, rnbrw_weights, single_walk, EdgeWeights, EstimateOptions,
    RetracingEstimate, Smoothing, WalkOutcome, WalkTrace,
};
