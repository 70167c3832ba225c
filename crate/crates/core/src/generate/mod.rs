//! Ground-truth benchmark graphs.

mod lfr;
mod planted;

use serde::{Deserialize, Serialize};

pub use lfr::{generate_lfr_like, BenchmarkSpec};
pub use planted::{generate_planted_partition, PlantedSpec};

use crate::graph::Graph;
use crate::partition::Partition;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "generator", rename_all = "snake_case")]
pub enum GeneratorParams {
    Planted(PlantedSpec),
    LfrLike(BenchmarkSpec),
}

#[derive(Debug, Clone)]
pub struct BenchmarkInstance {
    pub graph: Graph,
    pub truth: Partition,
    pub params: GeneratorParams,
}

impl BenchmarkInstance {
    /// Mean over nodes of the fraction of incident edges leaving the node's
    /// ground-truth community (nodes of degree zero are skipped).
    pub fn realized_mixing(&self) -> f64 {
        let g = &self.graph;
        let mut total = 0.0;
        let mut counted = 0usize;
        for i in 0..g.node_count() {
            let d = g.degree(i);
            if d == 0 {
                continue;
            }
            let ext = g
                .neighbors(i)
                .iter()
                .filter(|a| self.truth.label(a.node) != self.truth.label(i))
                .count();
            total += ext as f64 / d as f64;
            counted += 1;
        }
        total / counted.max(1) as f64
    }

    pub fn mean_degree(&self) -> f64 {
        2.0 * self.graph.edge_count() as f64 / self.graph.node_count() as f64
    }
}
