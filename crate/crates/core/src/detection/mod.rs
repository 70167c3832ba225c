//! Weighted modularity and the two maximization heuristics built on it.
//!
//! Modularity of a partition with communities `c` is
//! `M = sum_c [ sigma_in(c) / 2m - (sigma_tot(c) / 2m)^2 ]`, where `2m` is the
//! sum of weighted degrees, `sigma_tot(c)` the degree sum of the members and
//! `sigma_in(c)` twice the internal edge weight (self-loops included). This
//! is the community-aggregated form of the pairwise sum over `(i, j)`.

mod cnm;
mod louvain;

use std::collections::BTreeMap;

pub use cnm::{cnm, CnmResult, Merge};
pub use louvain::{louvain, LouvainResult};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;

/// Per-community aggregates of a partition.
#[derive(Debug, Clone, PartialEq)]
pub struct CommunityState {
    pub partition: Partition,
    /// Twice the internal edge weight per community (self-loops at `2w`).
    pub sigma_in: Vec<f64>,
    /// Degree sum per community.
    pub sigma_tot: Vec<f64>,
    /// Sum of all weighted degrees.
    pub two_m: f64,
}

impl CommunityState {
    pub fn new(g: &Graph, p: &Partition) -> Result<Self> {
        if p.len() != g.node_count() {
            return Err(Error::Mismatch {
                what: "partition length",
                expected: g.node_count(),
                got: p.len(),
            });
        }
        let degrees = g.weighted_degrees();
        let two_m = crate::graph::compensated_sum(degrees.iter().copied());
        if !(two_m > 0.0) {
            return Err(Error::ZeroWeight);
        }
        let mut sigma_in = vec![0.0; p.q()];
        let mut sigma_tot = vec![0.0; p.q()];
        for (i, d) in degrees.iter().enumerate() {
            let c = p.community(i);
            sigma_tot[c] += d;
            sigma_in[c] += 2.0 * g.self_loop_weight(i);
        }
        for (u, v, w) in g.edges() {
            let c = p.community(u);
            if c == p.community(v) {
                sigma_in[c] += 2.0 * w;
            }
        }
        Ok(CommunityState {
            partition: p.clone(),
            sigma_in,
            sigma_tot,
            two_m,
        })
    }

    pub fn modularity(&self) -> f64 {
        self.sigma_in
            .iter()
            .zip(&self.sigma_tot)
            .map(|(&s_in, &s_tot)| s_in / self.two_m - (s_tot / self.two_m).powi(2))
            .sum()
    }
}

/// Weighted modularity of `p` on `g`.
pub fn modularity(g: &Graph, p: &Partition) -> Result<f64> {
    Ok(CommunityState::new(g, p)?.modularity())
}

/// Modularity change from moving a singleton node `i` into community `g`,
/// written literally over the community aggregates. `d_i_in` is the weight
/// between `i` and `g` counted from both endpoints (twice the edge sum), in
/// line with `sigma_in` counting internal weight twice.
pub fn singleton_move_gain(sigma_in: f64, sigma_tot: f64, d_i: f64, d_i_in: f64, two_m: f64) -> f64 {
    let after = (sigma_in + d_i_in) / two_m - ((sigma_tot + d_i) / two_m).powi(2);
    let before = sigma_in / two_m - (sigma_tot / two_m).powi(2) - (d_i / two_m).powi(2);
    after - before
}

/// Modularity change from inserting an isolated node (degree `d_i`, weight
/// `k_i_g` to the community) into a community with degree sum `sigma_tot`.
pub(crate) fn insertion_gain(k_i_g: f64, sigma_tot: f64, d_i: f64, two_m: f64) -> f64 {
    2.0 * (k_i_g - sigma_tot * d_i / two_m) / two_m
}

/// Collapses every community to one node. Inter-community edges are summed;
/// internal edges and member self-loops become the community's self-loop.
/// Returns the condensed graph and the node -> community-node map.
pub fn condense(g: &Graph, p: &Partition) -> Result<(Graph, Vec<usize>)> {
    if p.len() != g.node_count() {
        return Err(Error::Mismatch {
            what: "partition length",
            expected: g.node_count(),
            got: p.len(),
        });
    }
    let q = p.q();
    let map: Vec<usize> = (0..g.node_count()).map(|i| p.community(i)).collect();
    let mut self_loops = vec![0.0; q];
    for (i, &c) in map.iter().enumerate() {
        self_loops[c] += g.self_loop_weight(i);
    }
    let mut between: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for (u, v, w) in g.edges() {
        let (cu, cv) = (map[u], map[v]);
        if cu == cv {
            self_loops[cu] += w;
        } else {
            *between.entry((cu.min(cv), cu.max(cv))).or_insert(0.0) += w;
        }
    }
    let (endpoints, weights) = between.into_iter().map(|(k, w)| (k, w)).unzip();
    Ok((Graph::from_parts(q, endpoints, weights, self_loops), map))
}
