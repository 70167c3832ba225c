use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;
use crate::rng::seeded;

use super::{BenchmarkInstance, GeneratorParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlantedSpec {
    pub n: usize,
    pub q: usize,
    pub p_in: f64,
    pub p_out: f64,
    pub seed: u64,
}

/// `q` equal blocks; each intra-block pair is an edge with probability
/// `p_in`, each inter-block pair with probability `p_out`.
pub fn generate_planted_partition(n: usize, q: usize, p_in: f64, p_out: f64, seed: u64) -> Result<BenchmarkInstance> {
    if q == 0 || n == 0 || n % q != 0 {
        return Err(Error::InvalidParameter(format!("n = {n} must be a positive multiple of q = {q}")));
    }
    if !(0.0..=1.0).contains(&p_in) || !(0.0..=1.0).contains(&p_out) {
        return Err(Error::InvalidParameter("probabilities must lie in [0, 1]".into()));
    }
    if p_out > p_in {
        return Err(Error::InvalidParameter(format!("need p_out <= p_in, got {p_out} > {p_in}")));
    }
    let block = n / q;
    let mut rng = seeded(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let p = if u / block == v / block { p_in } else { p_out };
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Ok(BenchmarkInstance {
        graph: Graph::from_edges(n, &edges)?,
        truth: Partition::from_labels((0..n).map(|i| i / block)),
        params: GeneratorParams::Planted(PlantedSpec { n, q, p_in, p_out, seed }),
    })
}
