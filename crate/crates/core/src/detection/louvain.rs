//! Two-phase Louvain modularity optimization.
//!
//! Phase one moves single nodes between neighboring communities while any
//! move strictly increases modularity; phase two condenses each community
//! into one node. The phases alternate until a level produces no move.

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;
use crate::rng::{derive_seed, seeded};

use super::{condense, insertion_gain, modularity};

/// Minimum modularity gain for a move.
pub const MIN_GAIN: f64 = 1e-12;
/// Gains closer than this are treated as equal and resolved by community id.
const TIE_TOLERANCE: f64 = 1e-13;
const SHUFFLE_TAG: u64 = 0x4C4F_5556;

#[derive(Debug, Clone)]
pub struct LouvainResult {
    pub partition: Partition,
    pub modularity: f64,
    /// Node-level partition after each level that moved at least one node.
    pub levels: Vec<Partition>,
    /// Modularity after each entry of `levels`.
    pub level_modularity: Vec<f64>,
    /// Local-moving sweeps run over all levels.
    pub sweeps: usize,
    pub moves: usize,
}

struct LevelOutcome {
    partition: Partition,
    sweeps: usize,
    moves: usize,
}

pub fn louvain(g: &Graph, seed: u64) -> Result<LouvainResult> {
    let n = g.node_count();
    let mut rng = seeded(derive_seed(seed, SHUFFLE_TAG));
    let mut node_map = Partition::singletons(n);
    let mut current_q = modularity(g, &node_map)?;
    let mut current = g.clone();
    let mut levels = Vec::new();
    let mut level_modularity = Vec::new();
    let mut sweeps = 0;
    let mut moves = 0;

    loop {
        let level = local_moving(&current, &mut rng)?;
        sweeps += level.sweeps;
        moves += level.moves;
        if level.moves == 0 {
            break;
        }
        let flat = node_map.flatten(&level.partition);
        let q = modularity(g, &flat)?;
        debug_assert!(q >= current_q - 1e-9, "level decreased modularity: {current_q} -> {q}");
        current = condense(&current, &level.partition)?.0;
        node_map = flat;
        current_q = q;
        levels.push(node_map.clone());
        level_modularity.push(q);
    }

    Ok(LouvainResult {
        partition: node_map,
        modularity: current_q,
        levels,
        level_modularity,
        sweeps,
        moves,
    })
}

fn local_moving<R: rand::Rng>(g: &Graph, rng: &mut R) -> Result<LevelOutcome> {
    let n = g.node_count();
    let degree = g.weighted_degrees();
    let two_m = crate::graph::compensated_sum(degree.iter().copied());
    if !(two_m > 0.0) {
        return Err(Error::ZeroWeight);
    }

    let mut community: Vec<usize> = (0..n).collect();
    let mut sigma_tot = degree.clone();
    let mut link = vec![0.0f64; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();
    let mut sweeps = 0;
    let mut moves = 0;

    loop {
        sweeps += 1;
        order.shuffle(rng);
        let mut moved = false;

        for &i in &order {
            let own = community[i];
            let d_i = degree[i];

            touched.push(own);
            for a in g.neighbors(i) {
                let c = community[a.node];
                if link[c] == 0.0 {
                    touched.push(c);
                }
                link[c] += g.weight(a.edge);
            }
            touched.sort_unstable();
            touched.dedup();

            // remove i, then pick the best community to insert it into
            sigma_tot[own] -= d_i;
            let stay = insertion_gain(link[own], sigma_tot[own], d_i, two_m);
            let mut best = own;
            let mut best_gain = 0.0;
            for &c in &touched {
                if c == own {
                    continue;
                }
                let gain = insertion_gain(link[c], sigma_tot[c], d_i, two_m) - stay;
                // ascending scan: near-ties go to the smaller id
                if gain > best_gain + TIE_TOLERANCE {
                    best = c;
                    best_gain = gain;
                }
            }
            if best != own && best_gain <= MIN_GAIN {
                best = own;
            }
            sigma_tot[best] += d_i;
            if best != own {
                community[i] = best;
                moved = true;
                moves += 1;
            }

            for &c in &touched {
                link[c] = 0.0;
            }
            touched.clear();
        }

        if !moved {
            break;
        }
    }

    Ok(LevelOutcome {
        partition: Partition::from_labels(community),
        sweeps,
        moves,
    })
}
