//! Greedy agglomerative modularity maximization (Clauset-Newman-Moore).
//!
//! Starting from singletons, the adjacent pair with the largest modularity
//! gain `dQ = w_ab / m - 2 d_a d_b / (2m)^2` is merged, where `w_ab` is the
//! total weight between the two communities and `d` their degree sums. With
//! unit weights this is the classic `1/m - 2 d_i d_j / (2m)^2` start value.
//! Merging continues, through negative gains, until every connected
//! component is one community; the partition at the best point of that
//! history is returned.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;

use super::modularity;

/// Gains are compared on a fixed grid so that mathematically equal gains
/// compare equal regardless of rounding (e.g. after rescaling weights).
const GAIN_GRID: f64 = (1u64 << 32) as f64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Merge {
    /// Community that disappears.
    pub absorbed: usize,
    /// Community that survives (ids are original node ids).
    pub into: usize,
    pub delta_q: f64,
    /// Modularity after this merge.
    pub modularity: f64,
}

#[derive(Debug, Clone)]
pub struct CnmResult {
    pub partition: Partition,
    pub modularity: f64,
    /// Modularity of the starting singleton partition.
    pub initial_modularity: f64,
    pub merges: Vec<Merge>,
    /// Number of merges applied to reach `partition`.
    pub best_step: usize,
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    key: i64,
    a: usize,
    b: usize,
    version_a: u32,
    version_b: u32,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    // max-heap: larger gain first, then the lexicographically smaller pair
    fn cmp(&self, other: &Self) -> Ordering {
        self.key
            .cmp(&other.key)
            .then_with(|| (other.a, other.b).cmp(&(self.a, self.b)))
            .then_with(|| (other.version_a, other.version_b).cmp(&(self.version_a, self.version_b)))
    }
}

struct State {
    rows: Vec<HashMap<usize, f64>>,
    degree: Vec<f64>,
    version: Vec<u32>,
    alive: Vec<bool>,
    two_m: f64,
}

impl State {
    fn gain(&self, a: usize, b: usize) -> f64 {
        let w = self.rows[a][&b];
        2.0 * (w / self.two_m - self.degree[a] * self.degree[b] / (self.two_m * self.two_m))
    }

    fn candidate(&self, a: usize, b: usize) -> Candidate {
        let (a, b) = (a.min(b), a.max(b));
        Candidate {
            key: (self.gain(a, b) * GAIN_GRID).round() as i64,
            a,
            b,
            version_a: self.version[a],
            version_b: self.version[b],
        }
    }

    fn is_current(&self, c: &Candidate) -> bool {
        self.alive[c.a]
            && self.alive[c.b]
            && self.version[c.a] == c.version_a
            && self.version[c.b] == c.version_b
    }

    fn merge(&mut self, from: usize, into: usize) {
        let row = std::mem::take(&mut self.rows[from]);
        for (k, w) in row {
            if k == into {
                continue;
            }
            let rk = &mut self.rows[k];
            rk.remove(&from);
            *rk.entry(into).or_insert(0.0) += w;
            *self.rows[into].entry(k).or_insert(0.0) += w;
        }
        self.rows[into].remove(&from);
        self.degree[into] += self.degree[from];
        self.alive[from] = false;
        self.version[into] += 1;
    }
}

pub fn cnm(g: &Graph) -> Result<CnmResult> {
    let n = g.node_count();
    let degree = g.weighted_degrees();
    let two_m: f64 = crate::graph::compensated_sum(degree.iter().copied());
    if !(two_m > 0.0) {
        return Err(Error::ZeroWeight);
    }
    let mut rows: Vec<HashMap<usize, f64>> = vec![HashMap::new(); n];
    for (u, v, w) in g.edges() {
        *rows[u].entry(v).or_insert(0.0) += w;
        *rows[v].entry(u).or_insert(0.0) += w;
    }
    let mut state = State {
        rows,
        degree,
        version: vec![0; n],
        alive: vec![true; n],
        two_m,
    };

    let mut heap = BinaryHeap::new();
    for (u, v, _) in g.edges() {
        heap.push(state.candidate(u, v));
    }

    let initial = modularity(g, &Partition::singletons(n))?;
    let mut q = initial;
    let mut best_q = initial;
    let mut best_step = 0;
    let mut merges = Vec::new();

    while let Some(c) = heap.pop() {
        if !state.is_current(&c) {
            continue;
        }
        let dq = state.gain(c.a, c.b);
        // the surviving community keeps the larger row
        let (from, into) = if state.rows[c.b].len() > state.rows[c.a].len() {
            (c.a, c.b)
        } else {
            (c.b, c.a)
        };
        state.merge(from, into);
        q += dq;
        merges.push(Merge {
            absorbed: from,
            into,
            delta_q: dq,
            modularity: q,
        });
        if ((q - best_q) * GAIN_GRID).round() > 0.0 {
            best_q = q;
            best_step = merges.len();
        }
        let fresh: Vec<Candidate> = state.rows[into]
            .keys()
            .map(|&k| state.candidate(into, k))
            .collect();
        heap.extend(fresh);
    }

    let partition = replay(n, &merges[..best_step]);
    let modularity = modularity(g, &partition)?;
    Ok(CnmResult {
        partition,
        modularity,
        initial_modularity: initial,
        merges,
        best_step,
    })
}

fn replay(n: usize, merges: &[Merge]) -> Partition {
    let mut parent: Vec<usize> = (0..n).collect();
    for m in merges {
        parent[m.absorbed] = m.into;
    }
    fn root(parent: &[usize], mut x: usize) -> usize {
        while parent[x] != x {
            x = parent[x];
        }
        x
    }
    Partition::from_labels((0..n).map(|i| root(&parent, i)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_first_gain_is_one_ninth() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let r = cnm(&g).unwrap();
        assert!((r.merges[0].delta_q - 1.0 / 9.0).abs() < 1e-15);
        assert_eq!(r.merges.len(), 2);
        assert_eq!(r.partition, Partition::whole(3));
        assert!(r.modularity.abs() < 1e-15);
    }

    #[test]
    fn two_triangles_with_bridge() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)]).unwrap();
        let r = cnm(&g).unwrap();
        assert_eq!(r.partition, Partition::from_labels([0, 0, 0, 1, 1, 1]));
        assert!((r.modularity - 5.0 / 14.0).abs() < 1e-12);
        assert_eq!(r.merges.len(), 5);
    }

    #[test]
    fn single_edge_merges() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let r = cnm(&g).unwrap();
        assert_eq!(r.partition, Partition::whole(2));
        assert!(r.modularity.abs() < 1e-15);
    }

    #[test]
    fn merge_count_is_n_minus_components() {
        let g = Graph::from_edges(7, &[(0, 1), (1, 2), (3, 4), (5, 6), (6, 4)]).unwrap();
        let r = cnm(&g).unwrap();
        let (k, _) = g.components();
        assert_eq!(r.merges.len(), 7 - k);
    }

    #[test]
    fn history_modularity_is_consistent() {
        let g = Graph::from_edges(8, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (4, 5), (5, 6), (6, 7), (7, 4), (3, 4)])
            .unwrap();
        let r = cnm(&g).unwrap();
        for (step, m) in r.merges.iter().enumerate() {
            let p = replay(8, &r.merges[..=step]);
            assert!((modularity(&g, &p).unwrap() - m.modularity).abs() < 1e-12);
        }
        assert!(r.modularity >= r.initial_modularity);
    }

    #[test]
    fn zero_weight_is_an_error() {
        let g = Graph::from_weighted_edges(2, [(0, 1, 0.0)]).unwrap();
        assert!(matches!(cnm(&g), Err(Error::ZeroWeight)));
    }
}
