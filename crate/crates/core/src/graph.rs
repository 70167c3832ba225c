//! Undirected simple graph with non-negative edge weights.
//!
//! Storage is an edge list plus a CSR adjacency index. Every undirected edge
//! `e = (u, v)` has two arcs: `2e` runs `u -> v` and `2e + 1` runs `v -> u`.
//! Condensed graphs produced by community detection may also carry per-node
//! self-loop weights; graphs built from input never do.

use std::collections::HashMap;
use std::collections::HashSet;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::walk::EdgeWeights;

pub type NodeId = usize;
pub type EdgeId = usize;

/// A directed view of an undirected edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArcId(pub usize);

impl ArcId {
    pub fn new(edge: EdgeId, forward: bool) -> Self {
        ArcId(2 * edge + usize::from(!forward))
    }

    pub fn edge(self) -> EdgeId {
        self.0 / 2
    }

    pub fn is_forward(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn reverse(self) -> Self {
        ArcId(self.0 ^ 1)
    }
}

/// One entry of a node's adjacency list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Adjacent {
    pub node: NodeId,
    pub edge: EdgeId,
}

#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    endpoints: Vec<(NodeId, NodeId)>,
    weights: Vec<f64>,
    self_loops: Vec<f64>,
    offsets: Vec<usize>,
    adjacency: Vec<Adjacent>,
    names: Option<Vec<String>>,
}

impl Graph {
    /// Builds an unweighted graph (every weight 1).
    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId)]) -> Result<Self> {
        Self::from_weighted_edges(n, edges.iter().map(|&(u, v)| (u, v, 1.0)))
    }

    /// Builds a simple graph, rejecting self-loops, duplicates and negative weights.
    pub fn from_weighted_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId, f64)>,
    {
        let mut seen = HashSet::new();
        let mut endpoints = Vec::new();
        let mut weights = Vec::new();
        for (i, (u, v, w)) in edges.into_iter().enumerate() {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::NodeOutOfRange { node: x, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop {
                    line: i + 1,
                    node: u.to_string(),
                });
            }
            if !(w >= 0.0) || !w.is_finite() {
                return Err(Error::NegativeWeight { edge: i, weight: w });
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::DuplicateEdge {
                    line: i + 1,
                    u: u.to_string(),
                    v: v.to_string(),
                });
            }
            endpoints.push((u, v));
            weights.push(w);
        }
        Ok(Self::from_parts(n, endpoints, weights, vec![0.0; n]))
    }

    /// Trusted constructor: callers guarantee simplicity and valid ranges.
    pub(crate) fn from_parts(
        n: usize,
        endpoints: Vec<(NodeId, NodeId)>,
        weights: Vec<f64>,
        self_loops: Vec<f64>,
    ) -> Self {
        debug_assert_eq!(endpoints.len(), weights.len());
        debug_assert_eq!(self_loops.len(), n);
        let mut counts = vec![0usize; n + 1];
        for &(u, v) in &endpoints {
            counts[u + 1] += 1;
            counts[v + 1] += 1;
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let offsets = counts.clone();
        let mut cursor = counts;
        let mut adjacency = vec![Adjacent { node: 0, edge: 0 }; 2 * endpoints.len()];
        for (e, &(u, v)) in endpoints.iter().enumerate() {
            adjacency[cursor[u]] = Adjacent { node: v, edge: e };
            cursor[u] += 1;
            adjacency[cursor[v]] = Adjacent { node: u, edge: e };
            cursor[v] += 1;
        }
        Graph {
            n,
            endpoints,
            weights,
            self_loops,
            offsets,
            adjacency,
            names: None,
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.endpoints.len()
    }

    pub fn arc_count(&self) -> usize {
        2 * self.endpoints.len()
    }

    pub fn endpoints(&self, e: EdgeId) -> (NodeId, NodeId) {
        self.endpoints[e]
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = (NodeId, NodeId, f64)> + '_ {
        self.endpoints
            .iter()
            .zip(&self.weights)
            .map(|(&(u, v), &w)| (u, v, w))
    }

    pub fn weight(&self, e: EdgeId) -> f64 {
        self.weights[e]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn self_loop_weight(&self, i: NodeId) -> f64 {
        self.self_loops[i]
    }

    pub fn self_loops(&self) -> &[f64] {
        &self.self_loops
    }

    pub fn has_self_loops(&self) -> bool {
        self.self_loops.iter().any(|&w| w != 0.0)
    }

    pub fn neighbors(&self, i: NodeId) -> &[Adjacent] {
        &self.adjacency[self.offsets[i]..self.offsets[i + 1]]
    }

    /// Number of incident edges (topological degree, self-loops excluded).
    pub fn degree(&self, i: NodeId) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    pub fn tail(&self, a: ArcId) -> NodeId {
        let (u, v) = self.endpoints[a.edge()];
        if a.is_forward() {
            u
        } else {
            v
        }
    }

    pub fn head(&self, a: ArcId) -> NodeId {
        self.tail(a.reverse())
    }

    /// Arc from `from` along edge `e`.
    pub fn arc_from(&self, e: EdgeId, from: NodeId) -> ArcId {
        ArcId::new(e, self.endpoints[e].0 == from)
    }

    pub fn find_edge(&self, u: NodeId, v: NodeId) -> Option<EdgeId> {
        let (a, b) = if self.degree(u) <= self.degree(v) {
            (u, v)
        } else {
            (v, u)
        };
        self.neighbors(a).iter().find(|x| x.node == b).map(|x| x.edge)
    }

    /// `d_i = sum_j w_ij + 2 * self_loop(i)`.
    pub fn weighted_degree(&self, i: NodeId) -> Result<f64> {
        if i >= self.n {
            return Err(Error::NodeOutOfRange { node: i, n: self.n });
        }
        Ok(self.weighted_degree_unchecked(i))
    }

    fn weighted_degree_unchecked(&self, i: NodeId) -> f64 {
        compensated_sum(
            self.neighbors(i)
                .iter()
                .map(|a| self.weights[a.edge])
                .chain(std::iter::once(2.0 * self.self_loops[i])),
        )
    }

    pub fn weighted_degrees(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.weighted_degree_unchecked(i)).collect()
    }

    /// Sum of edge weights plus self-loop weights (the weighted `m`).
    pub fn total_weight(&self) -> f64 {
        compensated_sum(self.weights.iter().chain(&self.self_loops).copied())
    }

    pub fn node_name(&self, i: NodeId) -> String {
        match &self.names {
            Some(names) => names[i].clone(),
            None => i.to_string(),
        }
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.n {
            return Err(Error::Mismatch {
                what: "node names",
                expected: self.n,
                got: names.len(),
            });
        }
        self.names = Some(names);
        Ok(self)
    }

    /// Token -> node index, using the sidecar names when present.
    pub fn name_index(&self) -> HashMap<String, NodeId> {
        (0..self.n).map(|i| (self.node_name(i), i)).collect()
    }

    /// Same topology with new per-edge weights.
    pub fn apply_weights(&self, weights: &EdgeWeights) -> Result<Graph> {
        if weights.len() != self.edge_count() {
            return Err(Error::Mismatch {
                what: "edge weights",
                expected: self.edge_count(),
                got: weights.len(),
            });
        }
        if let Some((edge, &weight)) = weights
            .as_slice()
            .iter()
            .enumerate()
            .find(|(_, w)| !(**w >= 0.0) || !w.is_finite())
        {
            return Err(Error::NegativeWeight { edge, weight });
        }
        let mut g = self.clone();
        g.weights = weights.as_slice().to_vec();
        Ok(g)
    }

    /// Multiplies every edge and self-loop weight by `c`.
    pub fn scale_weights(&self, c: f64) -> Result<Graph> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "scale factor must be positive, got {c}"
            )));
        }
        let mut g = self.clone();
        g.weights.iter_mut().for_each(|w| *w *= c);
        g.self_loops.iter_mut().for_each(|w| *w *= c);
        Ok(g)
    }

    /// Same topology, every weight set to 1.
    pub fn unweighted(&self) -> Graph {
        let mut g = self.clone();
        g.weights.iter_mut().for_each(|w| *w = 1.0);
        g
    }

    /// Connected component id per node (ids in order of first node).
    pub fn components(&self) -> (usize, Vec<usize>) {
        let mut comp = vec![usize::MAX; self.n];
        let mut count = 0;
        let mut stack = Vec::new();
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = count;
            stack.push(s);
            while let Some(x) = stack.pop() {
                for a in self.neighbors(x) {
                    if comp[a.node] == usize::MAX {
                        comp[a.node] = count;
                        stack.push(a.node);
                    }
                }
            }
            count += 1;
        }
        (count, comp)
    }

    /// Parses a whitespace-separated edge list. Lines are `u v` or `u v w`;
    /// `#` starts a comment. Node tokens map to dense ids in order of first
    /// appearance. When `weighted` is false any third column is ignored and
    /// every weight is 1; when true a missing third column also means 1.
    pub fn load_edge_list<R: BufRead>(reader: R, weighted: bool) -> Result<Graph> {
        let mut index: HashMap<String, NodeId> = HashMap::new();
        let mut names: Vec<String> = Vec::new();
        let mut seen = HashSet::new();
        let mut endpoints = Vec::new();
        let mut weights = Vec::new();

        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = lineno + 1;
            let content = line.split('#').next().unwrap_or("");
            let fields: Vec<&str> = content.split_whitespace().collect();
            if fields.is_empty() {
                continue;
            }
            if fields.len() < 2 || fields.len() > 3 {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("expected `u v` or `u v w`, got {} fields", fields.len()),
                });
            }
            let w = match (weighted, fields.get(2)) {
                (true, Some(tok)) => tok.parse::<f64>().map_err(|_| Error::Parse {
                    line: lineno,
                    msg: format!("invalid weight `{tok}`"),
                })?,
                _ => 1.0,
            };
            if !(w >= 0.0) || !w.is_finite() {
                return Err(Error::NegativeWeight {
                    edge: endpoints.len(),
                    weight: w,
                });
            }
            if fields[0] == fields[1] {
                return Err(Error::SelfLoop {
                    line: lineno,
                    node: fields[0].to_string(),
                });
            }
            let mut intern = |tok: &str| -> NodeId {
                if let Some(&i) = index.get(tok) {
                    return i;
                }
                let i = names.len();
                names.push(tok.to_string());
                index.insert(tok.to_string(), i);
                i
            };
            let u = intern(fields[0]);
            let v = intern(fields[1]);
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::DuplicateEdge {
                    line: lineno,
                    u: fields[0].to_string(),
                    v: fields[1].to_string(),
                });
            }
            endpoints.push((u, v));
            weights.push(w);
        }

        let n = names.len();
        let mut g = Graph::from_parts(n, endpoints, weights, vec![0.0; n]);
        g.names = Some(names);
        Ok(g)
    }

    /// Writes `u v w` lines using node names. Weights use the shortest
    /// representation that parses back to the same `f64`.
    pub fn save_edge_list<W: Write>(&self, mut out: W, with_weights: bool) -> Result<()> {
        for (u, v, w) in self.edges() {
            if with_weights {
                writeln!(out, "{} {} {}", self.node_name(u), self.node_name(v), w)?;
            } else {
                writeln!(out, "{} {}", self.node_name(u), self.node_name(v))?;
            }
        }
        Ok(())
    }
}

/// Neumaier-compensated summation.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for x in values {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}
