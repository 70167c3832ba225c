//! Renewal non-backtracking random walks.
//!
//! One run starts on an arc chosen uniformly among all `2m` arcs and keeps
//! stepping to a uniformly chosen neighbor other than the one it just came
//! from. The run ends either when it steps onto a node it has already visited
//! (the arc taken is the *retraced* arc) or when it reaches a node with no
//! continuation, a dead end, which is discarded. The walker reads topology
//! only; edge weights of the input graph play no role.
//!
//! [`estimate_retracing`] repeats runs until a target number of them have
//! retraced, in parallel, with per-run randomness keyed by `(seed, run index)`
//! so the counts do not depend on the number of workers.

use std::io::Write;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{compensated_sum, ArcId, Graph, NodeId};
use crate::rng::StreamFamily;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WalkOutcome {
    Retraced(ArcId),
    DeadEnd,
}

/// Full record of one run, for diagnostics and tests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkTrace {
    pub arcs: Vec<ArcId>,
    /// Nodes in visiting order, starting with the tail of the first arc.
    pub visited: Vec<NodeId>,
    pub outcome: WalkOutcome,
}

/// Reusable per-thread walk state. Visited membership uses an epoch stamp
/// per node so nothing is cleared between runs.
#[derive(Debug, Clone)]
pub struct Walker {
    stamps: Vec<u64>,
    epoch: u64,
}

impl Walker {
    pub fn new(node_count: usize) -> Self {
        Walker {
            stamps: vec![0; node_count],
            epoch: 0,
        }
    }

    /// One run from a uniformly random start arc.
    pub fn run<R: Rng + ?Sized>(&mut self, g: &Graph, rng: &mut R) -> WalkOutcome {
        let start = ArcId(rng.random_range(0..g.arc_count()));
        self.run_from(g, start, rng, |_| {})
    }

    /// One run from `start`, reporting every arc taken (start included).
    pub fn run_from<R, F>(&mut self, g: &Graph, start: ArcId, rng: &mut R, mut on_arc: F) -> WalkOutcome
    where
        R: Rng + ?Sized,
        F: FnMut(ArcId),
    {
        if self.stamps.len() < g.node_count() {
            self.stamps.resize(g.node_count(), 0);
        }
        self.epoch += 1;
        let epoch = self.epoch;
        self.stamps[g.tail(start)] = epoch;
        self.stamps[g.head(start)] = epoch;
        on_arc(start);

        let mut arc = start;
        loop {
            let at = g.head(arc);
            let nbrs = g.neighbors(at);
            let d = nbrs.len();
            if d <= 1 {
                return WalkOutcome::DeadEnd;
            }
            // uniform over the d - 1 entries other than the way back
            let mut next = nbrs[rng.random_range(0..d - 1)];
            if next.edge == arc.edge() {
                next = nbrs[d - 1];
            }
            arc = g.arc_from(next.edge, at);
            on_arc(arc);
            if self.stamps[next.node] == epoch {
                return WalkOutcome::Retraced(arc);
            }
            self.stamps[next.node] = epoch;
        }
    }

    pub fn trace_from<R: Rng + ?Sized>(&mut self, g: &Graph, start: ArcId, rng: &mut R) -> WalkTrace {
        let mut arcs = Vec::new();
        let outcome = self.run_from(g, start, rng, |a| arcs.push(a));
        let mut visited = vec![g.tail(arcs[0])];
        let last = match outcome {
            WalkOutcome::Retraced(_) => arcs.len() - 1,
            WalkOutcome::DeadEnd => arcs.len(),
        };
        visited.extend(arcs[..last].iter().map(|&a| g.head(a)));
        WalkTrace {
            arcs,
            visited,
            outcome,
        }
    }
}

/// One run on `g` with a fresh walker.
pub fn single_walk<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> Result<WalkOutcome> {
    if g.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    Ok(Walker::new(g.node_count()).run(g, rng))
}

/// One traced run from a uniformly random start arc.
pub fn traced_walk<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> Result<WalkTrace> {
    if g.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let start = ArcId(rng.random_range(0..g.arc_count()));
    Ok(Walker::new(g.node_count()).trace_from(g, start, rng))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EstimateOptions {
    pub target_successes: u64,
    pub seed: u64,
    pub workers: usize,
    /// Abort once dead-end runs exceed this; defaults to `100 * target`.
    pub discard_cap: Option<u64>,
}

impl EstimateOptions {
    pub fn new(target_successes: u64, seed: u64) -> Self {
        EstimateOptions {
            target_successes,
            seed,
            workers: 1,
            discard_cap: None,
        }
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn discard_cap(mut self, cap: u64) -> Self {
        self.discard_cap = Some(cap);
        self
    }
}

/// Aggregated retrace counts over `successes` retraced runs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RetracingEstimate {
    /// Per-arc retrace counts, indexed by [`ArcId`].
    pub counts: Vec<u64>,
    pub successes: u64,
    pub discards: u64,
    pub seed: u64,
    /// Runs consumed (`successes + discards`).
    pub walks: u64,
}

impl RetracingEstimate {
    pub fn arc_pi(&self, a: ArcId) -> f64 {
        self.counts[a.0] as f64 / self.successes as f64
    }

    /// Counts folded onto undirected edges.
    pub fn edge_counts(&self) -> Vec<u64> {
        self.counts.chunks_exact(2).map(|c| c[0] + c[1]).collect()
    }

    /// Undirected `pi_hat` per edge.
    pub fn edge_pi(&self) -> Vec<f64> {
        let rho = self.successes as f64;
        self.edge_counts().into_iter().map(|c| c as f64 / rho).collect()
    }

    /// Audit dump: `edge_id,u,v,count,pi_hat`.
    pub fn write_csv<W: Write>(&self, mut out: W, g: &Graph) -> Result<()> {
        check_estimate(self, g)?;
        writeln!(out, "edge_id,u,v,count,pi_hat")?;
        for (e, (c, p)) in self.edge_counts().into_iter().zip(self.edge_pi()).enumerate() {
            let (u, v) = g.endpoints(e);
            writeln!(out, "{e},{},{},{c},{p}", g.node_name(u), g.node_name(v))?;
        }
        Ok(())
    }
}

const CHUNK: u64 = 1024;
const MAX_ROUND: u64 = 1 << 21;
const DEAD: u32 = u32::MAX;

/// Runs walks until exactly `target_successes` of them retrace.
///
/// Run `k` uses stream `k` of the seed's family, and runs are consumed in
/// index order, so the result is identical for any worker count.
pub fn estimate_retracing(g: &Graph, opts: &EstimateOptions) -> Result<RetracingEstimate> {
    if g.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    if opts.target_successes == 0 {
        return Err(Error::InvalidParameter("target_successes must be >= 1".into()));
    }
    if g.arc_count() >= DEAD as usize {
        return Err(Error::InvalidParameter("graph has too many arcs".into()));
    }
    let workers = opts.workers.max(1);
    let cap = opts
        .discard_cap
        .unwrap_or(opts.target_successes.saturating_mul(100));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    let streams = StreamFamily::new(opts.seed);

    let mut counts = vec![0u64; g.arc_count()];
    let mut successes = 0u64;
    let mut discards = 0u64;
    let mut next_walk = 0u64;

    loop {
        let remaining = opts.target_successes - successes;
        let consumed = successes + discards;
        let planned = if consumed == 0 {
            remaining
        } else if successes == 0 {
            2 * consumed
        } else {
            // expected runs for the remainder at the observed success rate, with slack
            (remaining as f64 * consumed as f64 / successes as f64 * 1.05).ceil() as u64
        };
        let chunks = planned
            .clamp(CHUNK * workers as u64, MAX_ROUND)
            .div_ceil(CHUNK);

        let first = next_walk;
        let outcomes: Vec<Vec<u32>> = pool.install(|| {
            (0..chunks)
                .into_par_iter()
                .map_init(
                    || Walker::new(g.node_count()),
                    |walker, c| {
                        let start = first + c * CHUNK;
                        (start..start + CHUNK)
                            .map(|k| match walker.run(g, &mut streams.stream(k)) {
                                WalkOutcome::Retraced(a) => a.0 as u32,
                                WalkOutcome::DeadEnd => DEAD,
                            })
                            .collect()
                    },
                )
                .collect()
        });
        next_walk += chunks * CHUNK;

        for o in outcomes.iter().flatten() {
            if *o == DEAD {
                discards += 1;
                if discards > cap {
                    return Err(Error::DiscardCapExceeded {
                        discards,
                        successes,
                    });
                }
            } else {
                counts[*o as usize] += 1;
                successes += 1;
                if successes == opts.target_successes {
                    return Ok(RetracingEstimate {
                        counts,
                        successes,
                        discards,
                        seed: opts.seed,
                        walks: successes + discards,
                    });
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Smoothing {
    #[default]
    None,
    /// Add-one pseudo-count per edge.
    #[serde(rename = "add1")]
    AddOne,
}

impl FromStr for Smoothing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Smoothing::None),
            "add1" | "add-one" => Ok(Smoothing::AddOne),
            other => Err(Error::InvalidParameter(format!("unknown smoothing `{other}`"))),
        }
    }
}

/// Per-edge weights indexed by edge id.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeWeights {
    weights: Vec<f64>,
    total: f64,
}

impl EdgeWeights {
    pub fn new(weights: Vec<f64>) -> Self {
        let total = compensated_sum(weights.iter().copied());
        EdgeWeights { weights, total }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.total
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }

    pub fn get(&self, e: usize) -> f64 {
        self.weights[e]
    }
}

fn check_estimate(est: &RetracingEstimate, g: &Graph) -> Result<()> {
    if est.counts.len() != g.arc_count() {
        return Err(Error::Mismatch {
            what: "estimate arcs vs graph arcs",
            expected: g.arc_count(),
            got: est.counts.len(),
        });
    }
    Ok(())
}

/// `w_e = 2m * pi_hat_e`, or with add-one smoothing
/// `w_e = 2m * (count_e + 1) / (rho + m)`. Both sum to `2m`.
pub fn rnbrw_weights(est: &RetracingEstimate, g: &Graph, smoothing: Smoothing) -> Result<EdgeWeights> {
    check_estimate(est, g)?;
    if est.successes == 0 {
        return Err(Error::InvalidParameter("estimate has no retraced runs".into()));
    }
    let m = g.edge_count() as f64;
    let rho = est.successes as f64;
    let weights = est
        .edge_counts()
        .into_iter()
        .map(|c| match smoothing {
            Smoothing::None => 2.0 * m * c as f64 / rho,
            Smoothing::AddOne => 2.0 * m * (c as f64 + 1.0) / (rho + m),
        })
        .collect();
    Ok(EdgeWeights::new(weights))
}

/// Uniform deviation bound `P(max_e |pi_hat_e - pi_e| >= eps) <= 4m exp(-rho eps^2 / 2)`.
pub fn uniform_deviation_bound(m: u64, epsilon: f64, rho: u64) -> f64 {
    4.0 * m as f64 * (-(rho as f64) * epsilon * epsilon / 2.0).exp()
}

/// Smallest `rho` with `4m exp(-rho eps^2 / 2) <= delta`.
pub fn required_walks(m: u64, epsilon: f64, delta: f64) -> Result<u64> {
    if m == 0 {
        return Err(Error::InvalidParameter("m must be >= 1".into()));
    }
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::InvalidParameter(format!("epsilon must be in (0, 1], got {epsilon}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("delta must be in (0, 1), got {delta}")));
    }
    // relative slack so boundary cases that hold exactly in real arithmetic are accepted
    let within = |rho: u64| uniform_deviation_bound(m, epsilon, rho) <= delta * (1.0 + 1e-12);
    let closed = (2.0 / (epsilon * epsilon) * (4.0 * m as f64 / delta).ln()).ceil();
    let mut rho = closed.max(1.0) as u64;
    while rho > 1 && within(rho - 1) {
        rho -= 1;
    }
    while !within(rho) {
        rho += 1;
    }
    Ok(rho)
}
