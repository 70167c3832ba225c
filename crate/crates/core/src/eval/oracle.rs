//! Exhaustive oracles: exact retracing probabilities by propagating rational
//! probability mass through every non-backtracking trajectory, and the
//! modularity maximum by scanning every set partition.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{ArcId, Graph};
use crate::partition::Partition;

pub const MAX_RETRACING_NODES: usize = 12;
pub const MAX_MODULARITY_NODES: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct ExactRetracing {
    /// Unconditional probability that a run retraces each arc.
    pub arc_mass: Vec<BigRational>,
    /// Probability that a run dead-ends.
    pub dead_end_mass: BigRational,
}

impl ExactRetracing {
    /// Probability of any retrace (`1 - dead_end_mass`).
    pub fn retrace_mass(&self) -> BigRational {
        self.arc_mass.iter().fold(BigRational::zero(), |acc, x| acc + x)
    }

    /// Per-arc retracing probability. Conditional on the run closing a
    /// cycle when `conditional`, otherwise the raw mass.
    pub fn arc_probabilities(&self, conditional: bool) -> Vec<BigRational> {
        if !conditional {
            return self.arc_mass.clone();
        }
        let total = self.retrace_mass();
        self.arc_mass.iter().map(|x| x / &total).collect()
    }

    /// Undirected retracing probabilities (both arcs summed).
    pub fn edge_probabilities(&self, conditional: bool) -> Vec<BigRational> {
        self.arc_probabilities(conditional)
            .chunks_exact(2)
            .map(|c| &c[0] + &c[1])
            .collect()
    }

    /// Conditional undirected probabilities as `f64`.
    pub fn edge_pi(&self) -> Vec<f64> {
        self.edge_probabilities(true).iter().map(to_f64).collect()
    }
}

fn to_f64(x: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

/// Exact retracing probabilities for graphs with at most
/// [`MAX_RETRACING_NODES`] nodes.
///
/// States are `(current arc, visited set)`. Each step visits one new node, so
/// states are processed level by level and equal states are merged.
pub fn exact_retracing(g: &Graph) -> Result<ExactRetracing> {
    let n = g.node_count();
    if n > MAX_RETRACING_NODES {
        return Err(Error::TooLarge {
            n,
            limit: MAX_RETRACING_NODES,
        });
    }
    if g.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let arcs = g.arc_count();
    let start_mass = BigRational::new(BigInt::one(), BigInt::from(arcs));
    let mut arc_mass = vec![BigRational::zero(); arcs];
    let mut dead_end_mass = BigRational::zero();

    let mut level: HashMap<(ArcId, u32), BigRational> = (0..arcs)
        .map(|a| {
            let a = ArcId(a);
            let mask = (1u32 << g.tail(a)) | (1u32 << g.head(a));
            ((a, mask), start_mass.clone())
        })
        .collect();

    while !level.is_empty() {
        let mut next: HashMap<(ArcId, u32), BigRational> = HashMap::new();
        for ((arc, mask), mass) in level {
            let at = g.head(arc);
            let options: Vec<_> = g.neighbors(at).iter().filter(|x| x.edge != arc.edge()).collect();
            if options.is_empty() {
                dead_end_mass += mass;
                continue;
            }
            let share = mass / BigInt::from(options.len());
            for x in options {
                let step = g.arc_from(x.edge, at);
                let bit = 1u32 << x.node;
                if mask & bit != 0 {
                    arc_mass[step.0] += &share;
                } else {
                    *next.entry((step, mask | bit)).or_insert_with(BigRational::zero) += &share;
                }
            }
        }
        level = next;
    }

    let out = ExactRetracing {
        arc_mass,
        dead_end_mass,
    };
    if out.retrace_mass().is_zero() {
        return Err(Error::Acyclic);
    }
    Ok(out)
}

/// Golden-file dump: `u,v,pi_exact_num,pi_exact_den` per edge (conditional).
pub fn write_golden<W: Write>(mut out: W, g: &Graph, exact: &ExactRetracing) -> Result<()> {
    writeln!(out, "u,v,pi_exact_num,pi_exact_den")?;
    for (e, p) in exact.edge_probabilities(true).iter().enumerate() {
        let (u, v) = g.endpoints(e);
        writeln!(out, "{},{},{},{}", g.node_name(u), g.node_name(v), p.numer(), p.denom())?;
    }
    Ok(())
}

/// Reads a golden file back as `(u, v, probability)` rows.
pub fn read_golden<R: BufRead>(reader: R) -> Result<Vec<(String, String, BigRational)>> {
    let mut rows = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if i == 0 || line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        let parse = |s: &str| {
            s.trim().parse::<BigInt>().map_err(|_| Error::Parse {
                line: i + 1,
                msg: format!("invalid integer `{s}`"),
            })
        };
        if f.len() != 4 {
            return Err(Error::Parse {
                line: i + 1,
                msg: "expected 4 fields".into(),
            });
        }
        rows.push((
            f[0].to_string(),
            f[1].to_string(),
            BigRational::new(parse(f[2])?, parse(f[3])?),
        ));
    }
    Ok(rows)
}

/// Modularity maximum over all set partitions, for at most
/// [`MAX_MODULARITY_NODES`] nodes. Ties keep the first partition in
/// restricted-growth-string order.
pub fn exact_max_modularity(g: &Graph) -> Result<(Partition, f64)> {
    let n = g.node_count();
    if n > MAX_MODULARITY_NODES {
        return Err(Error::TooLarge {
            n,
            limit: MAX_MODULARITY_NODES,
        });
    }
    let degree = g.weighted_degrees();
    let two_m: f64 = degree.iter().sum();
    if !(two_m > 0.0) {
        return Err(Error::ZeroWeight);
    }
    let edges: Vec<_> = g.edges().collect();

    let score = |labels: &[usize], q: usize| -> f64 {
        let mut inside = vec![0.0; q];
        let mut tot = vec![0.0; q];
        for i in 0..n {
            tot[labels[i]] += degree[i];
            inside[labels[i]] += 2.0 * g.self_loop_weight(i);
        }
        for &(u, v, w) in &edges {
            if labels[u] == labels[v] {
                inside[labels[u]] += 2.0 * w;
            }
        }
        (0..q)
            .map(|c| inside[c] / two_m - (tot[c] / two_m).powi(2))
            .sum()
    };

    let mut best_labels = vec![0usize; n];
    let mut best = f64::NEG_INFINITY;
    for_each_set_partition(n, |labels, q| {
        let m = score(labels, q);
        if m > best + 1e-12 {
            best = m;
            best_labels.copy_from_slice(labels);
        }
    });
    Ok((Partition::from_labels(best_labels), best))
}

/// Visits every set partition of `0..n` as a restricted growth string
/// (`labels[0] = 0`, `labels[i] <= 1 + max(labels[..i])`) with its block count.
fn for_each_set_partition<F: FnMut(&[usize], usize)>(n: usize, mut visit: F) {
    if n == 0 {
        visit(&[], 0);
        return;
    }
    let mut labels = vec![0usize; n];
    let mut prefix_max = vec![0usize; n];
    visit(&labels, 1);
    loop {
        let mut i = n;
        loop {
            if i <= 1 {
                return;
            }
            i -= 1;
            if labels[i] <= prefix_max[i - 1] {
                break;
            }
        }
        labels[i] += 1;
        prefix_max[i] = prefix_max[i - 1].max(labels[i]);
        for j in i + 1..n {
            labels[j] = 0;
            prefix_max[j] = prefix_max[i];
        }
        visit(&labels, prefix_max[n - 1] + 1);
    }
}
