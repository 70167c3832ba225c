//! LFR-style benchmark: power-law degrees and community sizes with a
//! prescribed fraction of each node's edges leaving its community.

use std::collections::HashMap;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;
use crate::rng::seeded;

use super::{BenchmarkInstance, GeneratorParams};

const MAX_SWEEPS: usize = 100;
const SWAP_ATTEMPTS: usize = 32;
/// Swap attempts per edge when randomizing a deterministic construction.
const RANDOMIZE_ROUNDS: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkSpec {
    pub n: usize,
    pub avg_degree: f64,
    pub max_degree: usize,
    /// Exponent of the degree distribution.
    pub degree_exponent: f64,
    /// Exponent of the community-size distribution.
    pub community_exponent: f64,
    pub min_community: usize,
    pub max_community: usize,
    pub mixing: f64,
    pub seed: u64,
}

impl BenchmarkSpec {
    /// Defaults: exponents 2 and 1, maximum degree 2.5x the mean,
    /// community sizes in [30, 70].
    pub fn new(n: usize, avg_degree: f64, mixing: f64, seed: u64) -> Self {
        Self {
            n,
            avg_degree,
            max_degree: (2.5 * avg_degree).round() as usize,
            degree_exponent: 2.0,
            community_exponent: 1.0,
            min_community: 30,
            max_community: 70,
            mixing,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if !(0.0..1.0).contains(&self.mixing) {
            return bad(format!("mixing must lie in [0, 1), got {}", self.mixing));
        }
        if self.min_community < 3 || self.min_community > self.max_community {
            return bad(format!(
                "community size bounds [{}, {}] invalid (need 3 <= min <= max)",
                self.min_community, self.max_community
            ));
        }
        if self.n < self.min_community {
            return bad(format!("n = {} is smaller than the minimum community size", self.n));
        }
        if !(self.avg_degree >= 1.0) || self.avg_degree > self.max_degree as f64 {
            return bad(format!(
                "need 1 <= avg_degree <= max_degree, got {} and {}",
                self.avg_degree, self.max_degree
            ));
        }
        if self.max_degree >= self.n {
            return bad(format!("max_degree {} must be below n = {}", self.max_degree, self.n));
        }
        if (1.0 - self.mixing) * self.max_degree as f64 >= self.max_community as f64 {
            return bad("(1 - mixing) * max_degree must be below max_community".into());
        }
        if !(self.degree_exponent >= 0.0) || !(self.community_exponent >= 0.0) {
            return bad("exponents must be non-negative".into());
        }
        Ok(())
    }
}

pub fn generate_lfr_like(spec: &BenchmarkSpec) -> Result<BenchmarkInstance> {
    spec.validate()?;
    let mut rng = seeded(spec.seed);

    let sizes = community_sizes(spec, &mut rng)?;
    let mut degree = degree_sequence(spec, &mut rng)?;
    let mut internal: Vec<usize> = degree.iter().map(|&d| internal_degree(d, spec.mixing, &mut rng)).collect();
    let community = assign_nodes(&sizes, &internal, &mut rng)?;

    let q = sizes.len();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); q];
    for (i, &c) in community.iter().enumerate() {
        members[c].push(i);
    }
    for (c, nodes) in members.iter().enumerate() {
        fix_internal_parity(nodes, sizes[c], spec.max_degree, &mut degree, &mut internal);
        make_graphical(nodes, &mut internal);
    }
    fix_external_parity(spec.max_degree, &mut degree, &internal);

    let mut counts: HashMap<(usize, usize), u32> = HashMap::new();
    let mut edges = Vec::with_capacity(degree.iter().sum::<usize>() / 2);
    for nodes in &members {
        let stubs: Vec<usize> = nodes.iter().flat_map(|&i| std::iter::repeat_n(i, internal[i])).collect();
        let mut pool = pair_stubs(stubs, &mut counts, &mut rng);
        if !rewire(&mut pool, &mut counts, |_, _| true, &mut rng) {
            // dense communities can defeat local repair; build one directly
            forget(&pool, &mut counts);
            pool = havel_hakimi(nodes, &internal).expect("internal degrees were made graphical");
            remember(&pool, &mut counts);
            for _ in 0..RANDOMIZE_ROUNDS * pool.len() {
                let (i, j) = (rng.random_range(0..pool.len()), rng.random_range(0..pool.len()));
                try_swap(&mut pool, &mut counts, &|_, _| true, i, j, &mut rng);
            }
        }
        edges.extend(pool);
    }
    let stubs: Vec<usize> = (0..spec.n)
        .flat_map(|i| std::iter::repeat_n(i, degree[i] - internal[i]))
        .collect();
    let mut pool = pair_stubs(stubs, &mut counts, &mut rng);
    if !rewire(&mut pool, &mut counts, |u, v| community[u] != community[v], &mut rng) {
        return Err(Error::Generation(format!(
            "could not simplify the external edges within {MAX_SWEEPS} sweeps"
        )));
    }
    edges.extend(pool);

    let graph = Graph::from_edges(spec.n, &edges)?;
    debug_assert!((0..spec.n).all(|i| graph.degree(i) == degree[i]));
    Ok(BenchmarkInstance {
        graph,
        truth: Partition::from_labels(community),
        params: GeneratorParams::LfrLike(spec.clone()),
    })
}

/// Inverse-CDF sample of a continuous power law `x^-tau` on `[a, b)`.
fn sample_power<R: Rng>(rng: &mut R, a: f64, b: f64, tau: f64) -> f64 {
    let u: f64 = rng.random();
    if (tau - 1.0).abs() < 1e-12 {
        a * (b / a).powf(u)
    } else {
        let e = 1.0 - tau;
        (a.powf(e) + u * (b.powf(e) - a.powf(e))).powf(1.0 / e)
    }
}

fn power_cdf(x: f64, a: f64, b: f64, tau: f64) -> f64 {
    if (tau - 1.0).abs() < 1e-12 {
        (x / a).ln() / (b / a).ln()
    } else {
        let e = 1.0 - tau;
        (x.powf(e) - a.powf(e)) / (b.powf(e) - a.powf(e))
    }
}

/// Mean of `floor(X)` for the power law on `[a, b)`.
fn floor_mean(a: f64, b: f64, tau: f64) -> f64 {
    let mut mean = 0.0;
    let mut k = a.floor();
    while k < b {
        let lo = k.max(a);
        let hi = (k + 1.0).min(b);
        mean += k * (power_cdf(hi, a, b, tau) - power_cdf(lo, a, b, tau));
        k += 1.0;
    }
    mean
}

fn community_sizes(spec: &BenchmarkSpec, rng: &mut ChaCha8Rng) -> Result<Vec<usize>> {
    let (lo, hi) = (spec.min_community as f64, spec.max_community as f64 + 1.0);
    let mut sizes = Vec::new();
    let mut total = 0;
    while total < spec.n {
        let s = (sample_power(rng, lo, hi, spec.community_exponent).floor() as usize)
            .clamp(spec.min_community, spec.max_community);
        if total + s >= spec.n {
            let rest = spec.n - total;
            let room: usize = sizes.iter().map(|&x| spec.max_community - x).sum();
            let spare: usize = sizes.iter().map(|&x| x - spec.min_community).sum();
            if rest >= spec.min_community {
                sizes.push(rest);
            } else if rest <= room {
                // too small to stand alone: spread over communities with room
                for _ in 0..rest {
                    let open: Vec<usize> = (0..sizes.len()).filter(|&c| sizes[c] < spec.max_community).collect();
                    let &c = open.choose(rng).expect("room was counted");
                    sizes[c] += 1;
                }
            } else if rest + spare >= spec.min_community {
                // or top it up with nodes taken from communities above the minimum
                for _ in rest..spec.min_community {
                    let open: Vec<usize> = (0..sizes.len()).filter(|&c| sizes[c] > spec.min_community).collect();
                    let &c = open.choose(rng).expect("spare was counted");
                    sizes[c] -= 1;
                }
                sizes.push(spec.min_community);
            } else {
                return Err(Error::InvalidParameter(format!(
                    "community sizes in [{}, {}] cannot sum to n = {}",
                    spec.min_community, spec.max_community, spec.n
                )));
            }
            break;
        }
        sizes.push(s);
        total += s;
    }
    Ok(sizes)
}

fn degree_sequence(spec: &BenchmarkSpec, rng: &mut ChaCha8Rng) -> Result<Vec<usize>> {
    let tau = spec.degree_exponent;
    let b = spec.max_degree as f64 + 1.0;
    let target = spec.avg_degree;
    if floor_mean(1.0, b, tau) > target {
        return Err(Error::InvalidParameter(format!(
            "mean degree {target} is unreachable with max_degree {} and exponent {tau}",
            spec.max_degree
        )));
    }
    let (mut lo, mut hi) = (1.0, spec.max_degree as f64);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if floor_mean(mid, b, tau) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x_min = 0.5 * (lo + hi);
    let mut degree: Vec<usize> = (0..spec.n)
        .map(|_| (sample_power(rng, x_min, b, tau).floor() as usize).clamp(1, spec.max_degree))
        .collect();
    // pin the total so the realized mean does not drift with the sample
    let mut total: usize = degree.iter().sum();
    let goal = (target * spec.n as f64).round() as usize;
    while total != goal {
        let i = rng.random_range(0..spec.n);
        if total < goal && degree[i] < spec.max_degree {
            degree[i] += 1;
            total += 1;
        } else if total > goal && degree[i] > 1 {
            degree[i] -= 1;
            total -= 1;
        }
    }
    Ok(degree)
}

/// Places nodes, largest internal degree first, into communities big enough
/// to hold their internal edges; among those, a community is drawn with
/// probability proportional to its free slots.
fn assign_nodes(sizes: &[usize], internal: &[usize], rng: &mut ChaCha8Rng) -> Result<Vec<usize>> {
    let n = internal.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    order.sort_by(|&a, &b| internal[b].cmp(&internal[a]));

    let mut free = sizes.to_vec();
    let mut community = vec![usize::MAX; n];
    let mut eligible = Vec::new();
    for &i in &order {
        eligible.clear();
        let mut slots = 0;
        for (c, &f) in free.iter().enumerate() {
            if f > 0 && sizes[c] > internal[i] {
                eligible.push(c);
                slots += f;
            }
        }
        if slots == 0 {
            return Err(Error::InvalidParameter(format!(
                "no community can hold a node with internal degree {}",
                internal[i]
            )));
        }
        let mut r = rng.random_range(0..slots);
        let mut chosen = eligible[0];
        for &c in &eligible {
            if r < free[c] {
                chosen = c;
                break;
            }
            r -= free[c];
        }
        free[chosen] -= 1;
        community[i] = chosen;
    }
    Ok(community)
}

/// Splits `d` by randomized rounding so the expected external share is
/// exactly `mixing` at every degree.
fn internal_degree(d: usize, mixing: f64, rng: &mut ChaCha8Rng) -> usize {
    let x = (1.0 - mixing) * d as f64;
    let mut k = x.floor() as usize;
    if rng.random::<f64>() < x - x.floor() {
        k += 1;
    }
    k.min(d)
}

/// Makes the community's internal stub count even, preferring to turn an
/// external stub inward, then to add one internal stub.
fn fix_internal_parity(nodes: &[usize], size: usize, max_degree: usize, degree: &mut [usize], internal: &mut [usize]) {
    if nodes.iter().map(|&i| internal[i]).sum::<usize>() % 2 == 0 {
        return;
    }
    if let Some(&i) = nodes.iter().find(|&&i| internal[i] < degree[i] && internal[i] + 1 < size) {
        internal[i] += 1;
    } else if let Some(&i) = nodes.iter().find(|&&i| degree[i] < max_degree && internal[i] + 1 < size) {
        degree[i] += 1;
        internal[i] += 1;
    } else if let Some(&i) = nodes.iter().find(|&&i| internal[i] > 0) {
        internal[i] -= 1;
    }
}

/// Erdos-Gallai test on a non-increasing sequence.
fn is_graphical(sorted_desc: &[usize]) -> bool {
    if sorted_desc.iter().sum::<usize>() % 2 == 1 {
        return false;
    }
    let mut left = 0usize;
    for k in 1..=sorted_desc.len() {
        left += sorted_desc[k - 1];
        let right = k * (k - 1) + sorted_desc[k..].iter().map(|&d| d.min(k)).sum::<usize>();
        if left > right {
            return false;
        }
    }
    true
}

/// Turns internal stubs of the busiest members into external ones, two at
/// a time so parity is kept, until the community can be a simple graph.
fn make_graphical(nodes: &[usize], internal: &mut [usize]) {
    loop {
        let mut ks: Vec<usize> = nodes.iter().map(|&i| internal[i]).collect();
        ks.sort_unstable_by(|a, b| b.cmp(a));
        if is_graphical(&ks) {
            return;
        }
        for _ in 0..2 {
            let &i = nodes.iter().max_by_key(|&&i| (internal[i], std::cmp::Reverse(i))).expect("non-empty");
            internal[i] -= 1;
        }
    }
}

/// Makes the external stub count even.
fn fix_external_parity(max_degree: usize, degree: &mut [usize], internal: &[usize]) {
    let external: usize = degree.iter().zip(internal).map(|(d, k)| d - k).sum();
    if external % 2 == 0 {
        return;
    }
    if let Some(i) = (0..degree.len()).find(|&i| degree[i] > internal[i]) {
        degree[i] -= 1;
    } else if let Some(i) = (0..degree.len()).find(|&i| degree[i] < max_degree) {
        degree[i] += 1;
    }
}

fn key(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

fn pair_stubs(mut stubs: Vec<usize>, counts: &mut HashMap<(usize, usize), u32>, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    debug_assert!(stubs.len() % 2 == 0);
    stubs.shuffle(rng);
    let pool: Vec<(usize, usize)> = stubs.chunks_exact(2).map(|p| (p[0], p[1])).collect();
    remember(&pool, counts);
    pool
}

fn forget(pool: &[(usize, usize)], counts: &mut HashMap<(usize, usize), u32>) {
    for &(u, v) in pool {
        let k = key(u, v);
        let n = counts.get_mut(&k).expect("pool edge is counted");
        *n -= 1;
        if *n == 0 {
            counts.remove(&k);
        }
    }
}

fn remember(pool: &[(usize, usize)], counts: &mut HashMap<(usize, usize), u32>) {
    for &(u, v) in pool {
        *counts.entry(key(u, v)).or_insert(0) += 1;
    }
}

/// Simple graph with the given degrees on `nodes`, or `None` if the
/// sequence is not graphical. Always connects the node with the most
/// remaining stubs to the next-largest ones.
fn havel_hakimi(nodes: &[usize], degree: &[usize]) -> Option<Vec<(usize, usize)>> {
    let mut rest: Vec<(usize, usize)> = nodes.iter().map(|&i| (degree[i], i)).collect();
    let mut edges = Vec::new();
    loop {
        rest.sort_unstable_by(|a, b| b.cmp(a));
        let (d, u) = rest[0];
        if d == 0 {
            return Some(edges);
        }
        if d >= rest.len() {
            return None;
        }
        rest[0].0 = 0;
        for slot in &mut rest[1..=d] {
            if slot.0 == 0 {
                return None;
            }
            slot.0 -= 1;
            edges.push((u, slot.1));
        }
    }
}

/// One double-edge swap between `pool[i]` and `pool[j]`, applied only if
/// both new edges are new, distinct, loop-free and `allowed`.
fn try_swap(
    pool: &mut [(usize, usize)],
    counts: &mut HashMap<(usize, usize), u32>,
    allowed: &impl Fn(usize, usize) -> bool,
    i: usize,
    j: usize,
    rng: &mut ChaCha8Rng,
) -> bool {
    if i == j {
        return false;
    }
    let ((a, b), (c, d)) = (pool[i], pool[j]);
    let (e1, e2) = if rng.random_bool(0.5) { ((a, c), (b, d)) } else { ((a, d), (b, c)) };
    let fine = |(x, y): (usize, usize)| x != y && allowed(x, y) && !counts.contains_key(&key(x, y));
    if !fine(e1) || !fine(e2) || key(e1.0, e1.1) == key(e2.0, e2.1) {
        return false;
    }
    forget(&[pool[i], pool[j]], counts);
    remember(&[e1, e2], counts);
    pool[i] = e1;
    pool[j] = e2;
    true
}

/// Degree-preserving double-edge swaps until every edge in `pool` is a
/// non-loop, non-duplicate pair accepted by `allowed`. Returns false if the
/// sweep budget runs out.
fn rewire(
    pool: &mut [(usize, usize)],
    counts: &mut HashMap<(usize, usize), u32>,
    allowed: impl Fn(usize, usize) -> bool,
    rng: &mut ChaCha8Rng,
) -> bool {
    let is_bad = |(u, v): (usize, usize), counts: &HashMap<(usize, usize), u32>| {
        u == v || !allowed(u, v) || counts[&key(u, v)] > 1
    };
    for _ in 0..MAX_SWEEPS {
        let bad: Vec<usize> = (0..pool.len()).filter(|&i| is_bad(pool[i], counts)).collect();
        if bad.is_empty() {
            return true;
        }
        if pool.len() < 2 {
            return false;
        }
        for i in bad {
            for _ in 0..SWAP_ATTEMPTS {
                if !is_bad(pool[i], counts) {
                    break;
                }
                let j = rng.random_range(0..pool.len());
                if try_swap(pool, counts, &allowed, i, j, rng) {
                    break;
                }
            }
        }
    }
    pool.iter().all(|&e| !is_bad(e, counts))
}
