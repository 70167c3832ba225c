#![allow(dead_code)]

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rnbrw::{Graph, Partition};

/// Square a-b-c-d with apex e on c and d.
pub const HOUSE_NAMES: [&str; 5] = ["a", "b", "c", "d", "e"];
pub const HOUSE_EDGES: [(usize, usize); 6] = [(0, 1), (1, 2), (2, 3), (3, 0), (2, 4), (3, 4)];

pub fn house() -> Graph {
    Graph::from_edges(5, &HOUSE_EDGES)
        .unwrap()
        .with_names(HOUSE_NAMES.iter().map(|s| s.to_string()).collect())
        .unwrap()
}

pub fn cycle(n: usize) -> Graph {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &edges).unwrap()
}

pub fn two_triangles_bridge() -> Graph {
    Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)]).unwrap()
}

/// Retracing probabilities by explicit depth-first enumeration of every
/// walk, written without the arc/state machinery of the library oracle.
/// Returns (per-edge unconditional mass, dead-end mass).
pub fn enumerate_walks(n: usize, edges: &[(usize, usize)]) -> (Vec<BigRational>, BigRational) {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (e, &(u, v)) in edges.iter().enumerate() {
        adj[u].push((v, e));
        adj[v].push((u, e));
    }
    let mut mass = vec![BigRational::zero(); edges.len()];
    let mut dead = BigRational::zero();
    let start = BigRational::new(BigInt::one(), BigInt::from(2 * edges.len()));

    fn go(
        adj: &[Vec<(usize, usize)>],
        path: &mut Vec<usize>,
        via: usize,
        p: BigRational,
        mass: &mut [BigRational],
        dead: &mut BigRational,
    ) {
        let here = *path.last().unwrap();
        let options: Vec<&(usize, usize)> = adj[here].iter().filter(|&&(_, e)| e != via).collect();
        if options.is_empty() {
            *dead += p;
            return;
        }
        let q = p / BigInt::from(options.len());
        for &&(next, e) in &options {
            if path.contains(&next) {
                mass[e] += q.clone();
            } else {
                path.push(next);
                go(adj, path, e, q.clone(), mass, dead);
                path.pop();
            }
        }
    }

    for (e, &(u, v)) in edges.iter().enumerate() {
        for (a, b) in [(u, v), (v, u)] {
            let mut path = vec![a, b];
            go(&adj, &mut path, e, start.clone(), &mut mass, &mut dead);
        }
    }
    (mass, dead)
}

/// Modularity straight from the pairwise definition
/// `(1/2m) sum_ij (A_ij - k_i k_j / 2m) [c_i = c_j]`.
pub fn pairwise_modularity(g: &Graph, p: &Partition) -> f64 {
    let n = g.node_count();
    let mut a = vec![vec![0.0; n]; n];
    for (u, v, w) in g.edges() {
        a[u][v] += w;
        a[v][u] += w;
    }
    for i in 0..n {
        a[i][i] += 2.0 * g.self_loop_weight(i);
    }
    let k: Vec<f64> = a.iter().map(|r| r.iter().sum()).collect();
    let two_m: f64 = k.iter().sum();
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if p.label(i) == p.label(j) {
                q += a[i][j] - k[i] * k[j] / two_m;
            }
        }
    }
    q / two_m
}

pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v, rng.random_range(0.5..2.0)));
            }
        }
    }
    if edges.is_empty() {
        edges.push((0, 1, 1.0));
    }
    Graph::from_weighted_edges(n, edges).unwrap()
}

fn pair_bit(i: usize, j: usize) -> u32 {
    let (i, j) = (i.min(j), i.max(j));
    1 << (j * (j - 1) / 2 + i)
}

fn degrees(n: usize, code: u32) -> Vec<usize> {
    let mut d = vec![0; n];
    for j in 1..n {
        for i in 0..j {
            if code & pair_bit(i, j) != 0 {
                d[i] += 1;
                d[j] += 1;
            }
        }
    }
    d
}

/// Smallest relabeled code over permutations that list nodes in
/// non-increasing degree order.
fn canonical(n: usize, code: u32) -> u32 {
    let deg = degrees(n, code);
    let mut target = deg.clone();
    target.sort_unstable_by(|a, b| b.cmp(a));
    let mut best = u32::MAX;
    let mut perm = Vec::with_capacity(n);
    let mut used = vec![false; n];

    fn search(
        n: usize,
        code: u32,
        deg: &[usize],
        target: &[usize],
        perm: &mut Vec<usize>,
        used: &mut [bool],
        best: &mut u32,
    ) {
        if perm.len() == n {
            // perm[new] = old
            let mut c = 0;
            for j in 1..n {
                for i in 0..j {
                    if code & pair_bit(perm[i], perm[j]) != 0 {
                        c |= pair_bit(i, j);
                    }
                }
            }
            *best = (*best).min(c);
            return;
        }
        let slot = perm.len();
        for v in 0..n {
            if !used[v] && deg[v] == target[slot] {
                used[v] = true;
                perm.push(v);
                search(n, code, deg, target, perm, used, best);
                perm.pop();
                used[v] = false;
            }
        }
    }

    search(n, code, &deg, &target, &mut perm, &mut used, &mut best);
    best
}

/// All connected simple graphs on `2..=max_n` nodes, one per isomorphism
/// class. Every connected graph has a vertex whose removal leaves it
/// connected, so adding a vertex to each class of size n-1 in every
/// possible way reaches every class of size n.
pub fn connected_graphs_up_to(max_n: usize) -> Vec<Graph> {
    let mut out = Vec::new();
    let mut layer: Vec<u32> = vec![0]; // the single-node graph
    for n in 2..=max_n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for &code in &layer {
            for subset in 1u32..(1 << (n - 1)) {
                let mut c = code;
                for i in 0..n - 1 {
                    if subset & (1 << i) != 0 {
                        c |= pair_bit(i, n - 1);
                    }
                }
                let canon = canonical(n, c);
                if seen.insert(canon) {
                    next.push(canon);
                }
            }
        }
        for &code in &next {
            let mut edges = Vec::new();
            for j in 1..n {
                for i in 0..j {
                    if code & pair_bit(i, j) != 0 {
                        edges.push((i, j));
                    }
                }
            }
            out.push(Graph::from_edges(n, &edges).unwrap());
        }
        layer = next;
    }
    out
}

pub fn linf(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(|a, b| a.total_cmp(b));
    let k = xs.len();
    if k % 2 == 1 {
        xs[k / 2]
    } else {
        0.5 * (xs[k / 2 - 1] + xs[k / 2])
    }
}
