mod common;

use std::collections::HashSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rnbrw::walk::traced_walk;
use rnbrw::*;

use common::pairwise_modularity;

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let k = pairs.len();
        proptest::collection::vec((any::<bool>(), 0.1f64..10.0), k).prop_map(move |picks| {
            let mut edges: Vec<(usize, usize, f64)> = pairs
                .iter()
                .zip(&picks)
                .filter(|(_, (keep, _))| *keep)
                .map(|(&(u, v), &(_, w))| (u, v, w))
                .collect();
            if edges.is_empty() {
                edges.push((0, 1, 1.0));
            }
            Graph::from_weighted_edges(n, edges).unwrap()
        })
    })
}

/// Graphs with a cycle, so retracing runs exist.
fn cyclic_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    graph(max_n).prop_map(|g| {
        let mut edges: Vec<(usize, usize, f64)> = g.edges().collect();
        let present: HashSet<(usize, usize)> = edges.iter().map(|&(u, v, _)| (u, v)).collect();
        for (u, v) in [(0, 1), (1, 2), (0, 2)] {
            if !present.contains(&(u, v)) {
                edges.push((u, v, 1.0));
            }
        }
        Graph::from_weighted_edges(g.node_count().max(3), edges).unwrap()
    })
}

fn labels(n: usize) -> impl Strategy<Value = Partition> {
    proptest::collection::vec(0usize..n.max(1), n).prop_map(Partition::from_labels)
}

fn partition_pair() -> impl Strategy<Value = (Partition, Partition)> {
    (1usize..40).prop_flat_map(|n| (labels(n), labels(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn degree_sum_is_twice_total_weight(g in graph(12), seed in any::<u64>()) {
        // condensing an arbitrary partition introduces self-loops
        let n = g.node_count();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = Partition::from_labels((0..n).map(|_| rand::Rng::random_range(&mut rng, 0..3)));
        let (h, _) = condense(&g, &p).unwrap();
        for graph in [&g, &h] {
            let deg: f64 = graph.weighted_degrees().iter().sum();
            let direct = 2.0 * graph.weights().iter().sum::<f64>() + 2.0 * graph.self_loops().iter().sum::<f64>();
            prop_assert!((deg - direct).abs() <= 1e-9 * direct);
        }
    }

    #[test]
    fn edge_list_round_trip(g in graph(12)) {
        let mut buf = Vec::new();
        g.save_edge_list(&mut buf, true).unwrap();
        let back = Graph::load_edge_list(&buf[..], true).unwrap();
        prop_assert_eq!(back.edge_count(), g.edge_count());
        let names = back.names().unwrap();
        let mut original: Vec<(String, String, f64)> =
            g.edges().map(|(u, v, w)| (g.node_name(u), g.node_name(v), w)).collect();
        let mut reloaded: Vec<(String, String, f64)> =
            back.edges().map(|(u, v, w)| (names[u].clone(), names[v].clone(), w)).collect();
        original.sort_by(|a, b| a.partial_cmp(b).unwrap());
        reloaded.sort_by(|a, b| a.partial_cmp(b).unwrap());
        prop_assert_eq!(original, reloaded);
    }

    #[test]
    fn arc_reversal_is_an_involution(g in graph(10)) {
        for a in 0..g.arc_count() {
            let a = ArcId(a);
            prop_assert_eq!(a.reverse().reverse(), a);
            prop_assert_eq!(g.head(a), g.tail(a.reverse()));
            prop_assert_eq!(a.edge(), a.reverse().edge());
        }
    }

    #[test]
    fn traces_are_non_backtracking_and_stop_at_first_revisit(g in graph(12), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..50 {
            let t = traced_walk(&g, &mut rng).unwrap();
            for w in t.arcs.windows(2) {
                prop_assert_ne!(w[1], w[0].reverse());
                prop_assert_eq!(g.tail(w[1]), g.head(w[0]));
            }
            let distinct: HashSet<_> = t.visited.iter().collect();
            prop_assert_eq!(distinct.len(), t.visited.len());
            match t.outcome {
                WalkOutcome::Retraced(last) => {
                    prop_assert_eq!(Some(&last), t.arcs.last());
                    prop_assert!(t.visited.contains(&g.head(last)));
                }
                WalkOutcome::DeadEnd => {
                    prop_assert_eq!(g.degree(*t.visited.last().unwrap()), 1);
                }
            }
        }
    }

    #[test]
    fn estimate_is_a_distribution(g in cyclic_graph(10), seed in any::<u64>(), target in 1u64..3000) {
        let est = estimate_retracing(&g, &EstimateOptions::new(target, seed).workers(2)).unwrap();
        prop_assert_eq!(est.counts.iter().sum::<u64>(), target);
        prop_assert_eq!(est.edge_counts().iter().sum::<u64>(), target);
        prop_assert_eq!(est.successes, target);
        for s in [Smoothing::None, Smoothing::AddOne] {
            let w = rnbrw_weights(&est, &g, s).unwrap();
            let m = g.edge_count() as f64;
            prop_assert!((w.total_weight() - 2.0 * m).abs() < 1e-9 * m);
        }
    }

    #[test]
    fn estimate_ignores_worker_count(g in cyclic_graph(10), seed in any::<u64>()) {
        let base = estimate_retracing(&g, &EstimateOptions::new(5000, seed).workers(1)).unwrap();
        for workers in [4, 16] {
            let other = estimate_retracing(&g, &EstimateOptions::new(5000, seed).workers(workers)).unwrap();
            prop_assert_eq!(&other.counts, &base.counts);
            prop_assert_eq!(other.discards, base.discards);
        }
    }

    #[test]
    fn exact_oracle_sums_to_one(g in cyclic_graph(8)) {
        let ex = exact_retracing(&g).unwrap();
        let total = ex.edge_probabilities(true).into_iter().fold(num_rational::BigRational::from_integer(0.into()), |a, x| a + x);
        prop_assert_eq!(total, num_rational::BigRational::from_integer(1.into()));
    }

    #[test]
    fn modularity_matches_pairwise_definition(g in graph(12), p in labels(12)) {
        let n = g.node_count();
        let p = Partition::from_labels(p.labels()[..n].iter().copied());
        let q = modularity(&g, &p).unwrap();
        prop_assert!((q - pairwise_modularity(&g, &p)).abs() < 1e-12);
        prop_assert!((-0.5 - 1e-12..=1.0).contains(&q));
    }

    #[test]
    fn modularity_is_scale_invariant(g in graph(12), p in labels(12), c in 1e-3f64..1e3) {
        let n = g.node_count();
        let p = Partition::from_labels(p.labels()[..n].iter().copied());
        let q = modularity(&g, &p).unwrap();
        let qs = modularity(&g.scale_weights(c).unwrap(), &p).unwrap();
        prop_assert!((q - qs).abs() <= 1e-9 * q.abs().max(1e-12) + 1e-15);
    }

    #[test]
    fn detectors_are_scale_invariant(g in graph(12), seed in any::<u64>()) {
        for c in [0.1, 10.0] {
            let h = g.scale_weights(c).unwrap();
            prop_assert_eq!(louvain(&g, seed).unwrap().partition, louvain(&h, seed).unwrap().partition);
            prop_assert_eq!(cnm(&g).unwrap().partition, cnm(&h).unwrap().partition);
        }
    }

    #[test]
    fn detectors_are_bounded_by_the_oracle(g in graph(8), seed in any::<u64>()) {
        let (_, best) = exact_max_modularity(&g).unwrap();
        let floor = modularity(&g, &Partition::singletons(g.node_count())).unwrap();
        let l = louvain(&g, seed).unwrap();
        let c = cnm(&g).unwrap();
        for q in [l.modularity, c.modularity] {
            prop_assert!(q <= best + 1e-12);
            prop_assert!(q >= floor - 1e-12);
        }
    }

    #[test]
    fn louvain_levels_increase_modularity(g in graph(20), seed in any::<u64>()) {
        let r = louvain(&g, seed).unwrap();
        let mut prev = modularity(&g, &Partition::singletons(g.node_count())).unwrap();
        for (p, &q) in r.levels.iter().zip(&r.level_modularity) {
            prop_assert!(q > prev);
            prop_assert!((modularity(&g, p).unwrap() - q).abs() < 1e-12);
            prev = q;
        }
        prop_assert_eq!(r.partition, louvain(&g, seed).unwrap().partition);
    }

    #[test]
    fn cnm_merges_down_to_components(g in graph(20)) {
        let r = cnm(&g).unwrap();
        prop_assert_eq!(r.merges.len(), g.node_count() - g.components().0);
        prop_assert_eq!(r.partition, cnm(&g).unwrap().partition);
    }

    #[test]
    fn condensation_preserves_modularity(g in graph(12), p in labels(12)) {
        let n = g.node_count();
        let p = Partition::from_labels(p.labels()[..n].iter().copied());
        let (h, map) = condense(&g, &p).unwrap();
        prop_assert_eq!(h.node_count(), p.q());
        prop_assert_eq!(map.len(), n);
        let q = modularity(&g, &p).unwrap();
        let qh = modularity(&h, &Partition::singletons(h.node_count())).unwrap();
        prop_assert!((q - qh).abs() < 1e-12);
    }

    #[test]
    fn nmi_is_symmetric_and_bounded((a, b) in partition_pair()) {
        let x = nmi(&a, &b).unwrap();
        let y = nmi(&b, &a).unwrap();
        prop_assert!((x - y).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&x));
        prop_assert_eq!(nmi(&a, &a).unwrap(), 1.0);
    }

    #[test]
    fn nmi_ignores_label_names((a, b) in partition_pair(), shift in 1usize..1000) {
        let renamed = Partition::from_labels(a.labels().iter().map(|&l| (l * 7919 + shift) % 100_003));
        prop_assert_eq!(&renamed, &a);
        prop_assert_eq!(nmi(&renamed, &b).unwrap(), nmi(&a, &b).unwrap());
    }

    #[test]
    fn partitions_are_canonical(raw in proptest::collection::vec(0u32..6, 1..30)) {
        let p = Partition::from_labels(raw.iter().copied());
        let q = Partition::from_labels(raw.iter().map(|&l| 100 - l));
        prop_assert_eq!(&p, &q);
        prop_assert_eq!(p.labels()[0], 1);
        prop_assert_eq!(p.sizes().iter().sum::<usize>(), raw.len());
    }

    #[test]
    fn planted_graphs_are_simple_and_labelled(q in 1usize..5, per in 2usize..10, seed in any::<u64>()) {
        let b = generate_planted_partition(q * per, q, 0.6, 0.1, seed).unwrap();
        prop_assert_eq!(b.truth.len(), q * per);
        prop_assert_eq!(b.truth.q(), q);
        prop_assert!(!b.graph.has_self_loops());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn lfr_like_graphs_respect_their_spec(seed in any::<u64>(), mu in 0.0f64..0.6) {
        let spec = BenchmarkSpec::new(600, 8.0, mu, seed);
        let b = generate_lfr_like(&spec).unwrap();
        prop_assert!(!b.graph.has_self_loops());
        let mut seen = HashSet::new();
        for (u, v, _) in b.graph.edges() {
            prop_assert_ne!(u, v);
            prop_assert!(seen.insert((u.min(v), u.max(v))));
        }
        prop_assert_eq!(b.truth.len(), 600);
        let sizes = b.truth.sizes();
        prop_assert_eq!(sizes.iter().sum::<usize>(), 600);
        prop_assert!(sizes.iter().all(|s| (30..=70).contains(s)));
        prop_assert!((b.mean_degree() - 8.0).abs() <= 0.05 * 8.0);
        prop_assert!((b.realized_mixing() - mu).abs() <= 0.05);
        let again = generate_lfr_like(&spec).unwrap();
        prop_assert_eq!(b.graph.edges().collect::<Vec<_>>(), again.graph.edges().collect::<Vec<_>>());
    }
}
