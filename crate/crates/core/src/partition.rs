//! Community assignments.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// A label per node, normalized to `1..=q` in order of first appearance.
///
/// Because of the normalization, `==` compares the induced equivalence
/// relations: two partitions that differ only by a relabeling are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    labels: Vec<usize>,
    q: usize,
}

impl Partition {
    pub fn from_labels<T, I>(labels: I) -> Self
    where
        T: std::hash::Hash + Eq,
        I: IntoIterator<Item = T>,
    {
        let mut map: HashMap<T, usize> = HashMap::new();
        let labels: Vec<usize> = labels
            .into_iter()
            .map(|l| {
                let next = map.len() + 1;
                *map.entry(l).or_insert(next)
            })
            .collect();
        let q = map.len();
        Partition { labels, q }
    }

    /// Every node in its own community.
    pub fn singletons(n: usize) -> Self {
        Partition {
            labels: (1..=n).collect(),
            q: n,
        }
    }

    /// All nodes in one community.
    pub fn whole(n: usize) -> Self {
        Partition {
            labels: vec![1; n],
            q: usize::from(n > 0),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Number of communities.
    pub fn q(&self) -> usize {
        self.q
    }

    /// Labels in `1..=q`.
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, i: NodeId) -> usize {
        self.labels[i]
    }

    /// Zero-based community index of node `i`.
    pub fn community(&self, i: NodeId) -> usize {
        self.labels[i] - 1
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.q];
        for &l in &self.labels {
            sizes[l - 1] += 1;
        }
        sizes
    }

    pub fn members(&self) -> Vec<Vec<NodeId>> {
        let mut out = vec![Vec::new(); self.q];
        for (i, &l) in self.labels.iter().enumerate() {
            out[l - 1].push(i);
        }
        out
    }

    /// Composes a node -> coarse-node map with a partition of the coarse nodes.
    pub fn flatten(&self, coarse: &Partition) -> Partition {
        Partition::from_labels(self.labels.iter().map(|&l| coarse.label(l - 1)))
    }

    /// Reads `node_token community_id` lines, resolving tokens against `g`.
    /// Every node of `g` must appear exactly once.
    pub fn read<R: BufRead>(reader: R, g: &Graph) -> Result<Partition> {
        let index = g.name_index();
        let mut labels: Vec<Option<String>> = vec![None; g.node_count()];
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = lineno + 1;
            let content = line.split('#').next().unwrap_or("");
            let fields: Vec<&str> = content.split_whitespace().collect();
            if fields.is_empty() {
                continue;
            }
            if fields.len() != 2 {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("expected `node community`, got {} fields", fields.len()),
                });
            }
            let &node = index.get(fields[0]).ok_or_else(|| Error::Parse {
                line: lineno,
                msg: format!("unknown node `{}`", fields[0]),
            })?;
            if labels[node].replace(fields[1].to_string()).is_some() {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("node `{}` assigned twice", fields[0]),
                });
            }
        }
        let covered = labels.iter().filter(|l| l.is_some()).count();
        if covered != g.node_count() {
            return Err(Error::Mismatch {
                what: "partition coverage",
                expected: g.node_count(),
                got: covered,
            });
        }
        Ok(Partition::from_labels(labels.into_iter().flatten()))
    }

    /// Writes `node_token community_id` lines, node order, ids `1..=q`.
    pub fn write<W: Write>(&self, mut out: W, g: &Graph) -> Result<()> {
        if self.len() != g.node_count() {
            return Err(Error::Mismatch {
                what: "partition length",
                expected: g.node_count(),
                got: self.len(),
            });
        }
        for (i, &l) in self.labels.iter().enumerate() {
            writeln!(out, "{} {}", g.node_name(i), l)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_to_contiguous_labels() {
        let p = Partition::from_labels([7, 7, 3, 9, 3]);
        assert_eq!(p.labels(), &[1, 1, 2, 3, 2]);
        assert_eq!(p.q(), 3);
        assert_eq!(p.sizes(), vec![2, 2, 1]);
    }

    #[test]
    fn equality_is_label_permutation_invariant() {
        let a = Partition::from_labels([1, 1, 2, 2]);
        let b = Partition::from_labels(["y", "y", "x", "x"]);
        let c = Partition::from_labels([1, 2, 1, 2]);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn flatten_composes_levels() {
        let level0 = Partition::from_labels([1, 1, 2, 2, 3]);
        let level1 = Partition::from_labels([1, 2, 1]);
        assert_eq!(level0.flatten(&level1).labels(), &[1, 1, 2, 2, 1]);
    }

    #[test]
    fn file_round_trip() {
        let g = Graph::load_edge_list("x y\ny z\nz w".as_bytes(), false).unwrap();
        let p = Partition::from_labels([5, 5, 2, 2]);
        let mut buf = Vec::new();
        p.write(&mut buf, &g).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "x 1\ny 1\nz 2\nw 2\n");
        assert_eq!(Partition::read(buf.as_slice(), &g).unwrap(), p);
    }

    #[test]
    fn read_rejects_bad_files() {
        let g = Graph::load_edge_list("x y\ny z".as_bytes(), false).unwrap();
        assert!(matches!(
            Partition::read("x 1\ny 1".as_bytes(), &g),
            Err(Error::Mismatch { .. })
        ));
        assert!(matches!(
            Partition::read("x 1\ny 1\nq 2".as_bytes(), &g),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            Partition::read("x 1\nx 2".as_bytes(), &g),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
