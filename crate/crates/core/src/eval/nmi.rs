use crate::error::{Error, Result};
use crate::partition::Partition;

/// Sparse contingency table between two partitions of the same nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionTable {
    /// Nonzero cells `((a, b), N_ab)` with zero-based community indices, sorted.
    pub cells: Vec<((usize, usize), u64)>,
    pub row_sums: Vec<u64>,
    pub col_sums: Vec<u64>,
    pub n: u64,
}

impl ConfusionTable {
    pub fn new(p1: &Partition, p2: &Partition) -> Result<Self> {
        if p1.len() != p2.len() {
            return Err(Error::Mismatch {
                what: "partition lengths",
                expected: p1.len(),
                got: p2.len(),
            });
        }
        let mut pairs: Vec<(usize, usize)> = (0..p1.len()).map(|i| (p1.community(i), p2.community(i))).collect();
        pairs.sort_unstable();
        let mut cells: Vec<((usize, usize), u64)> = Vec::new();
        for p in pairs {
            match cells.last_mut() {
                Some((key, count)) if *key == p => *count += 1,
                _ => cells.push((p, 1)),
            }
        }
        let row_sums = p1.sizes().into_iter().map(|s| s as u64).collect();
        let col_sums = p2.sizes().into_iter().map(|s| s as u64).collect();
        Ok(ConfusionTable {
            cells,
            row_sums,
            col_sums,
            n: p1.len() as u64,
        })
    }
}

/// Normalized mutual information with the `2 I / (H1 + H2)` normalization:
///
/// `-2 sum_ab N_ab ln(N_ab N / (N_a N_b)) / (sum_a N_a ln(N_a / N) + sum_b N_b ln(N_b / N))`.
///
/// Two single-community partitions score 1; if only one is a single
/// community the score is 0.
pub fn nmi(p1: &Partition, p2: &Partition) -> Result<f64> {
    let t = ConfusionTable::new(p1, p2)?;
    if t.n == 0 {
        return Err(Error::InvalidParameter("nmi needs at least one node".into()));
    }
    if p1 == p2 {
        // exact agreement; avoids ln(a/b) + ln(b/a) rounding residue
        return Ok(1.0);
    }
    let n = t.n as f64;
    let entropy_term = |sums: &[u64]| -> f64 {
        sums.iter()
            .filter(|&&s| s > 0)
            .map(|&s| s as f64 * (s as f64 / n).ln())
            .sum()
    };
    let denom = entropy_term(&t.row_sums) + entropy_term(&t.col_sums);
    if denom == 0.0 {
        // both partitions are the single all-nodes community
        return Ok(1.0);
    }
    let numer: f64 = t
        .cells
        .iter()
        .map(|&((a, b), c)| {
            let c = c as f64;
            c * (c * n / (t.row_sums[a] as f64 * t.col_sums[b] as f64)).ln()
        })
        .sum();
    Ok((-2.0 * numer / denom).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_is_one() {
        let p = Partition::from_labels([1, 2, 2, 3, 3, 3, 1]);
        assert_eq!(nmi(&p, &p).unwrap(), 1.0);
    }

    #[test]
    fn relabeled_is_one() {
        let a = Partition::from_labels([1, 1, 1, 1, 2, 2, 2, 2]);
        let b = Partition::from_labels([2, 2, 2, 2, 1, 1, 1, 1]);
        assert_eq!(nmi(&a, &b).unwrap(), 1.0);
    }

    #[test]
    fn independent_is_zero() {
        let a = Partition::from_labels([1, 1, 2, 2]);
        let b = Partition::from_labels([1, 2, 1, 2]);
        assert_eq!(nmi(&a, &b).unwrap(), 0.0);
    }

    #[test]
    fn trivial_partitions() {
        let whole = Partition::whole(5);
        assert_eq!(nmi(&whole, &whole).unwrap(), 1.0);
        let split = Partition::from_labels([1, 1, 2, 2, 2]);
        assert_eq!(nmi(&whole, &split).unwrap(), 0.0);
        assert_eq!(nmi(&split, &whole).unwrap(), 0.0);
        assert_eq!(nmi(&Partition::whole(1), &Partition::whole(1)).unwrap(), 1.0);
    }

    #[test]
    fn length_mismatch() {
        assert!(matches!(
            nmi(&Partition::whole(3), &Partition::whole(4)),
            Err(Error::Mismatch { .. })
        ));
    }

    #[test]
    fn confusion_sums() {
        let a = Partition::from_labels([1, 1, 2, 2, 3]);
        let b = Partition::from_labels([1, 2, 2, 2, 1]);
        let t = ConfusionTable::new(&a, &b).unwrap();
        assert_eq!(t.cells.iter().map(|c| c.1).sum::<u64>(), 5);
        assert_eq!(t.row_sums, vec![2, 2, 1]);
        assert_eq!(t.col_sums, vec![2, 3]);
        assert_eq!(t.cells, vec![((0, 0), 1), ((0, 1), 1), ((1, 1), 2), ((2, 0), 1)]);
    }
}
