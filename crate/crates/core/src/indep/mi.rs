use alloc::vec::Vec;

use super::ContingencyTable;

/// Plug-in mutual information of a contingency table, in nats.
///
/// Evaluated from integer counts as
/// `ln n + (Σ n_ij ln n_ij − Σ n_i ln n_i − Σ n_j ln n_j) / n`, which is the
/// probability-weighted log ratio summed over non-empty cells. Tiny negative
/// rounding residue is clamped to zero.
///
/// Every sum runs over sorted counts, so the result is bitwise identical for
/// a table and its transpose.
pub fn mutual_information(table: &ContingencyTable) -> f64 {
    let n = table.total();
    if n == 0 {
        return 0.0;
    }
    let joint = sorted_nlogn_sum(
        (0..table.rows())
            .flat_map(|r| (0..table.cols()).map(move |c| (r, c)))
            .map(|(r, c)| table.get(r, c)),
    );
    let rows = sorted_nlogn_sum(table.row_totals());
    let cols = sorted_nlogn_sum(table.col_totals());
    let nf = n as f64;
    let mi = libm::log(nf) + (joint - (rows + cols)) / nf;
    mi.max(0.0)
}

fn sorted_nlogn_sum(counts: impl IntoIterator<Item = u64>) -> f64 {
    let mut counts: Vec<u64> = counts.into_iter().filter(|&c| c > 1).collect();
    counts.sort_unstable();
    counts.iter().map(|&c| c as f64 * libm::log(c as f64)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    /// Direct probability-space summation, kept independent of the
    /// count-based formula above.
    fn oracle(counts: &[Vec<u64>]) -> f64 {
        let n: u64 = counts.iter().flatten().sum();
        let n = n as f64;
        let rows: Vec<f64> = counts
            .iter()
            .map(|r| r.iter().sum::<u64>() as f64 / n)
            .collect();
        let cols: Vec<f64> = (0..counts[0].len())
            .map(|j| counts.iter().map(|r| r[j]).sum::<u64>() as f64 / n)
            .collect();
        let mut mi = 0.0;
        for (i, row) in counts.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                if c > 0 {
                    let p = c as f64 / n;
                    mi += p * (p / (rows[i] * cols[j])).ln();
                }
            }
        }
        mi
    }

    #[test]
    fn independent_table() {
        let t = ContingencyTable::from_counts(&[vec![5, 5], vec![5, 5]]).unwrap();
        assert_eq!(mutual_information(&t), 0.0);
    }

    #[test]
    fn perfect_association() {
        let t = ContingencyTable::from_counts(&[vec![10, 0], vec![0, 10]]).unwrap();
        assert!((mutual_information(&t) - core::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn matches_direct_sum() {
        let counts = vec![vec![4, 1], vec![1, 4]];
        let t = ContingencyTable::from_counts(&counts).unwrap();
        assert!((mutual_information(&t) - oracle(&counts)).abs() < 1e-12);
    }

    #[test]
    fn empty_table_is_zero() {
        let t = ContingencyTable::from_counts(&[vec![0, 0], vec![0, 0]]).unwrap();
        assert_eq!(mutual_information(&t), 0.0);
    }

    proptest::proptest! {
        #[test]
        fn symmetric_and_bounded(
            rows in 1usize..8,
            cols in 1usize..8,
            cells in proptest::collection::vec(0u64..50, 64),
        ) {
            let counts: Vec<Vec<u64>> = (0..rows).map(|r| cells[r * 8..r * 8 + cols].to_vec()).collect();
            let t = ContingencyTable::from_counts(&counts).unwrap();
            let mi = mutual_information(&t);
            proptest::prop_assert_eq!(mi, mutual_information(&t.transpose()));
            proptest::prop_assert!(mi >= 0.0);
            let bound = (rows.min(cols) as f64).ln();
            proptest::prop_assert!(mi <= bound + 1e-12);
            if counts.iter().flatten().any(|&c| c > 0) {
                proptest::prop_assert!((mi - oracle(&counts).max(0.0)).abs() < 1e-12);
            }
        }
    }
}
