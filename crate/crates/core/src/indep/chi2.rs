use alloc::vec::Vec;

use super::{bin_uniform, check_pair, ContingencyTable, TestKind, TestResult, MIN_SAMPLES};
use crate::error::{Error, Result};
use crate::rng::RngSeed;
use crate::special::chi2_sf;

/// Uniform grid resolution per axis.
pub const DEFAULT_BINS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chi2Statistic {
    pub statistic: f64,
    pub df: usize,
}

/// Pearson's χ² statistic for independence.
///
/// All-zero rows and columns are dropped first; `df = (r' − 1)(c' − 1)` for
/// the reduced table. No continuity correction.
pub fn chi2_statistic(table: &ContingencyTable) -> Result<Chi2Statistic> {
    let row_totals = table.row_totals();
    let col_totals = table.col_totals();
    let rows: Vec<usize> = (0..table.rows()).filter(|&r| row_totals[r] > 0).collect();
    let cols: Vec<usize> = (0..table.cols()).filter(|&c| col_totals[c] > 0).collect();
    if rows.len() <= 1 || cols.len() <= 1 {
        return Err(Error::DegenerateTable {
            rows: rows.len(),
            cols: cols.len(),
        });
    }
    let n = table.total() as f64;
    let mut statistic = 0.0;
    for &r in &rows {
        for &c in &cols {
            let expected = row_totals[r] as f64 * col_totals[c] as f64 / n;
            let diff = table.get(r, c) as f64 - expected;
            statistic += diff * diff / expected;
        }
    }
    Ok(Chi2Statistic {
        statistic,
        df: (rows.len() - 1) * (cols.len() - 1),
    })
}

/// Upper-tail p-value of a χ² statistic; `df = 0` returns 1.
pub fn chi2_pvalue(statistic: f64, df: usize) -> f64 {
    chi2_sf(statistic, df)
}

/// Pearson's χ² independence test on a `bins × bins` uniform grid.
///
/// The seed is not used; it is accepted so both tests share a signature.
pub fn chi2_test(x: &[f64], y: &[f64], bins: usize, _seed: RngSeed) -> Result<TestResult> {
    check_pair(x, y, MIN_SAMPLES)?;
    let table = bin_uniform(x, y, bins)?;
    let (statistic, df, p_value) = match chi2_statistic(&table) {
        Ok(s) => (s.statistic, s.df, chi2_pvalue(s.statistic, s.df)),
        Err(Error::DegenerateTable { .. }) => (0.0, 0, 1.0),
        Err(e) => return Err(e),
    };
    Ok(TestResult {
        kind: TestKind::Chi2,
        statistic,
        p_value,
        df: Some(df),
        grids_evaluated: None,
        permutations: None,
    })
}
