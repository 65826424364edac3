use alloc::vec;
use alloc::vec::Vec;

use super::check_pair;
use crate::error::{Error, Result};

/// Joint counts of two discretised variables.
///
/// Rows index the first variable, columns the second. Edges hold the bin
/// boundaries (`rows + 1` and `cols + 1` strictly increasing values).
#[derive(Debug, Clone, PartialEq)]
pub struct ContingencyTable {
    rows: usize,
    cols: usize,
    counts: Vec<u64>,
    row_edges: Vec<f64>,
    col_edges: Vec<f64>,
    total: u64,
}

impl ContingencyTable {
    /// Builds a table from raw counts with unit-spaced placeholder edges.
    pub fn from_counts(counts: &[Vec<u64>]) -> Result<Self> {
        let rows = counts.len();
        let cols = counts.first().map_or(0, Vec::len);
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidParameter(
                "table needs at least one row and column",
            ));
        }
        if counts.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidParameter("ragged table"));
        }
        let flat: Vec<u64> = counts.iter().flatten().copied().collect();
        let row_edges = (0..=rows).map(|i| i as f64).collect();
        let col_edges = (0..=cols).map(|i| i as f64).collect();
        Ok(Self::from_parts(rows, cols, flat, row_edges, col_edges))
    }

    fn from_parts(
        rows: usize,
        cols: usize,
        counts: Vec<u64>,
        row_edges: Vec<f64>,
        col_edges: Vec<f64>,
    ) -> Self {
        let total = counts.iter().sum();
        Self {
            rows,
            cols,
            counts,
            row_edges,
            col_edges,
            total,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn get(&self, row: usize, col: usize) -> u64 {
        self.counts[row * self.cols + col]
    }

    pub fn row_edges(&self) -> &[f64] {
        &self.row_edges
    }

    pub fn col_edges(&self) -> &[f64] {
        &self.col_edges
    }

    pub fn row_totals(&self) -> Vec<u64> {
        self.counts
            .chunks(self.cols)
            .map(|r| r.iter().sum())
            .collect()
    }

    pub fn col_totals(&self) -> Vec<u64> {
        let mut totals = vec![0; self.cols];
        for row in self.counts.chunks(self.cols) {
            for (t, c) in totals.iter_mut().zip(row) {
                *t += c;
            }
        }
        totals
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        self.counts.chunks(self.cols).map(<[u64]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut counts = vec![0; self.counts.len()];
        for r in 0..self.rows {
            for c in 0..self.cols {
                counts[c * self.rows + r] = self.get(r, c);
            }
        }
        Self::from_parts(
            self.cols,
            self.rows,
            counts,
            self.col_edges.clone(),
            self.row_edges.clone(),
        )
    }
}

/// Per-axis discretisation: bin edges plus a function from value to bin.
struct AxisBins {
    edges: Vec<f64>,
    kind: AxisKind,
}

enum AxisKind {
    Uniform { min: f64, width: f64, bins: usize },
    Distinct(Vec<f64>),
}

impl AxisBins {
    fn new(values: &[f64], bins: usize) -> Result<Self> {
        let (min, max) = values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            });
        if max <= min {
            return Err(Error::ConstantVariable);
        }
        let mut distinct = values.to_vec();
        distinct.sort_by(f64::total_cmp);
        distinct.dedup();
        if distinct.len() < bins {
            let mut edges = Vec::with_capacity(distinct.len() + 1);
            edges.push(min);
            edges.extend(distinct.windows(2).map(|w| 0.5 * (w[0] + w[1])));
            edges.push(max);
            return Ok(Self {
                edges,
                kind: AxisKind::Distinct(distinct),
            });
        }
        let width = (max - min) / bins as f64;
        let mut edges: Vec<f64> = (0..bins).map(|i| min + width * i as f64).collect();
        edges.push(max);
        Ok(Self {
            edges,
            kind: AxisKind::Uniform { min, width, bins },
        })
    }

    fn len(&self) -> usize {
        self.edges.len() - 1
    }

    fn index(&self, v: f64) -> usize {
        match &self.kind {
            AxisKind::Uniform { min, width, bins } => {
                // right-closed last bin
                let i = libm::floor((v - min) / width);
                if i < 0.0 {
                    0
                } else {
                    (i as usize).min(bins - 1)
                }
            }
            AxisKind::Distinct(values) => values.partition_point(|&d| d < v),
        }
    }
}

/// Discretises each axis into `bins` equal-width intervals over its range.
///
/// An axis with fewer than `bins` distinct values gets one bin per distinct
/// value instead. A constant axis is an error.
pub fn bin_uniform(x: &[f64], y: &[f64], bins: usize) -> Result<ContingencyTable> {
    if bins < 2 {
        return Err(Error::InvalidParameter("bins must be at least 2"));
    }
    check_pair(x, y, 1)?;
    let xb = AxisBins::new(x, bins)?;
    let yb = AxisBins::new(y, bins)?;
    let (rows, cols) = (xb.len(), yb.len());
    let mut counts = vec![0u64; rows * cols];
    for (&a, &b) in x.iter().zip(y) {
        counts[xb.index(a) * cols + yb.index(b)] += 1;
    }
    Ok(ContingencyTable::from_parts(
        rows, cols, counts, xb.edges, yb.edges,
    ))
}

/// Bins `(x, y)` with explicit interior cut points; a value equal to a cut
/// goes to the lower bin.
pub fn bin_by_cuts(
    x: &[f64],
    y: &[f64],
    x_cuts: &[f64],
    y_cuts: &[f64],
) -> Result<ContingencyTable> {
    check_pair(x, y, 1)?;
    let axis_edges = |values: &[f64], cuts: &[f64]| -> Result<Vec<f64>> {
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut edges = Vec::with_capacity(cuts.len() + 2);
        edges.push(min.min(cuts.first().copied().unwrap_or(min)));
        edges.extend_from_slice(cuts);
        edges.push(max.max(cuts.last().copied().unwrap_or(max)));
        edges.dedup();
        if edges.windows(2).any(|w| w[0] >= w[1]) || edges.len() < 2 {
            return Err(Error::InvalidParameter(
                "cuts must be strictly increasing inside the data range",
            ));
        }
        Ok(edges)
    };
    let row_edges = axis_edges(x, x_cuts)?;
    let col_edges = axis_edges(y, y_cuts)?;
    let (rows, cols) = (x_cuts.len() + 1, y_cuts.len() + 1);
    let mut counts = vec![0u64; rows * cols];
    for (&a, &b) in x.iter().zip(y) {
        let r = x_cuts.partition_point(|&c| c < a);
        let c = y_cuts.partition_point(|&c| c < b);
        counts[r * cols + c] += 1;
    }
    Ok(ContingencyTable::from_parts(
        rows, cols, counts, row_edges, col_edges,
    ))
}
