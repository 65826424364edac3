//! Total Information Coefficient.
//!
//! For every grid resolution `(k, l)` with `k·l ≤ B` the best achievable
//! mutual information `MI*(k, l)` is searched for: one axis is split into
//! rank-based equal-frequency parts, and the other axis is cut optimally by
//! dynamic programming over candidate boundaries. Both axis roles are tried
//! and the larger value kept. The statistic is
//! `Σ MI*(k, l) / ln min(k, l)` over all resolutions.
//!
//! Only ranks and ties enter the computation, so the statistic is exactly
//! invariant under strictly increasing transforms of either variable.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use rand::seq::SliceRandom;

use super::{check_pair, nlogn_table, TestKind, TestResult, MIN_SAMPLES};
use crate::error::{Error, Result};
use crate::rng::RngSeed;

pub const DEFAULT_PERMUTATIONS: usize = 100;
pub const MIN_PERMUTATIONS: usize = 19;

/// Smallest cell budget; admits the 2×2 grid.
const MIN_CELL_BUDGET: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TicConfig {
    /// The cell budget is `B = floor(n^max_cells_exponent)` (at least 4).
    pub max_cells_exponent: f64,
    /// Candidate cut points on the optimised axis are limited to
    /// `max_clumps_factor · k` superclumps when optimising `k` parts.
    pub max_clumps_factor: usize,
}

impl Default for TicConfig {
    fn default() -> Self {
        Self {
            max_cells_exponent: 0.6,
            max_clumps_factor: 5,
        }
    }
}

impl TicConfig {
    pub fn cell_budget(&self, n: usize) -> usize {
        let b = libm::floor(libm::pow(n as f64, self.max_cells_exponent));
        (b as usize).max(MIN_CELL_BUDGET)
    }

    fn validate(&self) -> Result<()> {
        if !(self.max_cells_exponent > 0.0 && self.max_cells_exponent < 1.0) {
            return Err(Error::InvalidParameter(
                "max_cells_exponent must lie in (0, 1)",
            ));
        }
        if self.max_clumps_factor == 0 {
            return Err(Error::InvalidParameter(
                "max_clumps_factor must be positive",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TicStatistic {
    pub statistic: f64,
    /// Number of `(k, l)` resolutions in the sum.
    pub grids_evaluated: usize,
}

/// Best mutual information found at one resolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridScore {
    /// Parts on the x axis (`k`).
    pub columns: usize,
    /// Parts on the y axis (`l`).
    pub rows: usize,
    pub mi: f64,
}

/// An axis-aligned grid: `columns` parts along x, `rows` parts along y.
///
/// The cut vectors hold interior cut points only and may be shorter than
/// `parts − 1` when ties or the optimum leave fewer distinct boundaries.
#[derive(Debug, Clone, PartialEq)]
pub struct GridPartition {
    pub x_cuts: Vec<f64>,
    pub y_cuts: Vec<f64>,
    pub columns: usize,
    pub rows: usize,
}

/// Sort order and tie structure of one variable.
struct Axis {
    order: Vec<u32>,
    /// Exclusive end position (in `order`) of each tie group.
    group_ends: Vec<u32>,
    sorted: Vec<f64>,
}

impl Axis {
    fn new(values: &[f64]) -> Self {
        let mut order: Vec<u32> = (0..values.len() as u32).collect();
        // finite values, so partial_cmp never fails; -0.0 and 0.0 tie
        order.sort_by(|&a, &b| {
            values[a as usize]
                .partial_cmp(&values[b as usize])
                .unwrap_or(Ordering::Equal)
        });
        let sorted: Vec<f64> = order.iter().map(|&i| values[i as usize]).collect();
        let mut group_ends = Vec::new();
        for p in 1..sorted.len() {
            if sorted[p] != sorted[p - 1] {
                group_ends.push(p as u32);
            }
        }
        group_ends.push(sorted.len() as u32);
        Self {
            order,
            group_ends,
            sorted,
        }
    }

    fn len(&self) -> usize {
        self.order.len()
    }

    fn groups(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let mut start = 0usize;
        self.group_ends.iter().map(move |&end| {
            let range = (start, end as usize);
            start = end as usize;
            range
        })
    }

    /// Rank-based split into at most `parts` groups of near-equal size,
    /// never separating tied values. Returns the part label of every
    /// original index and the number of parts used.
    fn equipartition(&self, parts: usize) -> (Vec<u16>, usize) {
        let sizes: Vec<usize> = self.groups().map(|(s, e)| e - s).collect();
        let assignment = equipartition_sizes(&sizes, self.len(), parts);
        let mut labels = vec![0u16; self.len()];
        for ((start, end), &part) in self.groups().zip(&assignment) {
            for &i in &self.order[start..end] {
                labels[i as usize] = part as u16;
            }
        }
        let used = assignment.last().map_or(0, |&p| p + 1);
        (labels, used)
    }

    fn cut_at(&self, position: usize) -> f64 {
        0.5 * (self.sorted[position - 1] + self.sorted[position])
    }
}

/// Greedy equal-frequency assignment of consecutive items to parts.
///
/// An item starts a new part when adding it would move the current part
/// further from its target size than leaving it out. Targets are recomputed
/// from what remains after each part closes.
struct Equipartitioner {
    parts: usize,
    total: usize,
    part: usize,
    current: usize,
    assigned: usize,
    desired: f64,
}

impl Equipartitioner {
    fn new(total: usize, parts: usize) -> Self {
        Self {
            parts,
            total,
            part: 0,
            current: 0,
            assigned: 0,
            desired: total as f64 / parts as f64,
        }
    }

    /// Places the next item and returns whether it opened a new part.
    #[inline]
    fn push(&mut self, size: usize) -> bool {
        let mut opened = false;
        if self.current > 0 && self.part + 1 < self.parts {
            let with = libm::fabs((self.current + size) as f64 - self.desired);
            let without = libm::fabs(self.current as f64 - self.desired);
            if with >= without {
                self.part += 1;
                self.assigned += self.current;
                self.current = 0;
                self.desired =
                    (self.total - self.assigned) as f64 / (self.parts - self.part) as f64;
                opened = true;
            }
        }
        self.current += size;
        opened
    }
}

fn equipartition_sizes(sizes: &[usize], total: usize, parts: usize) -> Vec<usize> {
    let mut eq = Equipartitioner::new(total, parts);
    sizes
        .iter()
        .map(|&size| {
            eq.push(size);
            eq.part
        })
        .collect()
}

/// Reusable buffers for the column optimisation.
#[derive(Default)]
struct Scratch {
    sorted_labels: Vec<u16>,
    clump_ends: Vec<u32>,
    clump_sizes: Vec<usize>,
    bounds: Vec<u32>,
    cum: Vec<u32>,
    weights: Vec<f64>,
    prev: Vec<f64>,
    cur: Vec<f64>,
    argmax: Vec<u32>,
}

/// Optimal cuts of `axis` into `1..=max_parts` parts against a fixed
/// labelling of the other axis.
///
/// `scratch.sorted_labels` holds the label of each point in `axis` sort
/// order. On return `mi[t]` is the best mutual information with at most `t`
/// parts (`mi[0]` unused). When `keep_path` is set, `scratch.argmax` keeps
/// the back-pointers for [`Scratch::path`].
#[allow(clippy::too_many_arguments)]
fn optimize_axis(
    axis: &Axis,
    labels: usize,
    max_parts: usize,
    clump_cap: usize,
    nlogn: &[f64],
    scratch: &mut Scratch,
    mi: &mut Vec<f64>,
    keep_path: bool,
) {
    let n = axis.len();
    let q = labels;
    let sl = &scratch.sorted_labels;

    // Clumps: tie groups, with runs of single-label groups sharing a label
    // merged. Optimal cuts never fall inside such a run.
    scratch.clump_ends.clear();
    scratch.clump_sizes.clear();
    let mut last_pure: Option<u16> = None;
    let mut start = 0usize;
    for &end in &axis.group_ends {
        let end = end as usize;
        let label = sl[start];
        let pure = sl[start + 1..end].iter().all(|&l| l == label);
        if pure && last_pure == Some(label) {
            *scratch.clump_ends.last_mut().unwrap() = end as u32;
            *scratch.clump_sizes.last_mut().unwrap() += end - start;
        } else {
            scratch.clump_ends.push(end as u32);
            scratch.clump_sizes.push(end - start);
        }
        last_pure = pure.then_some(label);
        start = end;
    }

    // Superclumps when there are too many candidates.
    scratch.bounds.clear();
    scratch.bounds.push(0);
    if scratch.clump_ends.len() > clump_cap {
        let mut eq = Equipartitioner::new(n, clump_cap);
        for (i, &size) in scratch.clump_sizes.iter().enumerate() {
            if eq.push(size) {
                scratch.bounds.push(scratch.clump_ends[i - 1]);
            }
        }
        scratch.bounds.push(n as u32);
    } else {
        scratch.bounds.extend_from_slice(&scratch.clump_ends);
    }
    let c = scratch.bounds.len() - 1;

    // cum[s*q + r]: points with label r before boundary s.
    scratch.cum.clear();
    scratch.cum.resize((c + 1) * q, 0);
    for s in 1..=c {
        let (lo, hi) = (scratch.bounds[s - 1] as usize, scratch.bounds[s] as usize);
        let (before, after) = scratch.cum.split_at_mut(s * q);
        after[..q].copy_from_slice(&before[(s - 1) * q..]);
        for &l in &sl[lo..hi] {
            after[l as usize] += 1;
        }
    }

    // weights[s*(c+1) + i] = Σ_r m_r ln m_r − m ln m for the part (i, s],
    // laid out so the DP scans contiguous memory.
    let stride = c + 1;
    // only the lower triangle is written and read
    if scratch.weights.len() < stride * stride {
        scratch.weights.resize(stride * stride, 0.0);
    }
    for s in 1..=c {
        let cs = &scratch.cum[s * q..(s + 1) * q];
        let bs = scratch.bounds[s];
        let row = &mut scratch.weights[s * stride..s * stride + s];
        for (i, slot) in row.iter_mut().enumerate() {
            let ci = &scratch.cum[i * q..(i + 1) * q];
            let mut acc = -nlogn[(bs - scratch.bounds[i]) as usize];
            for (a, b) in cs.iter().zip(ci) {
                acc += nlogn[(a - b) as usize];
            }
            *slot = acc;
        }
    }

    // Fixed part of the objective: n ln n − Σ_r n_r ln n_r.
    let totals = &scratch.cum[c * q..];
    let base = nlogn[n] - totals.iter().map(|&t| nlogn[t as usize]).sum::<f64>();
    let nf = n as f64;

    mi.clear();
    mi.resize(max_parts + 1, 0.0);
    let w = &scratch.weights;
    scratch.prev.clear();
    scratch.prev.extend((0..=c).map(|s| {
        if s == 0 {
            f64::NEG_INFINITY
        } else {
            w[s * stride]
        }
    }));
    if keep_path {
        scratch.argmax.clear();
        scratch.argmax.resize((max_parts + 1) * stride, 0);
    }
    mi[1] = (scratch.prev[c] + base) / nf;
    scratch.cur.resize(c + 1, f64::NEG_INFINITY);
    for t in 2..=max_parts {
        if t > c {
            mi[t] = mi[t - 1];
            continue;
        }
        for s in 0..t {
            scratch.cur[s] = f64::NEG_INFINITY;
        }
        for s in t..=c {
            let prev = &scratch.prev[t - 1..s];
            let row = &w[s * stride + t - 1..s * stride + s];
            if keep_path {
                let mut best = f64::NEG_INFINITY;
                let mut arg = 0;
                for (j, (p, x)) in prev.iter().zip(row).enumerate() {
                    let v = p + x;
                    if v > best {
                        best = v;
                        arg = j;
                    }
                }
                scratch.cur[s] = best;
                scratch.argmax[t * stride + s] = (t - 1 + arg) as u32;
            } else {
                scratch.cur[s] = max_of_sums(prev, row);
            }
        }
        core::mem::swap(&mut scratch.prev, &mut scratch.cur);
        let value = (scratch.prev[c] + base) / nf;
        mi[t] = if value > mi[t - 1] { value } else { mi[t - 1] };
    }
}

/// `max_i a[i] + b[i]`. Four independent lanes break the dependency chain;
/// max is exact, so lane order does not change the result.
#[inline]
fn max_of_sums(a: &[f64], b: &[f64]) -> f64 {
    #[inline(always)]
    fn pick(m: f64, v: f64) -> f64 {
        if v > m {
            v
        } else {
            m
        }
    }
    let mut lanes = [f64::NEG_INFINITY; 4];
    let chunks_a = a.chunks_exact(4);
    let chunks_b = b.chunks_exact(4);
    let (rest_a, rest_b) = (chunks_a.remainder(), chunks_b.remainder());
    for (ca, cb) in chunks_a.zip(chunks_b) {
        for k in 0..4 {
            lanes[k] = pick(lanes[k], ca[k] + cb[k]);
        }
    }
    let mut m = pick(pick(lanes[0], lanes[1]), pick(lanes[2], lanes[3]));
    for (x, y) in rest_a.iter().zip(rest_b) {
        m = pick(m, x + y);
    }
    m
}

impl Scratch {
    /// Sorted-order cut positions of the optimal partition into exactly
    /// `parts` parts (requires `keep_path`).
    fn path(&self, parts: usize) -> Vec<usize> {
        let c = self.bounds.len() - 1;
        let stride = c + 1;
        let mut cuts = Vec::new();
        let mut s = c;
        for t in (2..=parts).rev() {
            let i = self.argmax[t * stride + s] as usize;
            cuts.push(self.bounds[i] as usize);
            s = i;
        }
        cuts.reverse();
        cuts
    }
}

/// Precomputed per-variable state shared by the observed statistic and
/// every permutation replicate.
struct TicEngine {
    x: Axis,
    y: Axis,
    budget: usize,
    clumps_factor: usize,
    /// Equipartition labels of y for l = 2..=B/2, indexed by original point.
    y_parts: Vec<(Vec<u16>, usize)>,
    x_parts: Vec<(Vec<u16>, usize)>,
    nlogn: Vec<f64>,
}

impl TicEngine {
    fn new(x: &[f64], y: &[f64], config: &TicConfig) -> Result<Self> {
        config.validate()?;
        check_pair(x, y, MIN_SAMPLES)?;
        let n = x.len();
        let x = Axis::new(x);
        let y = Axis::new(y);
        if x.group_ends.len() < 2 || y.group_ends.len() < 2 {
            return Err(Error::ConstantVariable);
        }
        let budget = config.cell_budget(n);
        let max_split = budget / 2;
        let y_parts = (2..=max_split).map(|l| y.equipartition(l)).collect();
        let x_parts = (2..=max_split).map(|k| x.equipartition(k)).collect();
        Ok(Self {
            x,
            y,
            budget,
            clumps_factor: config.max_clumps_factor,
            y_parts,
            x_parts,
            nlogn: nlogn_table(n),
        })
    }

    /// Best MI per resolution, `best[k * (B + 1) + l]`, for the pairing in
    /// which point `i` takes the y value of point `perm[i]`.
    fn characteristic(
        &self,
        perm: Option<(&[u32], &[u32])>,
        scratch: &mut Scratch,
        best: &mut Vec<f64>,
    ) {
        let b = self.budget;
        let stride = b + 1;
        best.clear();
        best.resize(stride * stride, 0.0);
        let mut mi = Vec::new();

        // y equipartitioned into l rows, x optimised into k columns.
        for l in 2..=b / 2 {
            let (labels, used) = &self.y_parts[l - 2];
            let kmax = b / l;
            scratch.sorted_labels.clear();
            match perm {
                None => scratch
                    .sorted_labels
                    .extend(self.x.order.iter().map(|&i| labels[i as usize])),
                Some((forward, _)) => scratch.sorted_labels.extend(
                    self.x
                        .order
                        .iter()
                        .map(|&i| labels[forward[i as usize] as usize]),
                ),
            }
            optimize_axis(
                &self.x,
                *used,
                kmax,
                self.clumps_factor * kmax,
                &self.nlogn,
                scratch,
                &mut mi,
                false,
            );
            for k in 2..=kmax {
                let cell = &mut best[k * stride + l];
                *cell = cell.max(mi[k]);
            }
        }

        // x equipartitioned into k columns, y optimised into l rows.
        for k in 2..=b / 2 {
            let (labels, used) = &self.x_parts[k - 2];
            let lmax = b / k;
            scratch.sorted_labels.clear();
            match perm {
                None => scratch
                    .sorted_labels
                    .extend(self.y.order.iter().map(|&j| labels[j as usize])),
                Some((_, inverse)) => scratch.sorted_labels.extend(
                    self.y
                        .order
                        .iter()
                        .map(|&j| labels[inverse[j as usize] as usize]),
                ),
            }
            optimize_axis(
                &self.y,
                *used,
                lmax,
                self.clumps_factor * lmax,
                &self.nlogn,
                scratch,
                &mut mi,
                false,
            );
            for l in 2..=lmax {
                let cell = &mut best[k * stride + l];
                *cell = cell.max(mi[l]);
            }
        }
    }

    fn statistic(
        &self,
        perm: Option<(&[u32], &[u32])>,
        scratch: &mut Scratch,
        best: &mut Vec<f64>,
    ) -> TicStatistic {
        self.characteristic(perm, scratch, best);
        let b = self.budget;
        let mut statistic = 0.0;
        let mut grids_evaluated = 0;
        for k in 2..=b / 2 {
            for l in 2..=b / k {
                statistic += best[k * (b + 1) + l] / libm::log(k.min(l) as f64);
                grids_evaluated += 1;
            }
        }
        TicStatistic {
            statistic,
            grids_evaluated,
        }
    }
}

/// TIC statistic of `(x, y)`.
pub fn tic_statistic(x: &[f64], y: &[f64], config: &TicConfig) -> Result<TicStatistic> {
    let engine = TicEngine::new(x, y, config)?;
    Ok(engine.statistic(None, &mut Scratch::default(), &mut Vec::new()))
}

/// Best mutual information at every resolution `(k, l)` with `k·l ≤ B`,
/// ordered by `k` then `l`.
pub fn characteristic(x: &[f64], y: &[f64], config: &TicConfig) -> Result<Vec<GridScore>> {
    let engine = TicEngine::new(x, y, config)?;
    let mut best = Vec::new();
    engine.characteristic(None, &mut Scratch::default(), &mut best);
    let b = engine.budget;
    let mut out = Vec::new();
    for k in 2..=b / 2 {
        for l in 2..=b / k {
            out.push(GridScore {
                columns: k,
                rows: l,
                mi: best[k * (b + 1) + l],
            });
        }
    }
    Ok(out)
}

/// The grid attaining `MI*(columns, rows)` together with its mutual
/// information.
pub fn optimal_grid(
    x: &[f64],
    y: &[f64],
    columns: usize,
    rows: usize,
    config: &TicConfig,
) -> Result<(GridPartition, f64)> {
    if columns < 2 || rows < 2 {
        return Err(Error::InvalidParameter(
            "grid needs at least 2 rows and 2 columns",
        ));
    }
    let engine = TicEngine::new(x, y, config)?;
    let mut scratch = Scratch::default();
    let mut mi = Vec::new();

    // y fixed, x optimised
    let (labels, used) = engine.y.equipartition(rows);
    scratch.sorted_labels.clear();
    scratch
        .sorted_labels
        .extend(engine.x.order.iter().map(|&i| labels[i as usize]));
    // same candidate cuts as the full characteristic search
    let factor = config.max_clumps_factor;
    let cap_x = factor * columns.max(engine.budget / rows);
    let cap_y = factor * rows.max(engine.budget / columns);
    optimize_axis(
        &engine.x,
        used,
        columns,
        cap_x,
        &engine.nlogn,
        &mut scratch,
        &mut mi,
        true,
    );
    let mi_x = mi[columns];
    let parts_x = (1..=columns).find(|&t| mi[t] == mi_x).unwrap_or(columns);
    let x_cuts_opt: Vec<f64> = scratch
        .path(parts_x)
        .into_iter()
        .map(|p| engine.x.cut_at(p))
        .collect();
    let y_cuts_eq = equipartition_cuts(&engine.y, &labels);

    // x fixed, y optimised
    let (labels, used) = engine.x.equipartition(columns);
    scratch.sorted_labels.clear();
    scratch
        .sorted_labels
        .extend(engine.y.order.iter().map(|&j| labels[j as usize]));
    optimize_axis(
        &engine.y,
        used,
        rows,
        cap_y,
        &engine.nlogn,
        &mut scratch,
        &mut mi,
        true,
    );
    let mi_y = mi[rows];

    if mi_x >= mi_y {
        Ok((
            GridPartition {
                x_cuts: x_cuts_opt,
                y_cuts: y_cuts_eq,
                columns,
                rows,
            },
            mi_x,
        ))
    } else {
        let parts_y = (1..=rows).find(|&t| mi[t] == mi_y).unwrap_or(rows);
        let y_cuts = scratch
            .path(parts_y)
            .into_iter()
            .map(|p| engine.y.cut_at(p))
            .collect();
        Ok((
            GridPartition {
                x_cuts: equipartition_cuts(&engine.x, &labels),
                y_cuts,
                columns,
                rows,
            },
            mi_y,
        ))
    }
}

fn equipartition_cuts(axis: &Axis, labels: &[u16]) -> Vec<f64> {
    (1..axis.len())
        .filter(|&p| labels[axis.order[p] as usize] != labels[axis.order[p - 1] as usize])
        .map(|p| axis.cut_at(p))
        .collect()
}

/// TIC independence test with a permutation p-value.
///
/// Replicate `j` shuffles `y` with the generator `seed.substream(j)`;
/// `p = (1 + #{replicate ≥ observed}) / (1 + permutations)`.
pub fn tic_test(
    x: &[f64],
    y: &[f64],
    permutations: usize,
    seed: RngSeed,
    config: &TicConfig,
) -> Result<TestResult> {
    if permutations < MIN_PERMUTATIONS {
        return Err(Error::InvalidParameter(
            "at least 19 permutations are required",
        ));
    }
    let engine = TicEngine::new(x, y, config)?;
    let mut scratch = Scratch::default();
    let mut best = Vec::new();
    let observed = engine.statistic(None, &mut scratch, &mut best);

    let n = x.len();
    let mut forward: Vec<u32> = (0..n as u32).collect();
    let mut inverse = vec![0u32; n];
    let mut exceed = 0usize;
    for j in 0..permutations {
        forward
            .iter_mut()
            .enumerate()
            .for_each(|(i, v)| *v = i as u32);
        forward.shuffle(&mut seed.substream(j as u64));
        for (i, &f) in forward.iter().enumerate() {
            inverse[f as usize] = i as u32;
        }
        let replicate = engine.statistic(Some((&forward, &inverse)), &mut scratch, &mut best);
        if replicate.statistic >= observed.statistic {
            exceed += 1;
        }
    }
    Ok(TestResult {
        kind: TestKind::Tic,
        statistic: observed.statistic,
        p_value: (1 + exceed) as f64 / (1 + permutations) as f64,
        df: None,
        grids_evaluated: Some(observed.grids_evaluated),
        permutations: Some(permutations),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indep::{bin_by_cuts, mutual_information};
    use rand::Rng;

    fn uniform(seed: u64, n: usize) -> Vec<f64> {
        let mut rng = RngSeed(seed).rng();
        (0..n).map(|_| rng.gen()).collect()
    }

    #[test]
    fn equipartition_balances_sizes() {
        assert_eq!(
            equipartition_sizes(&[1; 10], 10, 2),
            vec![0, 0, 0, 0, 0, 1, 1, 1, 1, 1]
        );
        assert_eq!(
            equipartition_sizes(&[1; 9], 9, 3),
            vec![0, 0, 0, 1, 1, 1, 2, 2, 2]
        );
        // a large tie group is never split
        assert_eq!(
            equipartition_sizes(&[1, 6, 1, 1, 1], 10, 2),
            vec![0, 0, 1, 1, 1]
        );
        // never more parts than requested
        assert!(equipartition_sizes(&[1; 7], 7, 3).iter().all(|&p| p < 3));
    }

    #[test]
    fn axis_tie_groups() {
        let a = Axis::new(&[3.0, 1.0, 3.0, 2.0, 0.0, -0.0]);
        assert_eq!(a.group_ends, vec![2, 3, 4, 6]);
        let (labels, used) = a.equipartition(2);
        assert_eq!(used, 2);
        assert_eq!(labels[0], labels[2]);
        assert_eq!(labels[4], labels[5]);
    }

    #[test]
    fn identity_saturates_every_grid() {
        // 60 is divisible by every min(k, l) ≤ 3 that fits B = 11
        let x: Vec<f64> = uniform(1, 60);
        let s = tic_statistic(&x, &x, &TicConfig::default()).unwrap();
        assert!(
            (s.statistic - s.grids_evaluated as f64).abs() < 1e-9,
            "{s:?}"
        );
        for g in characteristic(&x, &x, &TicConfig::default()).unwrap() {
            let want = libm::log(g.columns.min(g.rows) as f64);
            assert!((g.mi - want).abs() < 1e-12, "{g:?}");
        }
    }

    #[test]
    fn identity_near_saturation_at_100() {
        let x: Vec<f64> = uniform(2, 100);
        let s = tic_statistic(&x, &x, &TicConfig::default()).unwrap();
        assert_eq!(TicConfig::default().cell_budget(100), 15);
        assert!(s.statistic <= s.grids_evaluated as f64 + 1e-9);
        assert!(s.statistic >= 0.99 * s.grids_evaluated as f64, "{s:?}");
    }

    #[test]
    fn dependence_raises_statistic() {
        let x = uniform(3, 1000);
        let noise = uniform(4, 1000);
        let y_ind = uniform(5, 1000);
        let y_dep: Vec<f64> = x.iter().zip(&noise).map(|(a, e)| a + 0.1 * e).collect();
        let cfg = TicConfig::default();
        let ind = tic_statistic(&x, &y_ind, &cfg).unwrap().statistic;
        let dep = tic_statistic(&x, &y_dep, &cfg).unwrap().statistic;
        assert!(ind < dep, "{ind} vs {dep}");
    }

    #[test]
    fn monotone_transform_is_exactly_invariant() {
        let x = uniform(6, 300);
        let y: Vec<f64> = x
            .iter()
            .zip(uniform(7, 300))
            .map(|(a, b)| a * a + b)
            .collect();
        let fx: Vec<f64> = x.iter().map(|v| libm::exp(3.0 * v) - 7.0).collect();
        let cfg = TicConfig::default();
        assert_eq!(
            tic_statistic(&x, &y, &cfg).unwrap(),
            tic_statistic(&fx, &y, &cfg).unwrap()
        );
    }

    #[test]
    fn budget_and_grid_count() {
        let cfg = TicConfig::default();
        assert_eq!(cfg.cell_budget(10), 4);
        assert_eq!(cfg.cell_budget(1000), 63);
        let x = uniform(8, 10);
        let y = uniform(9, 10);
        assert_eq!(tic_statistic(&x, &y, &cfg).unwrap().grids_evaluated, 1);
    }

    #[test]
    fn degenerate_inputs() {
        let cfg = TicConfig::default();
        let x = uniform(1, 9);
        assert!(matches!(
            tic_statistic(&x, &x, &cfg),
            Err(Error::TooShort { .. })
        ));
        let x = uniform(1, 20);
        assert_eq!(
            tic_statistic(&x, &[2.0; 20], &cfg),
            Err(Error::ConstantVariable)
        );
        assert!(tic_test(&x, &x, 10, RngSeed(0), &cfg).is_err());
        let bad = TicConfig {
            max_cells_exponent: 1.5,
            ..cfg
        };
        assert!(tic_statistic(&x, &x, &bad).is_err());
    }

    /// All subsets of at most `parts - 1` cut positions in `1..n`.
    fn for_each_cut_set(n: usize, parts: usize, f: &mut impl FnMut(&[usize])) {
        fn rec(
            next: usize,
            n: usize,
            left: usize,
            cur: &mut Vec<usize>,
            f: &mut impl FnMut(&[usize]),
        ) {
            f(cur);
            if left == 0 {
                return;
            }
            for p in next..n {
                cur.push(p);
                rec(p + 1, n, left - 1, cur, f);
                cur.pop();
            }
        }
        rec(1, n, parts - 1, &mut Vec::new(), f);
    }

    /// Exhaustive MI*(k, l) for distinct values with n divisible by k and l.
    fn brute_force(x: &[f64], y: &[f64], k: usize, l: usize) -> f64 {
        let n = x.len();
        let best_cut = |a: &[f64], b: &[f64], fixed: usize, free: usize| -> f64 {
            let mut sa = a.to_vec();
            sa.sort_by(f64::total_cmp);
            let mut sb = b.to_vec();
            sb.sort_by(f64::total_cmp);
            let fixed_cuts: Vec<f64> = (1..fixed)
                .map(|i| 0.5 * (sb[i * n / fixed - 1] + sb[i * n / fixed]))
                .collect();
            let mut best = 0.0f64;
            for_each_cut_set(n, free, &mut |cuts| {
                let free_cuts: Vec<f64> = cuts.iter().map(|&p| 0.5 * (sa[p - 1] + sa[p])).collect();
                let t = bin_by_cuts(a, b, &free_cuts, &fixed_cuts).unwrap();
                best = best.max(mutual_information(&t));
            });
            best
        };
        best_cut(x, y, l, k).max(best_cut(y, x, k, l))
    }

    #[test]
    fn dynamic_program_matches_exhaustive_search() {
        let cfg = TicConfig {
            max_cells_exponent: 0.8,
            max_clumps_factor: 5,
        };
        for seed in 0..12 {
            let x = uniform(100 + seed, 12);
            let noise = uniform(200 + seed, 12);
            let y: Vec<f64> = x
                .iter()
                .zip(&noise)
                .map(|(a, e)| libm::sin(6.0 * a) + e)
                .collect();
            let grid = characteristic(&x, &y, &cfg).unwrap();
            assert_eq!(grid.len(), 3);
            for g in grid {
                let want = brute_force(&x, &y, g.columns, g.rows);
                assert!((g.mi - want).abs() < 1e-12, "seed {seed} {g:?} vs {want}");
            }
        }
    }

    #[test]
    fn optimal_grid_reproduces_its_score() {
        let x = uniform(20, 200);
        let y: Vec<f64> = x
            .iter()
            .zip(uniform(21, 200))
            .map(|(a, e)| (a - 0.5).abs() + 0.3 * e)
            .collect();
        let cfg = TicConfig::default();
        let scores = characteristic(&x, &y, &cfg).unwrap();
        for &(k, l) in &[(2, 2), (3, 2), (2, 5), (4, 3)] {
            let (grid, mi) = optimal_grid(&x, &y, k, l, &cfg).unwrap();
            let t = bin_by_cuts(&x, &y, &grid.x_cuts, &grid.y_cuts).unwrap();
            assert!((mutual_information(&t) - mi).abs() < 1e-12, "({k},{l})");
            let listed = scores
                .iter()
                .find(|g| g.columns == k && g.rows == l)
                .unwrap();
            assert_eq!(listed.mi, mi);
            assert!(grid.x_cuts.len() < k && grid.y_cuts.len() < l);
        }
    }

    #[test]
    fn identical_sequences_reach_minimum_p() {
        let x = uniform(30, 200);
        let r = tic_test(&x, &x, 50, RngSeed(1), &TicConfig::default()).unwrap();
        assert_eq!(r.p_value, 1.0 / 51.0);
        assert_eq!(r.permutations, Some(50));
        assert_eq!(r.kind, TestKind::Tic);
    }

    #[test]
    fn test_is_deterministic_and_on_grid() {
        let x = uniform(40, 100);
        let y = uniform(41, 100);
        let cfg = TicConfig::default();
        let a = tic_test(&x, &y, 39, RngSeed(9), &cfg).unwrap();
        let b = tic_test(&x, &y, 39, RngSeed(9), &cfg).unwrap();
        assert_eq!(a, b);
        let scaled = a.p_value * 40.0;
        assert!((scaled - libm::round(scaled)).abs() < 1e-9);
        assert!(a.p_value >= 1.0 / 40.0 && a.p_value <= 1.0);
    }

    #[test]
    fn permuted_engine_matches_permuted_input() {
        let x = uniform(50, 80);
        let y: Vec<f64> = uniform(51, 80)
            .iter()
            .map(|v| libm::floor(v * 4.0))
            .collect();
        let cfg = TicConfig::default();
        let engine = TicEngine::new(&x, &y, &cfg).unwrap();
        let mut forward: Vec<u32> = (0..80).collect();
        forward.shuffle(&mut RngSeed(3).rng());
        let mut inverse = vec![0u32; 80];
        for (i, &f) in forward.iter().enumerate() {
            inverse[f as usize] = i as u32;
        }
        let via_engine = engine.statistic(
            Some((&forward, &inverse)),
            &mut Scratch::default(),
            &mut Vec::new(),
        );
        let y_perm: Vec<f64> = forward.iter().map(|&f| y[f as usize]).collect();
        let direct = tic_statistic(&x, &y_perm, &cfg).unwrap();
        assert_eq!(via_engine, direct);
    }
}
