//! Unconditional independence tests between a regression residual and its
//! hypothesised cause.
//!
//! Two tests are provided: Pearson's χ² on a uniform grid ([`chi2_test`]) and
//! the Total Information Coefficient with a permutation p-value
//! ([`tic_test`]). Both operate on [`ContingencyTable`]s and share the
//! mutual-information estimator in [`mutual_information`].

use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::rng::RngSeed;

mod binning;
mod chi2;
mod mi;
mod tic;

pub use binning::{bin_by_cuts, bin_uniform, ContingencyTable};
pub use chi2::{chi2_pvalue, chi2_statistic, chi2_test, Chi2Statistic, DEFAULT_BINS};
pub use mi::mutual_information;
pub use tic::{
    characteristic, optimal_grid, tic_statistic, tic_test, GridPartition, GridScore, TicConfig,
    TicStatistic, DEFAULT_PERMUTATIONS, MIN_PERMUTATIONS,
};

/// Smallest sample accepted by either test.
pub const MIN_SAMPLES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TestKind {
    Chi2,
    Tic,
}

impl TestKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TestKind::Chi2 => "chi2",
            TestKind::Tic => "tic",
        }
    }
}

impl fmt::Display for TestKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TestKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "chi2" | "chi-squared" | "chisq" | "x2" => Ok(TestKind::Chi2),
            "tic" => Ok(TestKind::Tic),
            _ => Err(Error::InvalidParameter("unknown test kind")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestResult {
    pub kind: TestKind,
    pub statistic: f64,
    pub p_value: f64,
    /// Degrees of freedom (χ² only).
    pub df: Option<usize>,
    /// Number of grid resolutions summed (TIC only).
    pub grids_evaluated: Option<usize>,
    /// Number of permutation replicates (TIC only).
    pub permutations: Option<usize>,
}

/// Parameters shared by both tests; each test reads only its own fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestConfig {
    pub bins: usize,
    pub permutations: usize,
    pub tic: TicConfig,
}

impl Default for TestConfig {
    fn default() -> Self {
        Self {
            bins: DEFAULT_BINS,
            permutations: DEFAULT_PERMUTATIONS,
            tic: TicConfig::default(),
        }
    }
}

/// Runs the test selected by `kind` on `(x, y)`.
pub fn run_test(
    kind: TestKind,
    x: &[f64],
    y: &[f64],
    config: &TestConfig,
    seed: RngSeed,
) -> Result<TestResult> {
    match kind {
        TestKind::Chi2 => chi2_test(x, y, config.bins, seed),
        TestKind::Tic => tic_test(x, y, config.permutations, seed, &config.tic),
    }
}

pub(crate) fn check_pair(x: &[f64], y: &[f64], min_len: usize) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < min_len {
        return Err(Error::TooShort {
            required: min_len,
            actual: x.len(),
        });
    }
    if let Some(index) = x.iter().chain(y).position(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            index: index % x.len(),
        });
    }
    Ok(())
}

/// `n ln n` for every integer count `0..=n`, with `0 ln 0 = 0`.
pub(crate) fn nlogn_table(n: usize) -> alloc::vec::Vec<f64> {
    (0..=n)
        .map(|c| {
            if c == 0 {
                0.0
            } else {
                c as f64 * libm::log(c as f64)
            }
        })
        .collect()
}
