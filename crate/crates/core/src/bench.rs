//! Benchmark scoring: accuracy, bootstrap spread, Welch's t-test and the
//! average causal effect of choosing the test per pair type.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;

use crate::discover::{resfit, CausalVerdict, DiscoveryConfig, Structure};
use crate::error::{Error, Result};
use crate::model::{PairType, TestPolicy, VariablePair};
use crate::rng::RngSeed;
use crate::special::student_t_two_sided;

pub const DEFAULT_BOOTSTRAP_REPLICATES: usize = 1000;

/// A pair with its ground-truth structure.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledPair {
    pub id: String,
    pub pair: VariablePair,
    pub truth: Structure,
}

/// Fraction of exact four-way matches.
pub fn accuracy(predicted: &[Structure], truths: &[Structure]) -> Result<f64> {
    if predicted.len() != truths.len() {
        return Err(Error::LengthMismatch {
            left: predicted.len(),
            right: truths.len(),
        });
    }
    if predicted.is_empty() {
        return Err(Error::EmptySeries);
    }
    let hits = predicted.iter().zip(truths).filter(|(p, t)| p == t).count();
    Ok(hits as f64 / predicted.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub mean: f64,
    pub std: f64,
}

/// Bootstrap mean and sample standard deviation of accuracy.
///
/// Each replicate resamples the per-pair hit flags with replacement; the
/// verdicts themselves are not recomputed.
pub fn bootstrap_accuracy(hits: &[bool], replicates: usize, seed: RngSeed) -> Result<Summary> {
    if hits.is_empty() {
        return Err(Error::EmptySeries);
    }
    if replicates < 2 {
        return Err(Error::InvalidParameter(
            "bootstrap needs at least 2 replicates",
        ));
    }
    let n = hits.len();
    let scores: Vec<f64> = (0..replicates as u64)
        .map(|r| {
            let mut rng = seed.substream(r);
            let correct = (0..n).filter(|_| hits[rng.gen_range(0..n)]).count();
            correct as f64 / n as f64
        })
        .collect();
    Ok(summarize(&scores))
}

fn summarize(values: &[f64]) -> Summary {
    let (mean, var) = mean_var(values);
    Summary {
        mean,
        std: libm::sqrt(var),
    }
}

/// Mean and unbiased variance.
fn mean_var(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    let var = if values.len() > 1 {
        ss / (n - 1.0)
    } else {
        0.0
    };
    (mean, var)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WelchTest {
    pub t: f64,
    /// Welch–Satterthwaite degrees of freedom.
    pub df: f64,
    /// Two-sided p-value.
    pub p_value: f64,
}

/// Welch's unequal-variance two-sample t-test.
pub fn welch_t_test(a: &[f64], b: &[f64]) -> Result<WelchTest> {
    for s in [a, b] {
        if s.len() < 2 {
            return Err(Error::TooShort {
                required: 2,
                actual: s.len(),
            });
        }
    }
    let (ma, va) = mean_var(a);
    let (mb, vb) = mean_var(b);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (sa, sb) = (va / na, vb / nb);
    let se2 = sa + sb;
    if se2.is_nan() || se2 <= 0.0 {
        return Err(Error::ZeroVariance);
    }
    let t = (ma - mb) / libm::sqrt(se2);
    let df = se2 * se2 / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
    Ok(WelchTest {
        t,
        df,
        p_value: student_t_two_sided(t, df),
    })
}

/// Average causal effect of selecting the test per pair type:
/// `Σ_s weight_s · best_mean_s − pooled_mean`.
pub fn ace(
    best_means: &BTreeMap<PairType, f64>,
    weights: &BTreeMap<PairType, f64>,
    pooled_mean: f64,
) -> Result<f64> {
    if weights.values().any(|w| w.is_nan() || *w < 0.0) {
        return Err(Error::InvalidParameter("weights must be non-negative"));
    }
    let total: f64 = weights.values().sum();
    if libm::fabs(total - 1.0) > 1e-9 {
        return Err(Error::WeightNormalization(total));
    }
    let mut treated = 0.0;
    for (stratum, w) in weights {
        if *w == 0.0 {
            continue;
        }
        let mean = best_means
            .get(stratum)
            .ok_or(Error::InvalidParameter("weighted stratum has no mean"))?;
        treated += w * mean;
    }
    Ok(treated - pooled_mean)
}

/// Verdict (or the reason there is none) for one benchmark pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PairOutcome {
    pub id: String,
    pub pair_type: PairType,
    pub truth: Structure,
    pub verdict: core::result::Result<CausalVerdict, Error>,
}

impl PairOutcome {
    /// Skipped pairs count as wrong.
    pub fn is_correct(&self) -> bool {
        matches!(&self.verdict, Ok(v) if v.structure == self.truth)
    }

    pub fn is_skipped(&self) -> bool {
        self.verdict.is_err()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StratumStats {
    pub count: usize,
    pub skipped: usize,
    /// Plain accuracy over the stratum.
    pub accuracy: f64,
    /// Bootstrap mean and standard deviation.
    pub bootstrap: Summary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub per_stratum: BTreeMap<PairType, StratumStats>,
    pub total: StratumStats,
    pub policy: TestPolicy,
    pub ci: f64,
    pub bootstrap_replicates: usize,
    pub seed: RngSeed,
    pub outcomes: Vec<PairOutcome>,
}

/// Classifies one pair; pair `index` uses `seed.derive(index)`.
pub fn classify(
    labeled: &LabeledPair,
    index: usize,
    config: &DiscoveryConfig,
    seed: RngSeed,
) -> PairOutcome {
    PairOutcome {
        id: labeled.id.clone(),
        pair_type: labeled.pair.pair_type,
        truth: labeled.truth,
        verdict: resfit(&labeled.pair, config, seed.derive(index as u64)),
    }
}

/// Classifies every pair and summarises accuracy per pair type and overall.
pub fn run_benchmark(
    labeled: &[LabeledPair],
    config: &DiscoveryConfig,
    replicates: usize,
    seed: RngSeed,
) -> Result<BenchReport> {
    config.validate()?;
    let outcomes = labeled
        .iter()
        .enumerate()
        .map(|(i, p)| classify(p, i, config, seed))
        .collect();
    assemble_report(outcomes, config, replicates, seed)
}

/// Builds the report from already classified pairs. The result depends only
/// on the order of `outcomes`, not on how they were produced.
pub fn assemble_report(
    outcomes: Vec<PairOutcome>,
    config: &DiscoveryConfig,
    replicates: usize,
    seed: RngSeed,
) -> Result<BenchReport> {
    if outcomes.is_empty() {
        return Err(Error::EmptySeries);
    }
    let boot_seed = seed.derive(u64::MAX);
    let stats = |subset: &[&PairOutcome], stream: u64| -> Result<StratumStats> {
        let hits: Vec<bool> = subset.iter().map(|o| o.is_correct()).collect();
        let correct = hits.iter().filter(|&&h| h).count();
        Ok(StratumStats {
            count: subset.len(),
            skipped: subset.iter().filter(|o| o.is_skipped()).count(),
            accuracy: correct as f64 / subset.len() as f64,
            bootstrap: bootstrap_accuracy(&hits, replicates, boot_seed.derive(stream))?,
        })
    };
    let mut per_stratum = BTreeMap::new();
    for (i, pair_type) in PairType::ALL.into_iter().enumerate() {
        let subset: Vec<&PairOutcome> = outcomes
            .iter()
            .filter(|o| o.pair_type == pair_type)
            .collect();
        if !subset.is_empty() {
            per_stratum.insert(pair_type, stats(&subset, i as u64)?);
        }
    }
    let all: Vec<&PairOutcome> = outcomes.iter().collect();
    let total = stats(&all, PairType::ALL.len() as u64)?;
    Ok(BenchReport {
        per_stratum,
        total,
        policy: config.policy,
        ci: config.ci,
        bootstrap_replicates: replicates,
        seed,
        outcomes,
    })
}
