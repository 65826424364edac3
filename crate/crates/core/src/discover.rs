//! Regression with subsequent independence test, in both directions, and the
//! four-way decision between them.

use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::indep::{run_test, TestConfig, TestKind, MIN_SAMPLES};
use crate::model::{PairType, TestPolicy, VariablePair};
use crate::regress::ols_fit;
use crate::rng::RngSeed;

/// Default significance level.
pub const DEFAULT_CI: f64 = 0.05;

/// Residual spread below this fraction of the effect scale counts as an
/// exact fit.
const EXACT_FIT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Structure {
    /// A → B
    Causal,
    /// A ← B
    Anticausal,
    Independent,
    /// A ↔ B through a latent common cause.
    Confounded,
}

impl Structure {
    pub const ALL: [Structure; 4] = [
        Structure::Causal,
        Structure::Anticausal,
        Structure::Independent,
        Structure::Confounded,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Structure::Causal => "Causal",
            Structure::Anticausal => "Anticausal",
            Structure::Independent => "Independent",
            Structure::Confounded => "Confounded",
        }
    }

    /// The structure seen with the two variables swapped.
    pub fn mirrored(self) -> Self {
        match self {
            Structure::Causal => Structure::Anticausal,
            Structure::Anticausal => Structure::Causal,
            other => other,
        }
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Structure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Structure::ALL
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or(Error::InvalidParameter("unknown structure"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscoveryConfig {
    /// Significance level for both directional tests.
    pub ci: f64,
    pub policy: TestPolicy,
    pub tests: TestConfig,
}

impl Default for DiscoveryConfig {
    fn default() -> Self {
        Self {
            ci: DEFAULT_CI,
            policy: TestPolicy::default(),
            tests: TestConfig::default(),
        }
    }
}

impl DiscoveryConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.ci > 0.0 && self.ci < 1.0) {
            return Err(Error::InvalidParameter("ci must lie in (0, 1)"));
        }
        if self.tests.bins < 2 {
            return Err(Error::InvalidParameter("bins must be at least 2"));
        }
        if self.tests.permutations < crate::indep::MIN_PERMUTATIONS {
            return Err(Error::InvalidParameter(
                "at least 19 permutations are required",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CausalVerdict {
    pub structure: Structure,
    /// p-value of the residual test with A as the cause.
    pub p_causal: f64,
    /// p-value of the residual test with B as the cause.
    pub p_anticausal: f64,
    pub test_used: TestKind,
    pub pair_type: PairType,
    pub ci: f64,
}

/// The decision table. Comparisons are strict, so a p-value equal to `ci`
/// rejects neither branch and falls through to `Confounded`.
pub fn decide(p_causal: f64, p_anticausal: f64, ci: f64) -> Structure {
    if p_causal > ci && p_anticausal < ci {
        Structure::Causal
    } else if p_causal < ci && p_anticausal > ci {
        Structure::Anticausal
    } else if p_causal > ci && p_anticausal > ci {
        Structure::Independent
    } else {
        Structure::Confounded
    }
}

/// p-value for independence between `cause` and the residual of the linear
/// regression of `effect` on it.
///
/// A constant cause, an exact linear fit, or a constant axis inside the test
/// leaves nothing to reject and yields 1.
pub fn resit(
    cause: &[f64],
    effect: &[f64],
    test: TestKind,
    config: &TestConfig,
    seed: RngSeed,
) -> Result<f64> {
    if cause.len() != effect.len() {
        return Err(Error::LengthMismatch {
            left: cause.len(),
            right: effect.len(),
        });
    }
    if cause.len() < MIN_SAMPLES {
        return Err(Error::TooShort {
            required: MIN_SAMPLES,
            actual: cause.len(),
        });
    }
    let fit = match ols_fit(cause, effect) {
        Ok(fit) => fit,
        Err(Error::ConstantVariable) => return Ok(1.0),
        Err(e) => return Err(e),
    };
    let scale = effect.iter().fold(1.0f64, |m, v| m.max(libm::fabs(*v)));
    let spread = fit
        .residuals
        .iter()
        .fold(0.0f64, |m, v| m.max(libm::fabs(*v)));
    if spread <= EXACT_FIT_TOLERANCE * scale {
        return Ok(1.0);
    }
    match run_test(test, &fit.residuals, cause, config, seed) {
        Ok(result) => Ok(result.p_value),
        Err(Error::ConstantVariable) => Ok(1.0),
        Err(e) => Err(e),
    }
}

/// Seed for one direction, keyed on the data so that swapping the
/// arguments of [`resfit`] reuses the same substream for the same direction.
fn direction_seed(seed: RngSeed, cause: &[f64], effect: &[f64]) -> RngSeed {
    const FNV_OFFSET: u64 = 0xCBF2_9CE4_8422_2325;
    const FNV_PRIME: u64 = 0x0000_0100_0000_01B3;
    let mut h = FNV_OFFSET;
    for v in cause.iter().chain(effect) {
        for byte in v.to_bits().to_le_bytes() {
            h = (h ^ u64::from(byte)).wrapping_mul(FNV_PRIME);
        }
    }
    seed.derive(h)
}

/// Classifies the pair with the test chosen by `config.policy` for its type.
pub fn resfit(
    pair: &VariablePair,
    config: &DiscoveryConfig,
    seed: RngSeed,
) -> Result<CausalVerdict> {
    let test = config.policy.select(pair.pair_type);
    resfit_with_test(pair, test, config, seed)
}

/// Classifies the pair with an explicit test, ignoring the policy.
pub fn resfit_with_test(
    pair: &VariablePair,
    test: TestKind,
    config: &DiscoveryConfig,
    seed: RngSeed,
) -> Result<CausalVerdict> {
    config.validate()?;
    let (a, b) = (pair.a.values(), pair.b.values());
    let p_causal = resit(a, b, test, &config.tests, direction_seed(seed, a, b))?;
    let p_anticausal = resit(b, a, test, &config.tests, direction_seed(seed, b, a))?;
    Ok(CausalVerdict {
        structure: decide(p_causal, p_anticausal, config.ci),
        p_causal,
        p_anticausal,
        test_used: test,
        pair_type: pair.pair_type,
        ci: config.ci,
    })
}
