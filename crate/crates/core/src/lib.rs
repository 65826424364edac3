//! Pairwise causal discovery between two observed variables.
//!
//! A linear functional causal model is fitted in both directions and the
//! regression residual is tested for independence against the hypothesised
//! cause. The independence test (Pearson's χ² on a uniform grid, or the
//! Total Information Coefficient with a permutation p-value) is selected from
//! the joint variable type of the pair. The two directional p-values are then
//! mapped onto one of four structures: causal, anticausal, independent or
//! confounded.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, reporting and
//! the command-line interface live in the `pairdisc` crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bench;
pub mod discover;
mod error;
pub mod indep;
pub mod model;
pub mod regress;
pub mod rng;
pub mod special;
pub mod synth;

pub use discover::{decide, resfit, resit, CausalVerdict, DiscoveryConfig, Structure};
pub use error::{Error, Result};
pub use indep::{TestKind, TestResult};
pub use model::{
    infer_pair_type, infer_var_type, ObservationSeries, PairType, TestPolicy, VarType, VariablePair,
};
pub use rng::RngSeed;
