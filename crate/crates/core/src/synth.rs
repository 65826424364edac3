//! Synthetic pairs for the four reference structures.
//!
//! `Z`, `X_ind` and `Y_ind` are i.i.d. Uniform(0, 1). From them
//! `Y_dep = X_ind + Z`, `X_conf = X_ind + Z` and `Y_conf = Y_ind + Z`, and
//!
//! | structure   | x        | y        |
//! |-------------|----------|----------|
//! | Causal      | `X_ind`  | `Y_dep`  |
//! | Anticausal  | `Y_dep`  | `X_ind`  |
//! | Independent | `X_ind`  | `Y_ind`  |
//! | Confounded  | `X_conf` | `Y_conf` |
//!
//! The three noise vectors come from separate substreams of the seed, so all
//! four structures built from one seed share the same underlying draws.

use alloc::vec::Vec;

use rand::Rng;

use crate::discover::Structure;
use crate::error::{Error, Result};
use crate::indep::{bin_uniform, mutual_information, MIN_SAMPLES};
use crate::regress::ols_fit;
use crate::rng::RngSeed;

#[derive(Debug, Clone, PartialEq)]
pub struct SynthSample {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub truth: Structure,
    pub n: usize,
    pub seed: RngSeed,
}

const Z_STREAM: u64 = 0;
const X_STREAM: u64 = 1;
const Y_STREAM: u64 = 2;

fn uniform_draws(seed: RngSeed, stream: u64, n: usize) -> Vec<f64> {
    let mut rng = seed.substream(stream);
    (0..n).map(|_| rng.gen::<f64>()).collect()
}

pub fn generate_structure(kind: Structure, n: usize, seed: RngSeed) -> Result<SynthSample> {
    if n < MIN_SAMPLES {
        return Err(Error::TooShort {
            required: MIN_SAMPLES,
            actual: n,
        });
    }
    let z = uniform_draws(seed, Z_STREAM, n);
    let x_ind = uniform_draws(seed, X_STREAM, n);
    let y_ind = uniform_draws(seed, Y_STREAM, n);
    let plus_z = |v: &[f64]| -> Vec<f64> { v.iter().zip(&z).map(|(a, b)| a + b).collect() };
    let (x, y) = match kind {
        Structure::Causal => {
            let y_dep = plus_z(&x_ind);
            (x_ind, y_dep)
        }
        Structure::Anticausal => {
            let y_dep = plus_z(&x_ind);
            (y_dep, x_ind)
        }
        Structure::Independent => (x_ind, y_ind),
        Structure::Confounded => (plus_z(&x_ind), plus_z(&y_ind)),
    };
    Ok(SynthSample {
        x,
        y,
        truth: kind,
        n,
        seed,
    })
}

/// Mutual information between the regression residual of `y` on `x` and
/// `x`, on a `bins × bins` uniform grid, for `replicates` independent
/// samples. Replicate `r` uses `seed.derive(r)`.
pub fn mi_distribution(
    kind: Structure,
    replicates: usize,
    n: usize,
    bins: usize,
    seed: RngSeed,
) -> Result<Vec<f64>> {
    if replicates == 0 {
        return Err(Error::InvalidParameter("replicates must be positive"));
    }
    (0..replicates as u64)
        .map(|r| {
            let sample = generate_structure(kind, n, seed.derive(r))?;
            let fit = ols_fit(&sample.x, &sample.y)?;
            let table = bin_uniform(&fit.residuals, &sample.x, bins)?;
            Ok(mutual_information(&table))
        })
        .collect()
}
