//! Ordinary least squares for the linear additive-noise model
//! `effect = slope * cause + intercept + residual`.

use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub residuals: Vec<f64>,
}

impl LinearFit {
    pub fn predict(&self, cause: f64) -> f64 {
        self.slope * cause + self.intercept
    }
}

/// Regresses `effect` on `cause` and returns the residuals `effect - fit(cause)`.
///
/// Means are subtracted before forming the cross products, which keeps the
/// residuals mean-zero and uncorrelated with `cause` to rounding error.
pub fn ols_fit(cause: &[f64], effect: &[f64]) -> Result<LinearFit> {
    if cause.len() != effect.len() {
        return Err(Error::LengthMismatch {
            left: cause.len(),
            right: effect.len(),
        });
    }
    let n = cause.len();
    if n < 3 {
        return Err(Error::TooShort {
            required: 3,
            actual: n,
        });
    }
    let nf = n as f64;
    let mean_c = cause.iter().sum::<f64>() / nf;
    let mean_e = effect.iter().sum::<f64>() / nf;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (&c, &e) in cause.iter().zip(effect) {
        let dc = c - mean_c;
        sxx += dc * dc;
        sxy += dc * (e - mean_e);
    }
    if sxx.is_nan() || sxx <= 0.0 {
        return Err(Error::ConstantVariable);
    }
    let slope = sxy / sxx;
    let intercept = mean_e - slope * mean_c;
    // Residuals from centred values: equal to e - (slope*c + intercept) up to
    // rounding, without the cancellation of a large intercept.
    let residuals = cause
        .iter()
        .zip(effect)
        .map(|(&c, &e)| (e - mean_e) - slope * (c - mean_c))
        .collect();
    Ok(LinearFit {
        slope,
        intercept,
        residuals,
    })
}
