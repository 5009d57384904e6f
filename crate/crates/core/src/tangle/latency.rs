//! Latency models standing in for network and node processing time.
//!
//! All simulation timing is virtual, so delays are drawn from one of these
//! models instead of being measured on a wall clock.

use rand::{Rng, RngExt};
use rand_distr::{Distribution, LogNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Quantile of the standard normal at p = 0.95.
const Z_95: f64 = 1.644_853_626_951_472_2;

#[derive(Debug, Error, PartialEq)]
pub enum LatencyModelError {
    #[error("latency parameters must be finite and non-negative")]
    InvalidParameter,
    #[error("uniform bounds are inverted: lo {lo} > hi {hi}")]
    InvertedBounds { lo: f64, hi: f64 },
    #[error("log-normal fit requires 0 < mean < p95 <= cap (got mean {mean}, p95 {p95})")]
    UnfittableStats { mean: f64, p95: f64 },
}

/// Distribution of a simulated delay, in milliseconds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LatencyModel {
    /// No delay at all.
    Zero,
    /// Fixed delay.
    Constant { ms: f64 },
    /// Uniform on `[lo_ms, hi_ms)`.
    Uniform { lo_ms: f64, hi_ms: f64 },
    /// Log-normal over milliseconds, truncated at `cap_ms`.
    LogNormal { mu: f64, sigma: f64, cap_ms: f64 },
}

impl LatencyModel {
    /// Checks parameter sanity; every sampled delay from a valid model is
    /// finite and non-negative.
    pub fn validate(&self) -> Result<(), LatencyModelError> {
        let finite_nonneg = |v: f64| v.is_finite() && v >= 0.0;
        match *self {
            Self::Zero => Ok(()),
            Self::Constant { ms } => {
                if finite_nonneg(ms) {
                    Ok(())
                } else {
                    Err(LatencyModelError::InvalidParameter)
                }
            }
            Self::Uniform { lo_ms, hi_ms } => {
                if !finite_nonneg(lo_ms) || !finite_nonneg(hi_ms) {
                    Err(LatencyModelError::InvalidParameter)
                } else if lo_ms > hi_ms {
                    Err(LatencyModelError::InvertedBounds { lo: lo_ms, hi: hi_ms })
                } else {
                    Ok(())
                }
            }
            Self::LogNormal { mu, sigma, cap_ms } => {
                if mu.is_finite() && sigma.is_finite() && sigma >= 0.0 && finite_nonneg(cap_ms) {
                    Ok(())
                } else {
                    Err(LatencyModelError::InvalidParameter)
                }
            }
        }
    }

    /// Draws one delay in milliseconds. Never negative; log-normal draws are
    /// capped at `cap_ms`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            Self::Zero => 0.0,
            Self::Constant { ms } => ms,
            Self::Uniform { lo_ms, hi_ms } => {
                if lo_ms >= hi_ms {
                    lo_ms
                } else {
                    rng.random_range(lo_ms..hi_ms)
                }
            }
            Self::LogNormal { mu, sigma, cap_ms } => {
                let dist = LogNormal::new(mu, sigma).expect("validated parameters");
                dist.sample(rng).min(cap_ms)
            }
        }
        .max(0.0)
    }

    /// Fits a log-normal to a target mean and 95th percentile (both in ms),
    /// capped at `cap_ms`.
    ///
    /// Solves `mean = exp(mu + sigma^2/2)` and `p95 = exp(mu + z95*sigma)`
    /// for the smaller sigma root.
    pub fn fit_log_normal(
        mean_ms: f64,
        p95_ms: f64,
        cap_ms: f64,
    ) -> Result<Self, LatencyModelError> {
        if !(mean_ms > 0.0 && p95_ms > mean_ms && cap_ms >= p95_ms) {
            return Err(LatencyModelError::UnfittableStats {
                mean: mean_ms,
                p95: p95_ms,
            });
        }
        let r = (p95_ms / mean_ms).ln();
        let discriminant = Z_95 * Z_95 - 2.0 * r;
        if discriminant < 0.0 {
            return Err(LatencyModelError::UnfittableStats {
                mean: mean_ms,
                p95: p95_ms,
            });
        }
        let sigma = Z_95 - discriminant.sqrt();
        let mu = mean_ms.ln() - sigma * sigma / 2.0;
        Ok(Self::LogNormal {
            mu,
            sigma,
            cap_ms,
        })
    }
}
