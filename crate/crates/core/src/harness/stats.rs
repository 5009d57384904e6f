//! Delay statistics: nearest-rank percentiles and empirical CDFs.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StatsError {
    #[error("no samples")]
    EmptySamples,
    #[error("percentile must be in (0, 1]")]
    BadPercentile,
}

/// Summary of a delay distribution in milliseconds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DelayStats {
    pub mean_ms: f64,
    pub max_ms: f64,
    pub p95_ms: f64,
    pub n: usize,
}

impl DelayStats {
    pub fn from_samples(samples: &[f64]) -> Result<Self, StatsError> {
        if samples.is_empty() {
            return Err(StatsError::EmptySamples);
        }
        let mean_ms = samples.iter().sum::<f64>() / samples.len() as f64;
        let max_ms = samples.iter().copied().fold(f64::MIN, f64::max);
        Ok(Self {
            mean_ms,
            max_ms,
            p95_ms: percentile(samples, 0.95)?,
            n: samples.len(),
        })
    }
}

/// Nearest-rank percentile: sorts ascending and returns the element at
/// 1-based index `ceil(p * n)`.
pub fn percentile(samples: &[f64], p: f64) -> Result<f64, StatsError> {
    if samples.is_empty() {
        return Err(StatsError::EmptySamples);
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(StatsError::BadPercentile);
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let rank = (p * sorted.len() as f64).ceil() as usize;
    Ok(sorted[rank.max(1) - 1])
}

/// Empirical CDF: sorted unique values paired with cumulative
/// probabilities. Monotone nondecreasing; the last probability is 1.
pub fn emit_cdf(samples: &[f64]) -> Vec<(f64, f64)> {
    if samples.is_empty() {
        return Vec::new();
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut points: Vec<(f64, f64)> = Vec::new();
    let mut seen = 0usize;
    for value in sorted {
        seen += 1;
        match points.last_mut() {
            Some(last) if last.0 == value => last.1 = seen as f64 / n,
            _ => points.push((value, seen as f64 / n)),
        }
    }
    points
}
