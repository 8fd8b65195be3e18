//! Error metrics and order statistics.

use nalgebra::DVector;

use crate::error::{BenchError, Result};

/// Root mean square error `√(Σₜ ‖xₜ − x̂ₜ‖² / (M·n))`.
pub fn rmse(truth: &[DVector<f64>], estimates: &[DVector<f64>]) -> Result<f64> {
    if truth.len() != estimates.len() || truth.is_empty() {
        return Err(BenchError::LengthMismatch { truth: truth.len(), estimates: estimates.len() });
    }
    let n = truth[0].len();
    let mut sum = 0.0;
    for (x, e) in truth.iter().zip(estimates) {
        if x.len() != n || e.len() != n {
            return Err(BenchError::LengthMismatch { truth: x.len(), estimates: e.len() });
        }
        sum += (x - e).norm_squared();
    }
    Ok((sum / (truth.len() * n) as f64).sqrt())
}

/// Location summary of a sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
}

impl Summary {
    /// `None` for an empty sample. Quantiles interpolate linearly between
    /// order statistics.
    pub fn of(values: &[f64]) -> Option<Summary> {
        if values.is_empty() {
            return None;
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mean = sorted.iter().sum::<f64>() / sorted.len() as f64;
        Some(Summary {
            count: sorted.len(),
            mean,
            median: quantile(&sorted, 0.5),
            q1: quantile(&sorted, 0.25),
            q3: quantile(&sorted, 0.75),
        })
    }
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}
