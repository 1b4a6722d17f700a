use serde::{Deserialize, Serialize};

use super::{CharacteristicsError, Result};
use crate::numeric;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Trend {
    /// OLS slope of value on `t = 0..n-1`, per observation.
    pub slope: f64,
    /// First observed value. This is the `intercept` characteristic.
    pub intercept: f64,
    /// OLS intercept at `t = 0`; not part of the feature vector.
    pub ols_intercept: f64,
}

pub fn linear_trend(values: &[f64]) -> Result<Trend> {
    let n = values.len();
    if n < 2 {
        return Err(CharacteristicsError::TooShort { op: "linear_trend", len: n, min: 2 });
    }
    if numeric::is_constant(values) {
        return Ok(Trend {
            slope: 0.0,
            intercept: values[0],
            ols_intercept: values[0],
        });
    }
    let t: Vec<f64> = (0..n).map(|i| i as f64).collect();
    let (slope, ols_intercept) = numeric::ols(&t, values);
    Ok(Trend {
        slope,
        intercept: values[0],
        ols_intercept,
    })
}

/// Lag-1 sample autocorrelation `sum (x_t - m)(x_{t+1} - m) / sum (x_t - m)^2`.
/// Returns `(acf, degenerate)`; a zero-variance input gives `(0, true)`.
pub fn autocorrelation_lag1(values: &[f64]) -> Result<(f64, bool)> {
    let n = values.len();
    if n < 3 {
        return Err(CharacteristicsError::TooShort { op: "autocorrelation", len: n, min: 3 });
    }
    if numeric::is_constant(values) {
        return Ok((0.0, true));
    }
    let m = numeric::mean(values);
    let num = numeric::sum(values.windows(2).map(|w| (w[0] - m) * (w[1] - m)));
    let den = numeric::sum(values.iter().map(|v| (v - m) * (v - m)));
    Ok(((num / den).clamp(-1.0, 1.0), false))
}
