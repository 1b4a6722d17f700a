//! First-order detrended fluctuation analysis.
//!
//! The profile `Y(i) = sum_{t<=i} (x_t - mean)` is cut into non-overlapping
//! windows of size `s` (once from the start and, when `s` does not divide
//! `n`, once more from the end). Each window is detrended by a least-squares
//! line and `F(s)` is the RMS of all residuals. The exponent is the OLS slope
//! of `ln F(s)` on `ln s`. White noise gives about 0.5, a random walk about
//! 1.5 and a linear ramp saturates near 2.

use serde::{Deserialize, Serialize};

use super::{CharacteristicsError, Result};
use crate::numeric;

pub const MIN_DFA_LEN: usize = 100;
/// Minimum number of distinct window sizes in the log-log fit.
pub const MIN_SCALES: usize = 10;
/// Exponents at or above this are flagged as trend-dominated.
pub const SATURATION: f64 = 1.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct DfaConfig {
    pub min_window: usize,
    /// Largest window is `n / max_window_divisor`.
    pub max_window_divisor: usize,
    /// Number of log-spaced window sizes requested before de-duplication.
    pub scales: usize,
}

impl Default for DfaConfig {
    fn default() -> Self {
        Self {
            min_window: 4,
            max_window_divisor: 4,
            scales: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DfaResult {
    pub exponent: f64,
    pub windows: Vec<usize>,
    pub fluctuations: Vec<f64>,
    pub saturated: bool,
    /// No usable fluctuation (constant input); `exponent` is 0.
    pub degenerate: bool,
}

/// Log-spaced integer window sizes in `[min_window, n / divisor]`.
pub fn window_sizes(n: usize, cfg: &DfaConfig) -> Result<Vec<usize>> {
    let lo = cfg.min_window.max(3);
    let hi = n / cfg.max_window_divisor.max(1);
    if hi < lo {
        return Err(CharacteristicsError::InvalidConfig(format!("DFA window range [{lo}, {hi}] is empty")));
    }
    let count = cfg.scales.max(MIN_SCALES);
    let (llo, lhi) = ((lo as f64).ln(), (hi as f64).ln());
    let mut sizes: Vec<usize> = (0..count)
        .map(|i| (llo + (lhi - llo) * i as f64 / (count - 1) as f64).exp().round() as usize)
        .map(|s| s.clamp(lo, hi))
        .collect();
    sizes.dedup();
    if sizes.len() < MIN_SCALES {
        sizes = (lo..=hi).collect();
    }
    if sizes.len() < MIN_SCALES {
        return Err(CharacteristicsError::InvalidConfig(format!(
            "DFA window range [{lo}, {hi}] holds fewer than {MIN_SCALES} sizes"
        )));
    }
    Ok(sizes)
}

pub fn self_similarity_dfa(values: &[f64], cfg: &DfaConfig) -> Result<DfaResult> {
    let n = values.len();
    if n < MIN_DFA_LEN {
        return Err(CharacteristicsError::TooShortForDfa { len: n, min: MIN_DFA_LEN });
    }
    let windows = window_sizes(n, cfg)?;
    if numeric::is_constant(values) {
        return Ok(DfaResult {
            exponent: 0.0,
            fluctuations: vec![0.0; windows.len()],
            windows,
            saturated: false,
            degenerate: true,
        });
    }

    let mean = numeric::mean(values);
    let mut profile = Vec::with_capacity(n);
    let mut acc = 0.0;
    for v in values {
        acc += v - mean;
        profile.push(acc);
    }

    let fluctuations: Vec<f64> = windows.iter().map(|&s| fluctuation(&profile, s)).collect();
    let (log_s, log_f): (Vec<f64>, Vec<f64>) = windows
        .iter()
        .zip(&fluctuations)
        .filter(|(_, f)| **f > 0.0)
        .map(|(s, f)| ((*s as f64).ln(), f.ln()))
        .unzip();
    if log_s.len() < 2 {
        return Ok(DfaResult {
            exponent: 0.0,
            windows,
            fluctuations,
            saturated: false,
            degenerate: true,
        });
    }
    let (exponent, _) = numeric::ols(&log_s, &log_f);
    Ok(DfaResult {
        exponent,
        windows,
        fluctuations,
        saturated: exponent >= SATURATION,
        degenerate: false,
    })
}

/// RMS residual of per-window linear fits to `profile` at window size `s`.
fn fluctuation(profile: &[f64], s: usize) -> f64 {
    let n = profile.len();
    let segments = n / s;
    let mut starts: Vec<usize> = (0..segments).map(|i| i * s).collect();
    if n % s != 0 {
        starts.extend((0..segments).map(|i| n - (i + 1) * s));
    }
    // x = 0..s-1 has a closed-form mean and spread
    let sf = s as f64;
    let xm = (sf - 1.0) / 2.0;
    let sxx = sf * (sf * sf - 1.0) / 12.0;
    let ssr_total = numeric::sum(starts.iter().map(|&start| {
        let seg = &profile[start..start + s];
        let ym = numeric::mean(seg);
        let sxy = numeric::sum(seg.iter().enumerate().map(|(i, y)| (i as f64 - xm) * (y - ym)));
        let slope = sxy / sxx;
        numeric::sum(seg.iter().enumerate().map(|(i, y)| {
            let r = y - ym - slope * (i as f64 - xm);
            r * r
        }))
    }));
    (ssr_total / (starts.len() * s) as f64).sqrt()
}
