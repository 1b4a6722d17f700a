//! Largest Lyapunov exponent by Rosenstein's method.
//!
//! 1. Delay-embed the series: `X_i = (x_i, x_{i+tau}, ..., x_{i+(m-1)tau})`.
//! 2. Pair every `X_i` with its nearest neighbour `X_j`, `|i - j| > w`, where
//!    the Theiler window `w` defaults to the mean period (reciprocal of the
//!    power-weighted mean frequency). Distances at rounding level
//!    ([`RESOLUTION`] times the standard deviation) do not count as neighbours.
//! 3. `y(k)` = mean over pairs of `ln |X_{i+k} - X_{j+k}|`.
//! 4. The exponent is the OLS slope of `y(k)` over the initial linear part of
//!    the fit range. When the curve rises by more than
//!    [`LyapunovConfig::saturation_rise`] nats, the range is cut at the first
//!    step reaching [`LyapunovConfig::saturation_fraction`] of that rise.

use serde::{Deserialize, Serialize};

use super::{CharacteristicsError, Result};
use crate::{numeric, spectrum};

pub const MIN_LYAPUNOV_LEN: usize = 200;
/// Neighbour distances below this fraction of the series' standard deviation are ignored.
pub const RESOLUTION: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LyapunovConfig {
    pub embedding_dim: usize,
    pub delay: usize,
    pub fit_start: usize,
    /// Last divergence step; defaults to `min(20, n / 50)`.
    pub fit_end: Option<usize>,
    /// Temporal exclusion for neighbours; defaults to the mean period.
    pub theiler_window: Option<usize>,
    pub saturation_fraction: f64,
    pub saturation_rise: f64,
}

impl Default for LyapunovConfig {
    fn default() -> Self {
        Self {
            embedding_dim: 3,
            delay: 1,
            fit_start: 1,
            fit_end: None,
            theiler_window: None,
            saturation_fraction: 0.7,
            saturation_rise: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LyapunovResult {
    pub exponent: f64,
    /// Mean log-divergence `y(0..=fit_end)`.
    pub divergence: Vec<f64>,
    /// Inclusive step range the slope was fitted on.
    pub fit_range: (usize, usize),
    pub theiler_window: usize,
    /// Constant input; `exponent` is 0.
    pub degenerate: bool,
}

/// Power-weighted mean period in samples, rounded up; 1 for flat spectra.
pub fn mean_period(values: &[f64]) -> usize {
    let Ok(pg) = spectrum::periodogram(values) else {
        return 1;
    };
    let total = numeric::sum(pg.power.iter().copied());
    if !(total > 0.0) {
        return 1;
    }
    let mean_freq = numeric::sum(pg.frequencies.iter().zip(&pg.power).map(|(f, p)| f * p)) / total;
    (1.0 / mean_freq).ceil().max(1.0) as usize
}

pub fn chaos_lyapunov(values: &[f64], cfg: &LyapunovConfig) -> Result<LyapunovResult> {
    let n = values.len();
    if n < MIN_LYAPUNOV_LEN {
        return Err(CharacteristicsError::TooShortForLyapunov { len: n, min: MIN_LYAPUNOV_LEN });
    }
    if cfg.embedding_dim == 0 || cfg.delay == 0 {
        return Err(CharacteristicsError::InvalidConfig("embedding dimension and delay must be positive".into()));
    }
    let fit_end = cfg.fit_end.unwrap_or_else(|| (n / 50).min(20));
    if fit_end < cfg.fit_start + 1 {
        return Err(CharacteristicsError::InvalidConfig(format!(
            "Lyapunov fit range [{}, {fit_end}] needs at least two steps",
            cfg.fit_start
        )));
    }
    let span = (cfg.embedding_dim - 1) * cfg.delay;
    if span + fit_end + 2 >= n {
        return Err(CharacteristicsError::InvalidConfig("embedding window exceeds series length".into()));
    }
    if numeric::is_constant(values) {
        return Ok(LyapunovResult {
            exponent: 0.0,
            divergence: vec![],
            fit_range: (cfg.fit_start, fit_end),
            theiler_window: 0,
            degenerate: true,
        });
    }

    let theiler = cfg.theiler_window.unwrap_or_else(|| mean_period(values));
    // Neighbours closer than this are float-rounding recurrences, not true neighbours.
    let resolution = RESOLUTION * spread(values);
    let points = n - span;
    let embed = |i: usize| (0..cfg.embedding_dim).map(move |d| values[i + d * cfg.delay]);
    let dist = |a: usize, b: usize| -> f64 { embed(a).zip(embed(b)).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt() };

    // Only points that can be followed for fit_end steps take part.
    let usable = points - fit_end;
    let mut neighbours: Vec<Option<usize>> = vec![None; usable];
    for (i, slot) in neighbours.iter_mut().enumerate() {
        let mut best = f64::INFINITY;
        for j in 0..usable {
            if i.abs_diff(j) <= theiler {
                continue;
            }
            let d = dist(i, j);
            if d > resolution && d < best {
                best = d;
                *slot = Some(j);
            }
        }
    }
    let pairs: Vec<(usize, usize)> = neighbours.iter().enumerate().filter_map(|(i, j)| j.map(|j| (i, j))).collect();
    if pairs.is_empty() {
        return Err(CharacteristicsError::NoValidNeighbors);
    }

    let divergence: Vec<f64> = (0..=fit_end)
        .map(|k| {
            let logs: Vec<f64> = pairs
                .iter()
                .map(|&(i, j)| dist(i + k, j + k))
                .filter(|&d| d > 0.0)
                .map(f64::ln)
                .collect();
            if logs.is_empty() {
                f64::NAN
            } else {
                numeric::mean(&logs)
            }
        })
        .collect();
    if divergence.iter().any(|y| !y.is_finite()) {
        return Err(CharacteristicsError::NoValidNeighbors);
    }

    let end = linear_region_end(&divergence, cfg.fit_start, fit_end, cfg);
    let ks: Vec<f64> = (cfg.fit_start..=end).map(|k| k as f64).collect();
    let (exponent, _) = numeric::ols(&ks, &divergence[cfg.fit_start..=end]);
    Ok(LyapunovResult {
        exponent,
        divergence,
        fit_range: (cfg.fit_start, end),
        theiler_window: theiler,
        degenerate: false,
    })
}

fn spread(values: &[f64]) -> f64 {
    let m = numeric::mean(values);
    (numeric::sum(values.iter().map(|v| (v - m) * (v - m))) / values.len() as f64).sqrt()
}

fn linear_region_end(y: &[f64], start: usize, end: usize, cfg: &LyapunovConfig) -> usize {
    let base = y[0];
    let top = y[..=end].iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let rise = top - base;
    if !(rise > cfg.saturation_rise) {
        return end;
    }
    let threshold = base + cfg.saturation_fraction * rise;
    let min_end = (start + 2).min(end);
    (min_end..=end).find(|&k| y[k] >= threshold).unwrap_or(end)
}
