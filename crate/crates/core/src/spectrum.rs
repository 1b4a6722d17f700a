//! Power spectrum features.
//!
//! The raw periodogram of a length-`n` series lives on the grid `k / n`,
//! `k = 1..=n/2`, which differs between coins. [`resample_spectrum`] maps it
//! onto a fixed grid of `K` normalised frequencies `j / K * 0.5`,
//! `j = 1..=K`, so every coin contributes the same number of columns.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numeric;

pub const DEFAULT_BINS: usize = 200;
pub const MIN_SPECTRUM_LEN: usize = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectrumError {
    #[error("series of length {len} is too short for a spectrum (need {MIN_SPECTRUM_LEN})")]
    TooShortForSpectrum { len: usize },
    #[error("periodogram is empty")]
    EmptyPower,
    #[error("frequency and power lengths differ ({frequencies} vs {power})")]
    LengthMismatch { frequencies: usize, power: usize },
    #[error("need at least 2 output bins, got {0}")]
    TooFewBins(usize),
}

/// Squared DFT magnitudes at the positive frequencies of a demeaned series.
#[derive(Debug, Clone, PartialEq)]
pub struct Periodogram {
    /// Cycles per observation (cycles/day for daily data).
    pub frequencies: Vec<f64>,
    pub power: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerSpectrum {
    pub bins: Vec<f64>,
    pub normalized_frequencies: Vec<f64>,
    /// Set when the input carried no power; `bins` is then uniform.
    pub degenerate: bool,
}

impl PowerSpectrum {
    /// Column names `psd_001 ... psd_K`.
    pub fn column_names(bins: usize) -> Vec<String> {
        (1..=bins).map(|j| format!("psd_{j:03}")).collect()
    }
}

/// Demeans, transforms with an FFT and returns `|f_k|^2` for
/// `k = 1..=n/2` (the DC term is dropped).
pub fn periodogram(values: &[f64]) -> Result<Periodogram, SpectrumError> {
    let n = values.len();
    if n < MIN_SPECTRUM_LEN {
        return Err(SpectrumError::TooShortForSpectrum { len: n });
    }
    let half = n / 2;
    let frequencies = (1..=half).map(|k| k as f64 / n as f64).collect();
    if numeric::is_constant(values) {
        return Ok(Periodogram {
            frequencies,
            power: vec![0.0; half],
        });
    }

    let mean = numeric::mean(values);
    let mut buf: Vec<Complex<f64>> = values.iter().map(|&v| Complex::new(v - mean, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let power = buf[1..=half].iter().map(|c| c.norm_sqr()).collect();
    Ok(Periodogram { frequencies, power })
}

/// Normalises `power` to unit mass, interpolates it linearly onto the
/// `bins`-point grid and renormalises. Grid points outside the input
/// frequency range take the nearest endpoint value.
pub fn resample_spectrum(frequencies: &[f64], power: &[f64], bins: usize) -> Result<PowerSpectrum, SpectrumError> {
    if power.is_empty() {
        return Err(SpectrumError::EmptyPower);
    }
    if frequencies.len() != power.len() {
        return Err(SpectrumError::LengthMismatch {
            frequencies: frequencies.len(),
            power: power.len(),
        });
    }
    if bins < 2 {
        return Err(SpectrumError::TooFewBins(bins));
    }

    let grid = target_grid(bins);
    let total = numeric::sum(power.iter().copied());
    if !(total > 0.0) || !total.is_finite() {
        return Ok(PowerSpectrum {
            bins: vec![1.0 / bins as f64; bins],
            normalized_frequencies: grid,
            degenerate: true,
        });
    }
    let normalized: Vec<f64> = power.iter().map(|p| p / total).collect();

    let interpolated: Vec<f64> = grid.iter().map(|&nu| interpolate(frequencies, &normalized, nu)).collect();
    let mass = numeric::sum(interpolated.iter().copied());
    let out = if mass > 0.0 {
        interpolated.iter().map(|p| p / mass).collect()
    } else {
        vec![1.0 / bins as f64; bins]
    };
    Ok(PowerSpectrum {
        bins: out,
        normalized_frequencies: grid,
        degenerate: !(mass > 0.0),
    })
}

pub fn spectrum_feature(values: &[f64], bins: usize) -> Result<PowerSpectrum, SpectrumError> {
    let pg = periodogram(values)?;
    resample_spectrum(&pg.frequencies, &pg.power, bins)
}

fn target_grid(bins: usize) -> Vec<f64> {
    (1..=bins).map(|j| j as f64 / bins as f64 * 0.5).collect()
}

fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let last = xs.len() - 1;
    if x <= xs[0] {
        return ys[0];
    }
    if x >= xs[last] {
        return ys[last];
    }
    // first index with xs[i] >= x; 1 <= i <= last here
    let i = xs.partition_point(|&v| v < x);
    if xs[i] == x {
        return ys[i];
    }
    let (x0, x1) = (xs[i - 1], xs[i]);
    let w = (x - x0) / (x1 - x0);
    ys[i - 1] + w * (ys[i] - ys[i - 1])
}
