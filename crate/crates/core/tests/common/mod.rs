#![allow(dead_code)]

pub mod oracle;

use std::path::PathBuf;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `|a - b| <= tol * max(|a|, |b|, 1)`.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

pub fn white_noise(n: usize, seed: u64) -> Vec<f64> {
    let mut r = rng(seed);
    (0..n).map(|_| r.sample(StandardNormal)).collect()
}

pub fn random_walk(n: usize, seed: u64) -> Vec<f64> {
    let mut acc = 0.0;
    white_noise(n, seed)
        .into_iter()
        .map(|e| {
            acc += e;
            acc
        })
        .collect()
}

pub fn ar1(n: usize, phi: f64, seed: u64) -> Vec<f64> {
    let mut x = 0.0;
    white_noise(n, seed)
        .into_iter()
        .map(|e| {
            x = phi * x + e;
            x
        })
        .collect()
}

pub fn line(n: usize, a: f64, b: f64) -> Vec<f64> {
    (0..n).map(|t| a + b * t as f64).collect()
}

pub fn logistic(n: usize, x0: f64) -> Vec<f64> {
    let mut x = x0;
    (0..n)
        .map(|_| {
            x = 4.0 * x * (1.0 - x);
            x
        })
        .collect()
}

pub fn sine(n: usize, period: f64, phase: f64) -> Vec<f64> {
    (0..n).map(|t| (2.0 * std::f64::consts::PI * t as f64 / period + phase).sin()).collect()
}

/// `m` points in `d` dimensions drawn around `centres` random centres.
pub fn blobs(m: usize, d: usize, centres: usize, spread: f64, seed: u64) -> DMatrix<f64> {
    let mut r = rng(seed);
    let c: Vec<Vec<f64>> = (0..centres).map(|_| (0..d).map(|_| r.random_range(-3.0..3.0)).collect()).collect();
    DMatrix::from_fn(m, d, |i, j| c[i % centres][j] + spread * r.sample::<f64, _>(StandardNormal))
}

pub fn to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

pub fn coins(m: usize) -> Vec<String> {
    (0..m).map(|i| format!("coin{i:02}")).collect()
}

/// Workspace root, for the shipped snapshot.
pub fn workspace_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..").canonicalize().expect("workspace root")
}
