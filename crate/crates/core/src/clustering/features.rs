use std::io::Write;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ClusteringError, Result};
use crate::characteristics::{self, CharacteristicReport, CharacteristicsConfig, FEATURE_COUNT, NAMES};
use crate::ingest::Dataset;
use crate::spectrum::{self, PowerSpectrum};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FeatureConfig {
    pub characteristics: CharacteristicsConfig,
    /// Spectrum bins `K`; the feature space has `16 + K` columns.
    pub bins: usize,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        Self {
            characteristics: CharacteristicsConfig::default(),
            bins: spectrum::DEFAULT_BINS,
        }
    }
}

/// Everything extracted from one coin's series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoinFeatures {
    pub coin_id: String,
    pub characteristics: CharacteristicReport,
    pub spectrum: PowerSpectrum,
}

impl CoinFeatures {
    pub fn row(&self) -> Vec<f64> {
        let mut row = self.characteristics.vector.to_array().to_vec();
        row.extend_from_slice(&self.spectrum.bins);
        row
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Excluded {
    pub coin_id: String,
    pub reason: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ColumnScale {
    pub mean: f64,
    pub sd: f64,
}

/// Coins by features, one row per coin in `coin_ids` order.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub coin_ids: Vec<String>,
    pub column_names: Vec<String>,
    pub rows: DMatrix<f64>,
    /// Per-column scaling applied, when standardised.
    pub standardization: Option<Vec<ColumnScale>>,
    /// Constant columns removed by standardisation.
    pub dropped_columns: Vec<String>,
}

pub fn column_names(bins: usize) -> Vec<String> {
    NAMES.iter().map(|s| s.to_string()).chain(PowerSpectrum::column_names(bins)).collect()
}

/// Computes characteristics and spectra for every coin, in parallel.
/// Coins whose series fail a precondition are returned as exclusions.
pub fn extract_features(dataset: &Dataset, cfg: &FeatureConfig) -> (Vec<CoinFeatures>, Vec<Excluded>) {
    let results: Vec<_> = dataset
        .series
        .par_iter()
        .map(|(coin, s)| {
            let ch = characteristics::compute_characteristics(&s.values, &cfg.characteristics).map_err(|e| e.to_string());
            let sp = spectrum::spectrum_feature(&s.values, cfg.bins).map_err(|e| format!("spectrum: {e}"));
            (coin.clone(), ch.and_then(|c| sp.map(|p| (c, p))))
        })
        .collect();

    let mut ok = Vec::new();
    let mut excluded = Vec::new();
    for (coin_id, r) in results {
        match r {
            Ok((characteristics, spectrum)) => ok.push(CoinFeatures {
                coin_id,
                characteristics,
                spectrum,
            }),
            Err(reason) => excluded.push(Excluded { coin_id, reason }),
        }
    }
    (ok, excluded)
}

pub fn feature_matrix(features: &[CoinFeatures], bins: usize) -> Result<FeatureMatrix> {
    if features.is_empty() {
        return Err(ClusteringError::NoUsableCoins);
    }
    let width = FEATURE_COUNT + bins;
    let mut data = Vec::with_capacity(features.len() * width);
    for f in features {
        let row = f.row();
        if row.len() != width {
            return Err(ClusteringError::Shape(format!("{}: {} columns, expected {width}", f.coin_id, row.len())));
        }
        if let Some(bad) = row.iter().position(|v| !v.is_finite()) {
            return Err(ClusteringError::NonFinite {
                coin: f.coin_id.clone(),
                column: column_names(bins)[bad].clone(),
            });
        }
        data.extend(row);
    }
    Ok(FeatureMatrix {
        coin_ids: features.iter().map(|f| f.coin_id.clone()).collect(),
        column_names: column_names(bins),
        rows: DMatrix::from_row_slice(features.len(), width, &data),
        standardization: None,
        dropped_columns: Vec::new(),
    })
}

/// Raw `m x (16 + K)` matrix of a dataset plus the coins left out of it.
pub fn assemble_features(dataset: &Dataset, cfg: &FeatureConfig) -> Result<(FeatureMatrix, Vec<Excluded>)> {
    let (features, excluded) = extract_features(dataset, cfg);
    Ok((feature_matrix(&features, cfg.bins)?, excluded))
}

/// Z-scores every column (sample sd, `n - 1`); constant columns are dropped.
pub fn standardize(matrix: &FeatureMatrix) -> Result<FeatureMatrix> {
    let m = matrix.rows.nrows();
    if m < 2 {
        return Err(ClusteringError::TooFewCoins { got: m, need: 2 });
    }
    let mut kept = Vec::new();
    let mut scales = Vec::new();
    let mut dropped = Vec::new();
    for (j, name) in matrix.column_names.iter().enumerate() {
        let col: Vec<f64> = matrix.rows.column(j).iter().copied().collect();
        if col.windows(2).all(|w| w[0] == w[1]) {
            dropped.push(name.clone());
            continue;
        }
        let mean = crate::numeric::mean(&col);
        let var = crate::numeric::sum(col.iter().map(|v| (v - mean) * (v - mean))) / (m - 1) as f64;
        let sd = var.sqrt();
        if !(sd > 0.0) {
            dropped.push(name.clone());
            continue;
        }
        kept.push((name.clone(), col.iter().map(|v| (v - mean) / sd).collect::<Vec<f64>>()));
        scales.push(ColumnScale { mean, sd });
    }
    let (names, cols): (Vec<String>, Vec<Vec<f64>>) = kept.into_iter().unzip();
    let rows = DMatrix::from_fn(m, cols.len(), |i, j| cols[j][i]);
    let mut dropped_columns = matrix.dropped_columns.clone();
    dropped_columns.extend(dropped);
    Ok(FeatureMatrix {
        coin_ids: matrix.coin_ids.clone(),
        column_names: names,
        rows,
        standardization: Some(scales),
        dropped_columns,
    })
}

/// CSV with header `coin_id,mean,...,chaos,psd_001,...,psd_K`, one row per
/// coin in the given order. Values use shortest round-trip formatting.
pub fn write_features_csv<W: Write>(features: &[CoinFeatures], bins: usize, mut out: W) -> std::io::Result<()> {
    writeln!(out, "coin_id,{}", column_names(bins).join(","))?;
    for f in features {
        let cells: Vec<String> = f.row().iter().map(|v| v.to_string()).collect();
        writeln!(out, "{},{}", f.coin_id, cells.join(","))?;
    }
    Ok(())
}
