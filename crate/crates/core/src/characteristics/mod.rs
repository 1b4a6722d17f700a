//! The sixteen scalar characteristics of a series.
//!
//! Flattened order (the clustering contract depends on it):
//! `mean, standard_deviation, skewness, kurtosis, maximum, minimum,
//! lowerquant, median, upperquant, VaR99, VaR95, slope, intercept,
//! autocorrelation, self_similarity, chaos`.

mod dfa;
mod lyapunov;
mod moments;
mod quantiles;
mod trend;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use dfa::{self_similarity_dfa, window_sizes, DfaConfig, DfaResult, MIN_DFA_LEN, MIN_SCALES, SATURATION};
pub use lyapunov::{chaos_lyapunov, mean_period, LyapunovConfig, LyapunovResult, MIN_LYAPUNOV_LEN};
pub use moments::{moments, Moments};
pub use quantiles::{quantile_sorted, quantiles, Quantiles, LEVELS};
pub use trend::{autocorrelation_lag1, linear_trend, Trend};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CharacteristicsError {
    #[error("empty series")]
    Empty,
    #[error("{op} needs at least {min} values, got {len}")]
    TooShort { op: &'static str, len: usize, min: usize },
    #[error("series of length {len} too short for DFA (need {min})")]
    TooShortForDfa { len: usize, min: usize },
    #[error("series of length {len} too short for Lyapunov estimation (need {min})")]
    TooShortForLyapunov { len: usize, min: usize },
    #[error("no valid nearest neighbours outside the Theiler window")]
    NoValidNeighbors,
    #[error("invalid estimator configuration: {0}")]
    InvalidConfig(String),
    #[error("{field}: {source}")]
    Field {
        field: &'static str,
        #[source]
        source: Box<CharacteristicsError>,
    },
}

pub type Result<T> = std::result::Result<T, CharacteristicsError>;

pub const FEATURE_COUNT: usize = 16;

/// Column names, in flattened order.
pub const NAMES: [&str; FEATURE_COUNT] = [
    "mean",
    "standard_deviation",
    "skewness",
    "kurtosis",
    "maximum",
    "minimum",
    "lowerquant",
    "median",
    "upperquant",
    "VaR99",
    "VaR95",
    "slope",
    "intercept",
    "autocorrelation",
    "self_similarity",
    "chaos",
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharacteristicVector {
    pub mean: f64,
    pub standard_deviation: f64,
    pub skewness: f64,
    pub kurtosis: f64,
    pub maximum: f64,
    pub minimum: f64,
    pub lowerquant: f64,
    pub median: f64,
    pub upperquant: f64,
    #[serde(rename = "VaR99")]
    pub var99: f64,
    #[serde(rename = "VaR95")]
    pub var95: f64,
    /// Per observation (per day).
    pub slope: f64,
    /// First observed value.
    pub intercept: f64,
    pub autocorrelation: f64,
    pub self_similarity: f64,
    /// Per observation (per day).
    pub chaos: f64,
}

impl CharacteristicVector {
    pub fn to_array(&self) -> [f64; FEATURE_COUNT] {
        [
            self.mean,
            self.standard_deviation,
            self.skewness,
            self.kurtosis,
            self.maximum,
            self.minimum,
            self.lowerquant,
            self.median,
            self.upperquant,
            self.var99,
            self.var95,
            self.slope,
            self.intercept,
            self.autocorrelation,
            self.self_similarity,
            self.chaos,
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureFlag {
    /// Zero variance (or too few points): skewness and kurtosis are 0.
    DegenerateMoments,
    DegenerateAutocorrelation,
    DegenerateDfa,
    SaturatedDfa,
    DegenerateLyapunov,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct CharacteristicsConfig {
    pub dfa: DfaConfig,
    pub lyapunov: LyapunovConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacteristicReport {
    pub vector: CharacteristicVector,
    pub flags: Vec<FeatureFlag>,
    /// OLS intercept of the trend line, kept outside the vector.
    pub ols_intercept: f64,
}

fn field<T>(name: &'static str, r: Result<T>) -> Result<T> {
    r.map_err(|e| CharacteristicsError::Field {
        field: name,
        source: Box::new(e),
    })
}

pub fn compute_characteristics(values: &[f64], cfg: &CharacteristicsConfig) -> Result<CharacteristicReport> {
    let mo = field("moments", moments(values))?;
    let q = field("quantiles", quantiles(values))?;
    let tr = field("slope", linear_trend(values))?;
    let (acf, acf_degenerate) = field("autocorrelation", autocorrelation_lag1(values))?;
    let dfa = field("self_similarity", self_similarity_dfa(values, &cfg.dfa))?;
    let ly = field("chaos", chaos_lyapunov(values, &cfg.lyapunov))?;

    let mut flags = Vec::new();
    if mo.degenerate {
        flags.push(FeatureFlag::DegenerateMoments);
    }
    if acf_degenerate {
        flags.push(FeatureFlag::DegenerateAutocorrelation);
    }
    if dfa.degenerate {
        flags.push(FeatureFlag::DegenerateDfa);
    }
    if dfa.saturated {
        flags.push(FeatureFlag::SaturatedDfa);
    }
    if ly.degenerate {
        flags.push(FeatureFlag::DegenerateLyapunov);
    }

    Ok(CharacteristicReport {
        vector: CharacteristicVector {
            mean: mo.mean,
            standard_deviation: mo.standard_deviation,
            skewness: mo.skewness,
            kurtosis: mo.kurtosis,
            maximum: q.maximum,
            minimum: q.minimum,
            lowerquant: q.lowerquant,
            median: q.median,
            upperquant: q.upperquant,
            var99: q.var99,
            var95: q.var95,
            slope: tr.slope,
            intercept: tr.intercept,
            autocorrelation: acf,
            self_similarity: dfa.exponent,
            chaos: ly.exponent,
        },
        flags,
        ols_intercept: tr.ols_intercept,
    })
}
