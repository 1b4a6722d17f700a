//! Run configuration, loadable from TOML. Every field has a default; a file
//! need only list what it changes.
//!
//! ```toml
//! data_dir = "data/snapshot/series"
//! profiles_path = "data/snapshot/profiles.toml"
//! metrics = ["price_usd", "block_time_minutes", "block_size_bytes"]
//! bins = 200
//! k_max = 6
//! seed = 42
//! restarts = 50
//! # sigma = 12.5           # kernel bandwidth; median pairwise distance if absent
//! min_len = 30
//! lenient = true
//! # threads = 4           # worker pool size; all cores if absent
//! output_dir = "out"
//!
//! [dfa]
//! min_window = 4
//! max_window_divisor = 4
//! scales = 20
//!
//! [lyapunov]
//! embedding_dim = 3
//! delay = 1
//! fit_start = 1
//! # fit_end = 20          # min(20, n / 50) if absent
//! # theiler_window = 10   # mean period if absent
//! saturation_fraction = 0.7
//! saturation_rise = 1.0
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::characteristics::{CharacteristicsConfig, DfaConfig, LyapunovConfig};
use crate::clustering::{ClusterConfig, FeatureConfig, DEFAULT_K_MAX, DEFAULT_RESTARTS, DEFAULT_SEED};
use crate::ingest::{DatasetOptions, LoadOptions, Metric};
use crate::spectrum::DEFAULT_BINS;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("config {path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: toml::de::Error,
    },
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Directory of `<coin_id>.<metric>.csv` files.
    pub data_dir: PathBuf,
    pub profiles_path: PathBuf,
    pub metrics: Vec<Metric>,
    /// Spectrum bins `K`.
    pub bins: usize,
    pub k_max: usize,
    pub seed: u64,
    pub restarts: usize,
    pub sigma: Option<f64>,
    pub dfa: DfaConfig,
    pub lyapunov: LyapunovConfig,
    /// Minimum usable rows per series.
    pub min_len: usize,
    /// Skip unreadable series files instead of failing the metric.
    pub lenient: bool,
    pub threads: Option<usize>,
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            data_dir: PathBuf::from("data/snapshot/series"),
            profiles_path: PathBuf::from("data/snapshot/profiles.toml"),
            metrics: Metric::ALL.to_vec(),
            bins: DEFAULT_BINS,
            k_max: DEFAULT_K_MAX,
            seed: DEFAULT_SEED,
            restarts: DEFAULT_RESTARTS,
            sigma: None,
            dfa: DfaConfig::default(),
            lyapunov: LyapunovConfig::default(),
            min_len: LoadOptions::default().min_len,
            lenient: true,
            threads: None,
            output_dir: PathBuf::from("out"),
        }
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str, origin: &Path) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|source| ConfigError::Parse {
            path: origin.to_path_buf(),
            source,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ConfigError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&text, path)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always representable")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: &str| Err(ConfigError::Invalid(m.to_string()));
        if self.metrics.is_empty() {
            return bad("no metrics selected");
        }
        if self.bins < 2 {
            return bad("bins must be at least 2");
        }
        if self.k_max < 2 {
            return bad("k_max must be at least 2");
        }
        if self.restarts == 0 {
            return bad("restarts must be at least 1");
        }
        if let Some(s) = self.sigma {
            if !(s > 0.0 && s.is_finite()) {
                return bad("sigma must be positive and finite");
            }
        }
        if self.threads == Some(0) {
            return bad("threads must be at least 1");
        }
        Ok(())
    }

    pub fn feature_config(&self) -> FeatureConfig {
        FeatureConfig {
            characteristics: CharacteristicsConfig {
                dfa: self.dfa,
                lyapunov: self.lyapunov,
            },
            bins: self.bins,
        }
    }

    pub fn cluster_config(&self) -> ClusterConfig {
        ClusterConfig {
            k_max: self.k_max,
            seed: self.seed,
            sigma: self.sigma,
            restarts: self.restarts,
        }
    }

    pub fn dataset_options(&self) -> DatasetOptions {
        DatasetOptions {
            load: LoadOptions { min_len: self.min_len },
            lenient: self.lenient,
        }
    }
}
