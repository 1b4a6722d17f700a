//! Feature matrix assembly and normalised spectral clustering.
//!
//! The pipeline is standardise, Gaussian similarity with the median-distance
//! bandwidth, Ng–Jordan–Weiss embedding, then seeded k-means. The number of
//! clusters is the largest `k <= k_max` whose partition has no singleton.

mod embed;
mod features;
mod kmeans;
mod similarity;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::Metric;

pub use embed::{normalized_laplacian, sorted_eigen, spectral_embed, Embedding};
pub use features::{
    assemble_features, column_names, extract_features, feature_matrix, standardize, write_features_csv,
    CoinFeatures, ColumnScale, Excluded, FeatureConfig, FeatureMatrix,
};
pub use kmeans::{inertia, kmeans, KMeansResult, DEFAULT_RESTARTS};
pub use similarity::{median_heuristic, pairwise_distances, similarity_matrix, Similarity};

pub const DEFAULT_K_MAX: usize = 6;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClusteringError {
    #[error("no coin produced a complete feature row")]
    NoUsableCoins,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("non-finite feature `{column}` for `{coin}`")]
    NonFinite { coin: String, column: String },
    #[error("{got} coins, need at least {need}")]
    TooFewCoins { got: usize, need: usize },
    #[error("all pairwise distances are zero")]
    DegenerateGeometry,
    #[error("kernel bandwidth must be positive and finite, got {0}")]
    InvalidSigma(f64),
    #[error("eigendecomposition did not converge")]
    EigenFailure,
    #[error("k = {k} is invalid for {m} coins")]
    InvalidK { k: usize, m: usize },
}

pub type Result<T> = std::result::Result<T, ClusteringError>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ClusterConfig {
    pub k_max: usize,
    pub seed: u64,
    /// Kernel bandwidth; median pairwise distance when unset.
    pub sigma: Option<f64>,
    pub restarts: usize,
}

impl Default for ClusterConfig {
    fn default() -> Self {
        Self {
            k_max: DEFAULT_K_MAX,
            seed: DEFAULT_SEED,
            sigma: None,
            restarts: DEFAULT_RESTARTS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClusterFlag {
    /// Every `k` in `2..=k_max` produced a singleton; the `k = 2` result is kept.
    SingletonConstraintViolated,
    /// All coins coincide in feature space; labels are an arbitrary split.
    DegenerateGeometry,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterAssignment {
    pub coin_ids: Vec<String>,
    /// Canonical ids: cluster `c` is the one whose alphabetically first coin
    /// sorts `c`-th among the clusters' first coins.
    pub labels: Vec<usize>,
    pub k: usize,
    pub embedding: DMatrix<f64>,
    pub eigenvalues: Vec<f64>,
    pub seed: u64,
    pub sigma: f64,
    pub inertia: f64,
    pub flags: Vec<ClusterFlag>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterMembers {
    pub id: usize,
    pub coins: Vec<String>,
}

/// Wire form of an assignment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssignmentRecord {
    pub metric: Metric,
    pub k: usize,
    pub seed: u64,
    pub clusters: Vec<ClusterMembers>,
    pub eigenvalues: Vec<f64>,
    pub flags: Vec<ClusterFlag>,
}

impl ClusterAssignment {
    pub fn sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.k];
        for &l in &self.labels {
            s[l] += 1;
        }
        s
    }

    pub fn has_singleton(&self) -> bool {
        self.sizes().iter().any(|&s| s < 2)
    }

    /// Member coins per cluster id, each list sorted.
    pub fn clusters(&self) -> Vec<ClusterMembers> {
        (0..self.k)
            .map(|id| {
                let mut coins: Vec<String> = self
                    .coin_ids
                    .iter()
                    .zip(&self.labels)
                    .filter(|(_, &l)| l == id)
                    .map(|(c, _)| c.clone())
                    .collect();
                coins.sort();
                ClusterMembers { id, coins }
            })
            .collect()
    }

    pub fn label_of(&self, coin: &str) -> Option<usize> {
        self.coin_ids.iter().position(|c| c == coin).map(|i| self.labels[i])
    }

    /// `m x m` indicator of shared membership, rows in `coin_ids` order.
    pub fn co_membership(&self) -> DMatrix<u8> {
        let m = self.labels.len();
        DMatrix::from_fn(m, m, |i, j| u8::from(self.labels[i] == self.labels[j]))
    }

    pub fn record(&self, metric: Metric) -> AssignmentRecord {
        AssignmentRecord {
            metric,
            k: self.k,
            seed: self.seed,
            clusters: self.clusters(),
            eigenvalues: self.eigenvalues.clone(),
            flags: self.flags.clone(),
        }
    }
}

/// Relabels so clusters are numbered by their alphabetically first coin.
pub fn canonical_labels(coin_ids: &[String], labels: &[usize], k: usize) -> Vec<usize> {
    let mut first: Vec<Option<&String>> = vec![None; k];
    for (coin, &l) in coin_ids.iter().zip(labels) {
        if first[l].is_none_or(|f| coin < f) {
            first[l] = Some(coin);
        }
    }
    let mut order: Vec<usize> = (0..k).filter(|&c| first[c].is_some()).collect();
    order.sort_by(|&a, &b| first[a].cmp(&first[b]));
    let mut map = vec![usize::MAX; k];
    for (new, &old) in order.iter().enumerate() {
        map[old] = new;
    }
    labels.iter().map(|&l| map[l]).collect()
}

/// Embeds and clusters a standardised matrix for one fixed `k`.
pub fn cluster_with_k(matrix: &FeatureMatrix, k: usize, cfg: &ClusterConfig) -> Result<ClusterAssignment> {
    let sim = similarity_matrix(&matrix.rows, cfg.sigma)?;
    cluster_similarity(&matrix.coin_ids, &sim, k, cfg)
}

fn cluster_similarity(coin_ids: &[String], sim: &Similarity, k: usize, cfg: &ClusterConfig) -> Result<ClusterAssignment> {
    let emb = spectral_embed(&sim.matrix, k)?;
    let km = kmeans(&emb.coords, k, cfg.seed, cfg.restarts.max(1));
    Ok(ClusterAssignment {
        coin_ids: coin_ids.to_vec(),
        labels: canonical_labels(coin_ids, &km.labels, k),
        k,
        embedding: emb.coords,
        eigenvalues: emb.eigenvalues,
        seed: cfg.seed,
        sigma: sim.sigma,
        inertia: km.inertia,
        flags: vec![],
    })
}

/// Tries `k = k_max, k_max - 1, ..., 2` and keeps the first partition without
/// a singleton cluster. `matrix` must already be standardised.
pub fn select_k_and_cluster(matrix: &FeatureMatrix, cfg: &ClusterConfig) -> Result<ClusterAssignment> {
    let m = matrix.coin_ids.len();
    if m != matrix.rows.nrows() {
        return Err(ClusteringError::Shape(format!("{m} coin ids for {} rows", matrix.rows.nrows())));
    }
    if m < 4 {
        return Err(ClusteringError::TooFewCoins { got: m, need: 4 });
    }
    if cfg.k_max < 2 || cfg.k_max >= m {
        return Err(ClusteringError::InvalidK { k: cfg.k_max, m });
    }
    let sim = match similarity_matrix(&matrix.rows, cfg.sigma) {
        Ok(s) => s,
        Err(ClusteringError::DegenerateGeometry) => return Ok(degenerate_assignment(&matrix.coin_ids, cfg)),
        Err(e) => return Err(e),
    };
    let mut last = None;
    for k in (2..=cfg.k_max).rev() {
        let a = cluster_similarity(&matrix.coin_ids, &sim, k, cfg)?;
        if !a.has_singleton() {
            return Ok(a);
        }
        last = Some(a);
    }
    let mut a = last.expect("k_max >= 2");
    a.flags.push(ClusterFlag::SingletonConstraintViolated);
    Ok(a)
}

/// Standardises a raw feature matrix, then selects `k` and clusters.
pub fn cluster_features(raw: &FeatureMatrix, cfg: &ClusterConfig) -> Result<(FeatureMatrix, ClusterAssignment)> {
    let z = standardize(raw)?;
    let a = select_k_and_cluster(&z, cfg)?;
    Ok((z, a))
}

fn degenerate_assignment(coin_ids: &[String], cfg: &ClusterConfig) -> ClusterAssignment {
    let m = coin_ids.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| coin_ids[a].cmp(&coin_ids[b]));
    let mut labels = vec![0; m];
    for (rank, &i) in order.iter().enumerate() {
        labels[i] = usize::from(rank >= m / 2);
    }
    ClusterAssignment {
        coin_ids: coin_ids.to_vec(),
        labels,
        k: 2,
        embedding: DMatrix::zeros(m, 2),
        eigenvalues: vec![],
        seed: cfg.seed,
        sigma: 0.0,
        inertia: 0.0,
        flags: vec![ClusterFlag::DegenerateGeometry],
    }
}
