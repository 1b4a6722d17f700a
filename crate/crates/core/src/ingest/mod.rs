//! File-based ingestion of per-coin daily series and mechanism profiles.
//!
//! Series live in one directory as `<coin_id>.<metric>.csv` with a
//! `date,value` header. Profiles live in a single TOML file with one
//! `[[coin]]` table per coin; see `docs/profiles.md` for the grammar.

mod dataset;
pub mod fetch;
mod profiles;
mod series;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use dataset::{build_dataset, build_dataset_with_profiles, Dataset, DatasetOptions, Rejected};
pub use profiles::{
    load_profiles, parse_profiles, BlockSizeLimit, BlockSizeLimitKind, Consensus, Governance,
    MechanismProfile,
};
pub use series::{load_series, parse_series, write_series_csv, Gap, LoadOptions, LoadedSeries, Series};

/// The three daily metrics a coin can be observed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    PriceUsd,
    BlockTimeMinutes,
    BlockSizeBytes,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::PriceUsd, Metric::BlockTimeMinutes, Metric::BlockSizeBytes];

    /// Token used in file names and on the command line.
    pub fn as_str(self) -> &'static str {
        match self {
            Metric::PriceUsd => "price_usd",
            Metric::BlockTimeMinutes => "block_time_minutes",
            Metric::BlockSizeBytes => "block_size_bytes",
        }
    }

    /// Block metrics must be strictly positive; prices only non-negative.
    pub fn requires_positive(self) -> bool {
        !matches!(self, Metric::PriceUsd)
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Metric {
    type Err = IngestError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Metric::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| IngestError::UnknownMetric(s.to_string()))
    }
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed csv at line {line}: {reason}")]
    MalformedCsv { line: u64, reason: String },
    #[error("series too short: {retained} usable rows, need at least {min_len}")]
    TooShort { retained: usize, min_len: usize },
    #[error("non-positive {metric} value {value} at line {line}")]
    NonPositive { metric: Metric, line: u64, value: f64 },
    #[error("negative price {value} at line {line}")]
    NegativeValue { line: u64, value: f64 },
    #[error("dates not strictly increasing at line {line}")]
    NonMonotoneDates { line: u64 },
    #[error("unknown metric token `{0}`")]
    UnknownMetric(String),
    #[error("profiles file syntax: {0}")]
    ProfileSyntax(String),
    #[error("coin `{coin}`: unknown token `{token}` for `{field}`")]
    UnknownEnumToken { coin: String, field: &'static str, token: String },
    #[error("duplicate coin `{0}` in profiles")]
    DuplicateCoin(String),
    #[error("profile #{index} ({coin}): missing required field `{field}`")]
    MissingRequiredField { index: usize, coin: String, field: &'static str },
    #[error("coin `{coin}`: invalid value for `{field}`: {reason}")]
    InvalidField { coin: String, field: &'static str, reason: String },
    #[error("series for `{0}` has no mechanism profile")]
    MissingProfile(String),
    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: Box<IngestError>,
    },
    #[error("no {0} series could be loaded")]
    NoSeriesLoaded(Metric),
}

pub type Result<T> = std::result::Result<T, IngestError>;
