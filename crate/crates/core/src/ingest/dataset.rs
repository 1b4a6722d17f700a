use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use super::{load_profiles, load_series, IngestError, LoadOptions, MechanismProfile, Metric, Result, Series};

/// All loadable series of one metric together with the mechanism profiles.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub metric: Metric,
    pub series: BTreeMap<String, Series>,
    pub profiles: BTreeMap<String, MechanismProfile>,
    /// Profiled coins with no series file for this metric.
    pub missing: Vec<String>,
    /// Files that failed to load (only populated in lenient mode).
    pub rejected: Vec<Rejected>,
    /// Dropped-row count per loaded coin.
    pub dropped_rows: BTreeMap<String, usize>,
    /// File each loaded series was read from.
    pub sources: BTreeMap<String, PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Rejected {
    pub coin_id: String,
    pub path: PathBuf,
    pub reason: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DatasetOptions {
    pub load: LoadOptions,
    /// Record failing files in [`Dataset::rejected`] instead of aborting.
    pub lenient: bool,
}

pub fn build_dataset(series_dir: impl AsRef<Path>, profiles_path: impl AsRef<Path>, metric: Metric, opts: DatasetOptions) -> Result<Dataset> {
    let profiles = load_profiles(profiles_path)?;
    build_dataset_with_profiles(series_dir, profiles, metric, opts)
}

pub fn build_dataset_with_profiles(
    series_dir: impl AsRef<Path>,
    profiles: BTreeMap<String, MechanismProfile>,
    metric: Metric,
    opts: DatasetOptions,
) -> Result<Dataset> {
    let dir = series_dir.as_ref();
    let entries = std::fs::read_dir(dir).map_err(|source| IngestError::Io {
        path: dir.to_path_buf(),
        source,
    })?;

    let mut files: Vec<(String, PathBuf)> = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|source| IngestError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        let path = entry.path();
        if !path.is_file() {
            continue;
        }
        let Some(name) = path.file_name().and_then(|n| n.to_str()) else {
            continue;
        };
        if let Some(coin) = coin_for_metric(name, metric) {
            files.push((coin.to_string(), path));
        }
    }
    files.sort();

    let loaded: Vec<(String, PathBuf, Result<(Series, usize)>)> = files
        .into_par_iter()
        .map(|(coin, path)| {
            let res = if profiles.contains_key(&coin) {
                load_series(&path, &coin, metric, opts.load).map(|l| (l.series, l.rows_dropped))
            } else {
                Err(IngestError::MissingProfile(coin.clone()))
            };
            (coin, path, res)
        })
        .collect();

    let mut series = BTreeMap::new();
    let mut dropped_rows = BTreeMap::new();
    let mut sources = BTreeMap::new();
    let mut rejected = Vec::new();
    for (coin, path, res) in loaded {
        match res {
            Ok((s, dropped)) => {
                dropped_rows.insert(coin.clone(), dropped);
                sources.insert(coin.clone(), path);
                series.insert(coin, s);
            }
            Err(e) if opts.lenient => rejected.push(Rejected {
                coin_id: coin,
                path,
                reason: e.to_string(),
            }),
            Err(e) => {
                return Err(IngestError::File {
                    path,
                    source: Box::new(e),
                })
            }
        }
    }

    if series.is_empty() {
        return Err(IngestError::NoSeriesLoaded(metric));
    }
    let missing = profiles
        .keys()
        .filter(|c| !series.contains_key(*c) && !rejected.iter().any(|r| &r.coin_id == *c))
        .cloned()
        .collect();

    Ok(Dataset {
        metric,
        series,
        profiles,
        missing,
        rejected,
        dropped_rows,
        sources,
    })
}

/// `bitcoin.price_usd.csv` -> `Some("bitcoin")` when `metric` is price.
fn coin_for_metric(file_name: &str, metric: Metric) -> Option<&str> {
    let stem = file_name.strip_suffix(".csv")?;
    let (coin, token) = stem.rsplit_once('.')?;
    (token == metric.as_str() && !coin.is_empty()).then_some(coin)
}
