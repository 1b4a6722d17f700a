use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use super::{crosstab, emit_plots, MechanismCrosstab, ReportError, Result};
use crate::clustering::{
    self, AssignmentRecord, ClusterAssignment, CoinFeatures, Excluded, FeatureMatrix,
};
use crate::config::RunConfig;
use crate::ingest::{self, Dataset, IngestError, MechanismProfile, Metric, Rejected};
use crate::projection::{pca3, Projection3D, ProjectionSummary};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MissingMetric {
    pub metric: Metric,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricSection {
    pub metric: Metric,
    pub clustered_coins: usize,
    /// SHA-256 of every series file read, by coin.
    pub input_sha256: BTreeMap<String, String>,
    pub excluded: Vec<Excluded>,
    pub missing_coins: Vec<String>,
    pub rejected: Vec<Rejected>,
    pub dropped_columns: Vec<String>,
    pub k_max_used: usize,
    pub sigma: f64,
    pub assignment: AssignmentRecord,
    pub crosstab: MechanismCrosstab,
    pub projection: Option<ProjectionSummary>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub config: RunConfig,
    pub profiles_sha256: String,
    pub sections: Vec<MetricSection>,
    pub missing_metrics: Vec<MissingMetric>,
    /// SHA-256 of this report serialised with an empty `report_hash`.
    pub report_hash: String,
}

/// Everything computed for one metric, including what the files need.
#[derive(Debug, Clone)]
pub struct MetricRun {
    pub section: MetricSection,
    pub features: Vec<CoinFeatures>,
    pub standardized: FeatureMatrix,
    pub assignment: ClusterAssignment,
    pub projection: Option<Projection3D>,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub report: RunReport,
    pub runs: Vec<MetricRun>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn file_sha256(path: &Path) -> Result<String> {
    std::fs::read(path).map(|b| sha256_hex(&b)).map_err(|e| ReportError::io(path, e))
}

pub fn load_metric(cfg: &RunConfig, metric: Metric, profiles: &BTreeMap<String, MechanismProfile>) -> std::result::Result<Dataset, IngestError> {
    ingest::build_dataset_with_profiles(&cfg.data_dir, profiles.clone(), metric, cfg.dataset_options())
}

/// Feature extraction and clustering for one loaded dataset.
pub fn analyse_metric(cfg: &RunConfig, dataset: &Dataset) -> Result<MetricRun> {
    let fcfg = cfg.feature_config();
    let (features, excluded) = clustering::extract_features(dataset, &fcfg);
    let raw = clustering::feature_matrix(&features, fcfg.bins)?;
    let m = raw.coin_ids.len();
    let mut ccfg = cfg.cluster_config();
    let mut notes = Vec::new();
    if m >= 4 && ccfg.k_max >= m {
        ccfg.k_max = m - 1;
        notes.push(format!("k_max lowered to {} for {m} coins", ccfg.k_max));
    }
    let (standardized, assignment) = clustering::cluster_features(&raw, &ccfg)?;
    let projection = match pca3(&standardized) {
        Ok(p) => Some(p),
        Err(e) => {
            notes.push(format!("projection skipped: {e}"));
            None
        }
    };
    if projection.as_ref().is_some_and(|p| p.rank_deficient) {
        notes.push("projection rank deficient; missing components are zero".into());
    }
    let table = crosstab(dataset.metric, &assignment, &dataset.profiles)?;
    let input_sha256 = dataset
        .sources
        .iter()
        .map(|(coin, path)| Ok((coin.clone(), file_sha256(path)?)))
        .collect::<Result<_>>()?;
    let section = MetricSection {
        metric: dataset.metric,
        clustered_coins: m,
        input_sha256,
        excluded,
        missing_coins: dataset.missing.clone(),
        rejected: dataset.rejected.clone(),
        dropped_columns: standardized.dropped_columns.clone(),
        k_max_used: ccfg.k_max,
        sigma: assignment.sigma,
        assignment: assignment.record(dataset.metric),
        crosstab: table,
        projection: projection.as_ref().map(Projection3D::summary),
        notes,
    };
    Ok(MetricRun {
        section,
        features,
        standardized,
        assignment,
        projection,
    })
}

/// Runs every configured metric in parallel. A metric that fails is listed
/// in `missing_metrics`; the run fails only when no metric succeeds.
pub fn report_run(cfg: &RunConfig) -> Result<RunOutcome> {
    cfg.validate().map_err(|e| ReportError::Config(e.to_string()))?;
    let profiles = ingest::load_profiles(&cfg.profiles_path)?;
    let profiles_sha256 = file_sha256(&cfg.profiles_path)?;

    let results: Vec<(Metric, std::result::Result<MetricRun, String>)> = cfg
        .metrics
        .par_iter()
        .map(|&metric| {
            let r = load_metric(cfg, metric, &profiles)
                .map_err(ReportError::from)
                .and_then(|d| analyse_metric(cfg, &d))
                .map_err(|e| e.to_string());
            (metric, r)
        })
        .collect();

    let mut runs = Vec::new();
    let mut missing_metrics = Vec::new();
    for (metric, r) in results {
        match r {
            Ok(run) => runs.push(run),
            Err(reason) => missing_metrics.push(MissingMetric { metric, reason }),
        }
    }
    if runs.is_empty() {
        let reasons: Vec<String> = missing_metrics.iter().map(|m| format!("{}: {}", m.metric, m.reason)).collect();
        return Err(ReportError::NoSections(reasons.join("; ")));
    }

    let mut report = RunReport {
        config: cfg.clone(),
        profiles_sha256,
        sections: runs.iter().map(|r| r.section.clone()).collect(),
        missing_metrics,
        report_hash: String::new(),
    };
    report.report_hash = sha256_hex(&serde_json::to_vec(&report).expect("report serialises"));
    Ok(RunOutcome { report, runs })
}

pub fn write_features(run: &MetricRun, bins: usize, out_dir: &Path) -> Result<PathBuf> {
    let path = out_dir.join(format!("{}.features.csv", run.section.metric));
    let mut buf = Vec::new();
    clustering::write_features_csv(&run.features, bins, &mut buf).expect("writing to memory");
    std::fs::write(&path, buf).map_err(|e| ReportError::io(&path, e))?;
    Ok(path)
}

pub fn write_assignment(run: &MetricRun, out_dir: &Path) -> Result<PathBuf> {
    let path = out_dir.join(format!("{}.assignment.json", run.section.metric));
    let mut text = serde_json::to_string_pretty(&run.section.assignment).expect("record serialises");
    text.push('\n');
    std::fs::write(&path, text).map_err(|e| ReportError::io(&path, e))?;
    Ok(path)
}

/// Writes `report.json` plus per-metric features, assignment, crosstab and
/// plot files. Returns the paths in write order.
pub fn write_outputs(outcome: &RunOutcome, out_dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir).map_err(|e| ReportError::io(out_dir, e))?;
    let mut files = Vec::new();
    let bins = outcome.report.config.bins;
    for run in &outcome.runs {
        let metric = run.section.metric;
        files.push(write_features(run, bins, out_dir)?);
        files.push(write_assignment(run, out_dir)?);
        let md = out_dir.join(format!("{metric}.crosstab.md"));
        std::fs::write(&md, run.section.crosstab.to_markdown()).map_err(|e| ReportError::io(&md, e))?;
        files.push(md);
        if let Some(p) = &run.projection {
            files.extend(emit_plots(p, &run.assignment, out_dir, metric.as_str())?);
        }
    }
    let path = out_dir.join("report.json");
    let mut text = serde_json::to_string_pretty(&outcome.report).expect("report serialises");
    text.push('\n');
    std::fs::write(&path, text).map_err(|e| ReportError::io(&path, e))?;
    files.push(path);
    Ok(files)
}
