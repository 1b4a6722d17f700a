//! Mechanism crosstabs, plot files and the bundled run report.
//!
//! Per-cluster purity of an attribute is the share of members holding the
//! cluster's modal value. The run-level figure is the size-weighted mean over
//! clusters, which equals the fraction of all clustered coins that hold their
//! cluster's modal value.

mod crosstab;
mod plots;
mod run;

use std::path::Path;

use thiserror::Error;

use crate::clustering::ClusteringError;
use crate::ingest::IngestError;

pub use crosstab::{crosstab, Attribute, AttributePurity, AttributeSummary, CrosstabRow, MechanismCrosstab};
pub use plots::{emit_plots, render_svg};
pub use run::{
    analyse_metric, load_metric, report_run, sha256_hex, write_assignment, write_features, write_outputs, MetricRun,
    MetricSection, MissingMetric, RunOutcome, RunReport,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReportError {
    #[error("coin `{0}` is clustered but has no mechanism profile")]
    MissingProfile(String),
    #[error("assignment is empty")]
    EmptyAssignment,
    #[error("projection and assignment list different coins")]
    Misaligned,
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Ingest(String),
    #[error(transparent)]
    Clustering(#[from] ClusteringError),
    #[error("no metric produced a report section: {0}")]
    NoSections(String),
}

impl ReportError {
    pub(crate) fn io(path: &Path, e: std::io::Error) -> Self {
        ReportError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        }
    }
}

impl From<IngestError> for ReportError {
    fn from(e: IngestError) -> Self {
        ReportError::Ingest(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, ReportError>;
