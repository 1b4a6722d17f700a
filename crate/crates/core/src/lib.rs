//! Characteristic-based clustering of cryptocurrency time series.
//!
//! Each coin's daily series (price, actual block time or actual block size)
//! is summarised by sixteen distributional characteristics plus a fixed-length
//! normalised power spectrum. Coins are then grouped with normalised spectral
//! clustering under a no-singleton constraint, projected to three principal
//! components, and cross-tabulated against their blockchain mechanism
//! attributes.
//!
//! The pipeline, bottom-up:
//!
//! - [`ingest`]: CSV series and mechanism profiles, validated into a [`ingest::Dataset`].
//! - [`characteristics`]: the sixteen scalar features of one series.
//! - [`spectrum`]: periodogram resampled onto a fixed frequency grid.
//! - [`clustering`]: feature matrix, Gaussian similarity, NJW embedding, k-means.
//! - [`projection`]: three-component PCA of the standardised features.
//! - [`report`]: mechanism crosstabs, plot files and the bundled run report.

pub mod characteristics;
pub mod clustering;
pub mod config;
pub mod ingest;
pub mod projection;
pub mod report;
pub mod spectrum;

mod numeric;

pub use config::RunConfig;
pub use ingest::{Dataset, MechanismProfile, Metric, Series};
