//! `chainchar` command-line front end.
//!
//! Settings resolve as flags over config file over built-in defaults.
//! Exit codes: 0 success, 1 data error, 2 usage error.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chainchar::clustering::{self, FeatureConfig};
use chainchar::config::RunConfig;
use chainchar::ingest::{self, fetch, Dataset, Metric};
use chainchar::report::{self, load_metric, MetricRun};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "chainchar", version, about = "Characteristic-based spectral clustering of cryptocurrency daily series")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write `<metric>.features.csv` (16 characteristics + K spectrum bins per coin).
    Features(Settings),
    /// Write `<metric>.assignment.json` with the selected clustering.
    Cluster(Settings),
    /// Run the full pipeline and write report.json, crosstabs, assignments, features and plots.
    Report(Settings),
    /// Print the upstream chart URL and expected file name for every profiled coin.
    FetchStub(Settings),
}

#[derive(Args, Default)]
struct Settings {
    /// TOML config file; flags override its values.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Directory of `<coin_id>.<metric>.csv` series [default: data/snapshot/series].
    #[arg(long, value_name = "DIR")]
    data_dir: Option<PathBuf>,
    /// Mechanism profiles TOML [default: data/snapshot/profiles.toml].
    #[arg(long, value_name = "FILE")]
    profiles: Option<PathBuf>,
    /// Metric to process; repeat for several [default: all three].
    #[arg(long = "metric", value_name = "METRIC", value_parser = parse_metric)]
    metrics: Vec<Metric>,
    /// Spectrum bins K [default: 200].
    #[arg(long)]
    bins: Option<usize>,
    /// Largest cluster count tried [default: 6].
    #[arg(long)]
    k_max: Option<usize>,
    /// k-means seed [default: 42].
    #[arg(long)]
    seed: Option<u64>,
    /// k-means restarts [default: 50].
    #[arg(long)]
    restarts: Option<usize>,
    /// Gaussian kernel bandwidth [default: median pairwise distance].
    #[arg(long)]
    sigma: Option<f64>,
    /// Smallest DFA window [default: 4].
    #[arg(long)]
    dfa_min_window: Option<usize>,
    /// Largest DFA window is n / this [default: 4].
    #[arg(long)]
    dfa_max_window_divisor: Option<usize>,
    /// Log-spaced DFA window sizes requested [default: 20].
    #[arg(long)]
    dfa_scales: Option<usize>,
    /// Lyapunov embedding dimension [default: 3].
    #[arg(long)]
    lyapunov_dim: Option<usize>,
    /// Lyapunov embedding delay in days [default: 1].
    #[arg(long)]
    lyapunov_delay: Option<usize>,
    /// First divergence step of the Lyapunov fit [default: 1].
    #[arg(long)]
    lyapunov_fit_start: Option<usize>,
    /// Last divergence step of the Lyapunov fit [default: min(20, n/50)].
    #[arg(long)]
    lyapunov_fit_end: Option<usize>,
    /// Lyapunov Theiler window in days [default: mean period].
    #[arg(long)]
    lyapunov_theiler: Option<usize>,
    /// Share of the divergence rise at which the Lyapunov fit stops [default: 0.7].
    #[arg(long)]
    lyapunov_saturation_fraction: Option<f64>,
    /// Rise in nats above which the saturation cut applies [default: 1.0].
    #[arg(long)]
    lyapunov_saturation_rise: Option<f64>,
    /// Minimum usable rows per series [default: 30].
    #[arg(long)]
    min_len: Option<usize>,
    /// Fail a metric on the first unreadable file instead of skipping it.
    #[arg(long)]
    strict: bool,
    /// Worker threads [default: all cores].
    #[arg(long)]
    threads: Option<usize>,
    /// Output directory [default: out].
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

fn parse_metric(s: &str) -> Result<Metric, String> {
    s.parse().map_err(|e: ingest::IngestError| e.to_string())
}

enum Failure {
    Usage(String),
    Data(String),
}

impl Settings {
    fn resolve(&self) -> Result<RunConfig, Failure> {
        let mut c = match &self.config {
            Some(path) => RunConfig::load(path).map_err(|e| Failure::Usage(e.to_string()))?,
            None => RunConfig::default(),
        };
        macro_rules! set {
            ($flag:expr => $($field:tt)+) => {
                if let Some(v) = $flag.clone() {
                    c.$($field)+ = v;
                }
            };
        }
        set!(self.data_dir => data_dir);
        set!(self.profiles => profiles_path);
        set!(self.bins => bins);
        set!(self.k_max => k_max);
        set!(self.seed => seed);
        set!(self.restarts => restarts);
        set!(self.dfa_min_window => dfa.min_window);
        set!(self.dfa_max_window_divisor => dfa.max_window_divisor);
        set!(self.dfa_scales => dfa.scales);
        set!(self.lyapunov_dim => lyapunov.embedding_dim);
        set!(self.lyapunov_delay => lyapunov.delay);
        set!(self.lyapunov_fit_start => lyapunov.fit_start);
        set!(self.lyapunov_saturation_fraction => lyapunov.saturation_fraction);
        set!(self.lyapunov_saturation_rise => lyapunov.saturation_rise);
        set!(self.min_len => min_len);
        set!(self.out => output_dir);
        if self.sigma.is_some() {
            c.sigma = self.sigma;
        }
        if self.lyapunov_fit_end.is_some() {
            c.lyapunov.fit_end = self.lyapunov_fit_end;
        }
        if self.lyapunov_theiler.is_some() {
            c.lyapunov.theiler_window = self.lyapunov_theiler;
        }
        if self.threads.is_some() {
            c.threads = self.threads;
        }
        if !self.metrics.is_empty() {
            c.metrics = self.metrics.clone();
        }
        if self.strict {
            c.lenient = false;
        }
        c.validate().map_err(|e| Failure::Usage(e.to_string()))?;
        Ok(c)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Data(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let (settings, command): (&Settings, fn(&RunConfig) -> Result<(), Failure>) = match &cli.command {
        Command::Features(s) => (s, cmd_features),
        Command::Cluster(s) => (s, cmd_cluster),
        Command::Report(s) => (s, cmd_report),
        Command::FetchStub(s) => (s, cmd_fetch_stub),
    };
    let cfg = settings.resolve()?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cfg.threads {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| Failure::Usage(format!("thread pool: {e}")))?;
    pool.install(|| command(&cfg))
}

fn create_out(dir: &Path) -> Result<(), Failure> {
    std::fs::create_dir_all(dir).map_err(|e| Failure::Data(format!("{}: {e}", dir.display())))
}

fn load_profiles(cfg: &RunConfig) -> Result<std::collections::BTreeMap<String, ingest::MechanismProfile>, Failure> {
    ingest::load_profiles(&cfg.profiles_path).map_err(|e| Failure::Data(format!("{}: {e}", cfg.profiles_path.display())))
}

fn report_dataset_issues(d: &Dataset) {
    for r in &d.rejected {
        eprintln!("warning: {} skipped: {}", r.path.display(), r.reason);
    }
    if !d.missing.is_empty() {
        eprintln!("note: {}: no series for {}", d.metric, d.missing.join(", "));
    }
}

/// Runs `each` per metric; a failed metric is reported and the others go on.
/// Fails only when no metric succeeds.
fn per_metric(cfg: &RunConfig, mut each: impl FnMut(&Dataset) -> Result<(), String>) -> Result<(), Failure> {
    let profiles = load_profiles(cfg)?;
    create_out(&cfg.output_dir)?;
    let mut ok = 0;
    let mut errors = Vec::new();
    for &metric in &cfg.metrics {
        let result = load_metric(cfg, metric, &profiles).map_err(|e| e.to_string()).and_then(|d| {
            report_dataset_issues(&d);
            each(&d)
        });
        match result {
            Ok(()) => ok += 1,
            Err(e) => {
                eprintln!("warning: {metric}: {e}");
                errors.push(format!("{metric}: {e}"));
            }
        }
    }
    if ok == 0 {
        return Err(Failure::Data(format!("no metric succeeded ({})", errors.join("; "))));
    }
    Ok(())
}

fn cmd_features(cfg: &RunConfig) -> Result<(), Failure> {
    let fcfg: FeatureConfig = cfg.feature_config();
    per_metric(cfg, |d| {
        let (features, excluded) = clustering::extract_features(d, &fcfg);
        for x in &excluded {
            eprintln!("warning: {}: {} excluded: {}", d.metric, x.coin_id, x.reason);
        }
        if features.is_empty() {
            return Err("no coin produced features".into());
        }
        let path = cfg.output_dir.join(format!("{}.features.csv", d.metric));
        let mut buf = Vec::new();
        clustering::write_features_csv(&features, fcfg.bins, &mut buf).map_err(|e| e.to_string())?;
        std::fs::write(&path, buf).map_err(|e| format!("{}: {e}", path.display()))?;
        println!("{}", path.display());
        Ok(())
    })
}

fn cmd_cluster(cfg: &RunConfig) -> Result<(), Failure> {
    per_metric(cfg, |d| {
        let run: MetricRun = report::analyse_metric(cfg, d).map_err(|e| e.to_string())?;
        for x in &run.section.excluded {
            eprintln!("warning: {}: {} excluded: {}", d.metric, x.coin_id, x.reason);
        }
        let path = report::write_assignment(&run, &cfg.output_dir).map_err(|e| e.to_string())?;
        println!("{} k={} {}", d.metric, run.assignment.k, path.display());
        Ok(())
    })
}

fn cmd_report(cfg: &RunConfig) -> Result<(), Failure> {
    let outcome = report::report_run(cfg).map_err(|e| Failure::Data(e.to_string()))?;
    for m in &outcome.report.missing_metrics {
        eprintln!("warning: {}: {}", m.metric, m.reason);
    }
    let files = report::write_outputs(&outcome, &cfg.output_dir).map_err(|e| Failure::Data(e.to_string()))?;
    for s in &outcome.report.sections {
        let sizes: Vec<String> = s.assignment.clusters.iter().map(|c| c.coins.len().to_string()).collect();
        println!("{}: k={} sizes [{}]", s.metric, s.assignment.k, sizes.join(", "));
    }
    println!("wrote {} files to {}", files.len(), cfg.output_dir.display());
    println!("report hash {}", outcome.report.report_hash);
    Ok(())
}

fn cmd_fetch_stub(cfg: &RunConfig) -> Result<(), Failure> {
    let profiles = load_profiles(cfg)?;
    let mut out = std::io::stdout().lock();
    // A closed pipe (e.g. `| head`) just ends the listing.
    let _ = (|| -> std::io::Result<()> {
        writeln!(out, "# no download is performed; save each chart's daily series as the listed file")?;
        for &metric in &cfg.metrics {
            for coin in profiles.keys() {
                let target = cfg.data_dir.join(fetch::target_file_name(coin, metric));
                writeln!(out, "{}\t{}", fetch::source_url(coin, metric), target.display())?;
            }
        }
        out.flush()
    })();
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn resolve(args: &[&str]) -> Result<RunConfig, Failure> {
        let cli = Cli::try_parse_from(["chainchar", "features"].iter().chain(args)).unwrap();
        let Command::Features(s) = cli.command else { unreachable!() };
        s.resolve()
    }

    #[test]
    fn defaults_without_flags() {
        assert_eq!(resolve(&[]).ok(), Some(RunConfig::default()));
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        std::fs::write(&path, "seed = 7\nbins = 50\n[lyapunov]\ndelay = 2\n").unwrap();
        let p = path.to_str().unwrap();
        let c = resolve(&["--config", p, "--bins", "64", "--strict", "--metric", "price_usd"]).ok().unwrap();
        assert_eq!((c.seed, c.bins, c.lyapunov.delay, c.lenient), (7, 64, 2, false));
        assert_eq!(c.metrics, vec![Metric::PriceUsd]);
    }

    #[test]
    fn invalid_combination_is_usage() {
        assert!(matches!(resolve(&["--k-max", "1"]), Err(Failure::Usage(_))));
    }
}
