//! Regenerates the synthetic 18-coin fixture under `data/snapshot/series`.
//!
//! Every coin belongs to one archetype per metric. An archetype fixes the
//! spectral shape (a damped AR(2) resonance plus white noise), the level and
//! the transform; members differ by seeded jitter. The output is frozen in
//! the repository and only regenerated deliberately:
//!
//! ```text
//! cargo run -p chainchar --example synth_snapshot -- data/snapshot/series
//! ```

use std::f64::consts::PI;
use std::path::PathBuf;

use chainchar::ingest::{write_series_csv, Metric, Series};
use chrono::NaiveDate;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

const SEED: u64 = 20201109;

/// Daily series end on this date.
fn end_date() -> NaiveDate {
    NaiveDate::from_ymd_opt(2020, 11, 9).unwrap()
}

const COINS: [(&str, &str); 18] = [
    ("bitcoin", "2010-07-17"),
    ("bitcoin-cash", "2017-08-01"),
    ("bitcoin-gold", "2017-10-24"),
    ("bitcoin-sv", "2018-11-15"),
    ("blackcoin", "2014-02-24"),
    ("dash", "2014-02-14"),
    ("dogecoin", "2013-12-15"),
    ("ethereum", "2015-08-07"),
    ("ethereum-classic", "2016-07-24"),
    ("feathercoin", "2013-05-03"),
    ("litecoin", "2011-10-08"),
    ("monero", "2014-05-21"),
    ("novacoin", "2013-04-17"),
    ("peercoin", "2012-08-20"),
    ("reddcoin", "2014-01-30"),
    ("vertcoin", "2014-01-11"),
    ("xrp", "2013-08-04"),
    ("zcash", "2016-10-29"),
];

#[derive(Clone, Copy)]
struct Archetype {
    /// Resonance frequency in cycles per day.
    freq: f64,
    /// AR(2) pole radius; closer to 1 gives a sharper peak.
    radius: f64,
    /// White-noise share of the stationary component.
    noise: f64,
    /// Typical level of the series.
    level: f64,
    /// Log-scale amplitude of the stationary component.
    scale: f64,
    /// Log-level change from first to last day.
    drift: f64,
    /// Initial spike: first value and its decay time in days.
    spike: Option<(f64, f64)>,
    /// Probability of an isolated burst on any day and its log-height.
    bursts: Option<(f64, f64)>,
}

impl Archetype {
    const fn new(freq: f64, radius: f64, noise: f64, level: f64, scale: f64, drift: f64) -> Self {
        Self {
            freq,
            radius,
            noise,
            level,
            scale,
            drift,
            spike: None,
            bursts: None,
        }
    }
}

/// Coins sharing one archetype for one metric.
struct Group {
    coins: &'static [&'static str],
    shape: Archetype,
}

fn groups(metric: Metric) -> Vec<Group> {
    match metric {
        Metric::PriceUsd => vec![
            Group { coins: &["bitcoin", "dash"], shape: Archetype::new(0.035, 0.985, 0.20, 4000.0, 0.9, 3.0) },
            Group { coins: &["bitcoin-sv", "zcash"], shape: Archetype::new(0.115, 0.975, 0.25, 150.0, 0.8, -1.5) },
            Group { coins: &["bitcoin-cash", "bitcoin-gold"], shape: Archetype::new(0.205, 0.975, 0.25, 300.0, 0.8, -2.0) },
            Group {
                coins: &["blackcoin", "ethereum", "feathercoin", "litecoin", "monero", "peercoin", "reddcoin", "vertcoin", "xrp"],
                shape: Archetype::new(0.300, 0.970, 0.30, 2.0, 0.7, 1.0),
            },
            Group { coins: &["dogecoin", "ethereum-classic", "novacoin"], shape: Archetype::new(0.410, 0.970, 0.30, 0.5, 0.6, 0.5) },
        ],
        Metric::BlockTimeMinutes => vec![
            Group { coins: &["dogecoin", "feathercoin"], shape: Archetype::new(0.045, 0.980, 0.25, 1.0, 0.25, 0.0) },
            Group {
                coins: &["blackcoin", "dash", "ethereum", "ethereum-classic", "litecoin", "monero", "zcash"],
                shape: Archetype::new(0.150, 0.975, 0.30, 1.5, 0.15, 0.0),
            },
            Group { coins: &["bitcoin", "bitcoin-cash", "vertcoin"], shape: Archetype::new(0.250, 0.975, 0.25, 9.5, 0.20, 0.0) },
            Group { coins: &["bitcoin-gold", "bitcoin-sv", "novacoin"], shape: Archetype::new(0.350, 0.975, 0.25, 10.5, 0.30, 0.0) },
            Group {
                coins: &["peercoin", "reddcoin"],
                shape: Archetype { spike: Some((1440.0, 3.0)), ..Archetype::new(0.450, 0.970, 0.40, 1.5, 0.40, -0.3) },
            },
        ],
        Metric::BlockSizeBytes => vec![
            Group {
                coins: &["bitcoin-gold", "novacoin", "reddcoin", "zcash"],
                shape: Archetype::new(0.040, 0.980, 0.25, 3000.0, 0.5, 0.5),
            },
            Group { coins: &["dogecoin", "ethereum", "ethereum-classic"], shape: Archetype::new(0.140, 0.975, 0.25, 12000.0, 0.4, 1.5) },
            Group {
                coins: &["bitcoin-cash", "bitcoin-sv"],
                shape: Archetype { bursts: Some((0.01, 3.0)), ..Archetype::new(0.240, 0.975, 0.25, 200000.0, 0.9, 2.5) },
            },
            Group { coins: &["bitcoin", "dash", "feathercoin", "monero"], shape: Archetype::new(0.340, 0.975, 0.25, 40000.0, 0.4, 1.0) },
            Group { coins: &["blackcoin", "litecoin", "vertcoin"], shape: Archetype::new(0.440, 0.970, 0.30, 8000.0, 0.4, 0.8) },
        ],
    }
}

/// The one member per metric offset from its group, so that asking for one
/// cluster too many splits it off alone: `(coin, resonance factor, amplitude factor)`.
fn loose_member(metric: Metric) -> (&'static str, f64, f64) {
    match metric {
        Metric::PriceUsd => ("xrp", 1.05, 1.3),
        Metric::BlockTimeMinutes => ("blackcoin", 1.2, 1.3),
        Metric::BlockSizeBytes => ("monero", 1.05, 1.3),
    }
}

fn ar2(n: usize, freq: f64, radius: f64, noise: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let a1 = 2.0 * radius * (2.0 * PI * freq).cos();
    let a2 = -radius * radius;
    let burn = 500;
    let mut x = vec![0.0; n + burn];
    for t in 2..x.len() {
        let e: f64 = rng.sample(StandardNormal);
        x[t] = a1 * x[t - 1] + a2 * x[t - 2] + e;
    }
    let x = &x[burn..];
    let sd = (x.iter().map(|v| v * v).sum::<f64>() / n as f64).sqrt();
    x.iter()
        .map(|v| (1.0 - noise) * v / sd + noise * rng.sample::<f64, _>(StandardNormal))
        .collect()
}

fn generate(n: usize, shape: &Archetype, (f_off, s_off): (f64, f64), rng: &mut ChaCha8Rng) -> Vec<f64> {
    let freq = f_off * shape.freq * (1.0 + rng.random_range(-0.005..0.005));
    let level = shape.level * (1.0 + rng.random_range(-0.1..0.1));
    let scale = s_off * shape.scale * (1.0 + rng.random_range(-0.15..0.15));
    let x = ar2(n, freq, shape.radius, shape.noise, rng);
    let mut y: Vec<f64> = x
        .iter()
        .enumerate()
        .map(|(t, v)| {
            let trend = shape.drift * (t as f64 / n as f64 - 0.5);
            level * (trend + scale * v).exp()
        })
        .collect();
    if let Some((p, h)) = shape.bursts {
        for v in y.iter_mut() {
            if rng.random::<f64>() < p {
                *v *= h.exp();
            }
        }
    }
    if let Some((peak, decay)) = shape.spike {
        for (t, v) in y.iter_mut().enumerate().take(30) {
            *v += (peak - *v).max(0.0) * (-(t as f64) / decay).exp();
        }
    }
    y
}

fn round_sig(v: f64, digits: i32) -> f64 {
    if v == 0.0 {
        return 0.0;
    }
    let p = digits - 1 - v.abs().log10().floor() as i32;
    let f = 10f64.powi(p);
    (v * f).round() / f
}

fn main() {
    let out: PathBuf = std::env::args().nth(1).unwrap_or_else(|| "data/snapshot/series".into()).into();
    std::fs::create_dir_all(&out).expect("create output directory");
    let end = end_date();

    for (m, metric) in Metric::ALL.into_iter().enumerate() {
        for group in groups(metric) {
            for &coin in group.coins {
                let (_, start) = COINS.iter().find(|(c, _)| *c == coin).expect("known coin");
                let start = NaiveDate::parse_from_str(start, "%Y-%m-%d").unwrap();
                let n = (end - start).num_days() as usize + 1;
                let idx = COINS.iter().position(|(c, _)| *c == coin).unwrap() as u64;
                let mut rng = ChaCha8Rng::seed_from_u64(SEED);
                rng.set_stream(m as u64 * 100 + idx);
                let (loose, f_off, s_off) = loose_member(metric);
                let offset = if coin == loose { (f_off, s_off) } else { (1.0, 1.0) };
                let values: Vec<f64> = generate(n, &group.shape, offset, &mut rng).into_iter().map(|v| round_sig(v, 8)).collect();
                let series = Series {
                    coin_id: coin.to_string(),
                    metric,
                    dates: (0..n).map(|d| start + chrono::Days::new(d as u64)).collect(),
                    values,
                };
                let path = out.join(format!("{coin}.{metric}.csv"));
                let file = std::fs::File::create(&path).expect("create series file");
                write_series_csv(&series, std::io::BufWriter::new(file)).expect("write series");
            }
        }
    }
}
