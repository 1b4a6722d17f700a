use std::io::{Read, Write};
use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use super::{IngestError, Metric, Result};

/// One coin observed daily on one metric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub coin_id: String,
    pub metric: Metric,
    pub dates: Vec<NaiveDate>,
    pub values: Vec<f64>,
}

/// A break in daily spacing: `days` calendar days elapse between
/// observation `index - 1` and observation `index`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gap {
    pub index: usize,
    pub days: i64,
}

impl Series {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Places where consecutive dates are more than one day apart.
    pub fn gaps(&self) -> Vec<Gap> {
        self.dates
            .windows(2)
            .enumerate()
            .filter_map(|(i, w)| {
                let days = (w[1] - w[0]).num_days();
                (days != 1).then_some(Gap { index: i + 1, days })
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoadOptions {
    /// Minimum number of retained rows.
    pub min_len: usize,
}

impl Default for LoadOptions {
    fn default() -> Self {
        Self { min_len: 30 }
    }
}

/// A validated series plus the row accounting of its source file.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedSeries {
    pub series: Series,
    /// Data rows in the file, excluding the header.
    pub rows_read: usize,
    /// Rows whose value field was empty, non-numeric or non-finite.
    pub rows_dropped: usize,
}

pub fn load_series(path: impl AsRef<Path>, coin_id: &str, metric: Metric, opts: LoadOptions) -> Result<LoadedSeries> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_series(file, coin_id, metric, opts)
}

pub fn parse_series<R: Read>(reader: R, coin_id: &str, metric: Metric, opts: LoadOptions) -> Result<LoadedSeries> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let header = rdr.headers().map_err(|e| csv_error(&e))?;
    if header.len() != 2 || &header[0] != "date" || &header[1] != "value" {
        return Err(IngestError::MalformedCsv {
            line: 1,
            reason: format!("expected header `date,value`, found `{}`", header.iter().collect::<Vec<_>>().join(",")),
        });
    }

    let mut dates = Vec::new();
    let mut values = Vec::new();
    let mut rows_read = 0;
    let mut rows_dropped = 0;

    for record in rdr.records() {
        let record = record.map_err(|e| csv_error(&e))?;
        let line = record.position().map_or(0, |p| p.line());
        rows_read += 1;
        if record.len() != 2 {
            return Err(IngestError::MalformedCsv {
                line,
                reason: format!("expected 2 fields, found {}", record.len()),
            });
        }
        let date = NaiveDate::parse_from_str(&record[0], "%Y-%m-%d").map_err(|e| IngestError::MalformedCsv {
            line,
            reason: format!("bad date `{}`: {e}", &record[0]),
        })?;
        let value = match record[1].parse::<f64>() {
            Ok(v) if v.is_finite() => v,
            _ => {
                rows_dropped += 1;
                continue;
            }
        };
        if metric.requires_positive() {
            if value <= 0.0 {
                return Err(IngestError::NonPositive { metric, line, value });
            }
        } else if value < 0.0 {
            return Err(IngestError::NegativeValue { line, value });
        }
        if dates.last().is_some_and(|prev| *prev >= date) {
            return Err(IngestError::NonMonotoneDates { line });
        }
        dates.push(date);
        values.push(value);
    }

    if values.len() < opts.min_len {
        return Err(IngestError::TooShort {
            retained: values.len(),
            min_len: opts.min_len,
        });
    }

    Ok(LoadedSeries {
        series: Series {
            coin_id: coin_id.to_string(),
            metric,
            dates,
            values,
        },
        rows_read,
        rows_dropped,
    })
}

/// Writes `series` in the `date,value` format read by [`parse_series`].
/// Values use the shortest representation that round-trips exactly.
pub fn write_series_csv<W: Write>(series: &Series, mut out: W) -> std::io::Result<()> {
    writeln!(out, "date,value")?;
    for (d, v) in series.dates.iter().zip(&series.values) {
        writeln!(out, "{},{}", d.format("%Y-%m-%d"), v)?;
    }
    Ok(())
}

fn csv_error(e: &csv::Error) -> IngestError {
    IngestError::MalformedCsv {
        line: e.position().map_or(0, |p| p.line()),
        reason: e.to_string(),
    }
}
