use serde::{Deserialize, Serialize};

use super::{CharacteristicsError, Result};

/// Order statistics of the level series. `var99` and `var95` are the 1% and
/// 5% quantiles of the levels themselves, not of returns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quantiles {
    pub minimum: f64,
    pub var99: f64,
    pub var95: f64,
    pub lowerquant: f64,
    pub median: f64,
    pub upperquant: f64,
    pub maximum: f64,
}

pub const LEVELS: [f64; 7] = [0.0, 0.01, 0.05, 0.25, 0.5, 0.75, 1.0];

/// Linear-interpolation quantile of already sorted data ("type 7"):
/// `h = (n - 1) p`, `q = x[floor h] + (h - floor h) (x[floor h + 1] - x[floor h])`.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    let h = (n - 1) as f64 * p;
    let lo = h.floor() as usize;
    if lo + 1 >= n {
        return sorted[n - 1];
    }
    let frac = h - lo as f64;
    sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
}

pub fn quantiles(values: &[f64]) -> Result<Quantiles> {
    if values.is_empty() {
        return Err(CharacteristicsError::Empty);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let q = LEVELS.map(|p| quantile_sorted(&sorted, p));
    Ok(Quantiles {
        minimum: q[0],
        var99: q[1],
        var95: q[2],
        lowerquant: q[3],
        median: q[4],
        upperquant: q[5],
        maximum: q[6],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_to_hundred() {
        let v: Vec<f64> = (1..=100).map(f64::from).collect();
        let q = quantiles(&v).unwrap();
        assert_eq!(q.median, 50.5);
        assert_eq!(q.lowerquant, 25.75);
        assert_eq!(q.upperquant, 75.25);
        assert_eq!((q.minimum, q.maximum), (1.0, 100.0));
        assert!((q.var99 - 1.99).abs() < 1e-12);
        assert!((q.var95 - 5.95).abs() < 1e-12);
    }

    #[test]
    fn single_element() {
        let q = quantiles(&[4.2]).unwrap();
        for v in [q.minimum, q.var99, q.var95, q.lowerquant, q.median, q.upperquant, q.maximum] {
            assert_eq!(v, 4.2);
        }
    }

    #[test]
    fn empty_rejected() {
        assert_eq!(quantiles(&[]), Err(CharacteristicsError::Empty));
    }
}
