use serde::{Deserialize, Serialize};

use super::{CharacteristicsError, Result};
use crate::numeric;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mean: f64,
    /// Sample standard deviation (`n - 1` denominator).
    pub standard_deviation: f64,
    /// Bias-corrected sample skewness `G1`.
    pub skewness: f64,
    /// Bias-corrected excess kurtosis `G2`.
    pub kurtosis: f64,
    /// Zero variance, or too few points for the shape statistics; the
    /// affected statistics are reported as 0.
    pub degenerate: bool,
}

/// First four moments with the adjusted Fisher–Pearson estimators
/// (`G1`, `G2`), i.e. the defaults of most statistics packages.
pub fn moments(values: &[f64]) -> Result<Moments> {
    let n = values.len();
    if n < 2 {
        return Err(CharacteristicsError::TooShort { op: "moments", len: n, min: 2 });
    }
    let mean = numeric::mean(values);
    if numeric::is_constant(values) {
        return Ok(Moments {
            mean: values[0],
            standard_deviation: 0.0,
            skewness: 0.0,
            kurtosis: 0.0,
            degenerate: true,
        });
    }

    let nf = n as f64;
    let m2 = numeric::sum(values.iter().map(|v| (v - mean).powi(2))) / nf;
    let m3 = numeric::sum(values.iter().map(|v| (v - mean).powi(3))) / nf;
    let m4 = numeric::sum(values.iter().map(|v| (v - mean).powi(4))) / nf;
    let standard_deviation = (m2 * nf / (nf - 1.0)).sqrt();

    let skewness = if n >= 3 {
        let g1 = m3 / m2.powf(1.5);
        g1 * (nf * (nf - 1.0)).sqrt() / (nf - 2.0)
    } else {
        0.0
    };
    let kurtosis = if n >= 4 {
        let g2 = m4 / (m2 * m2) - 3.0;
        (nf - 1.0) / ((nf - 2.0) * (nf - 3.0)) * ((nf + 1.0) * g2 + 6.0)
    } else {
        0.0
    };

    Ok(Moments {
        mean,
        standard_deviation,
        skewness,
        kurtosis,
        degenerate: n < 4,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_to_five() {
        let m = moments(&[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        assert_eq!(m.mean, 3.0);
        assert!((m.standard_deviation - 2.5_f64.sqrt()).abs() < 1e-15);
        assert!((m.standard_deviation - 1.5811).abs() < 1e-4);
        assert!(m.skewness.abs() < 1e-15);
        // G2 of a discrete uniform on 5 points
        assert!((m.kurtosis - (-1.2)).abs() < 1e-12);
        assert!(!m.degenerate);
    }

    #[test]
    fn constant_is_flagged() {
        let m = moments(&[7.0; 4]).unwrap();
        assert_eq!((m.mean, m.standard_deviation, m.skewness, m.kurtosis), (7.0, 0.0, 0.0, 0.0));
        assert!(m.degenerate);
    }

    #[test]
    fn right_skewed_sample() {
        // hand-computed: n=4, mean=2.5, m2=4.25, m3=9, m4=40.0625
        let m = moments(&[1.0, 1.0, 2.0, 6.0]).unwrap();
        let g1 = 9.0 / 4.25_f64.powf(1.5);
        assert!((m.skewness - g1 * 12f64.sqrt() / 2.0).abs() < 1e-12);
        let g2 = 40.0625 / (4.25 * 4.25) - 3.0;
        assert!((m.kurtosis - 3.0 / 2.0 * (5.0 * g2 + 6.0)).abs() < 1e-12);
    }

    #[test]
    fn single_value_rejected() {
        assert!(moments(&[1.0]).is_err());
    }
}
