use nalgebra::DMatrix;

use super::{ClusteringError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Similarity {
    /// Symmetric, zero diagonal.
    pub matrix: DMatrix<f64>,
    /// Kernel bandwidth actually used.
    pub sigma: f64,
}

/// Euclidean distances between all row pairs.
pub fn pairwise_distances(rows: &DMatrix<f64>) -> DMatrix<f64> {
    let m = rows.nrows();
    let mut d = DMatrix::zeros(m, m);
    for i in 0..m {
        for j in (i + 1)..m {
            let v = (rows.row(i) - rows.row(j)).norm();
            d[(i, j)] = v;
            d[(j, i)] = v;
        }
    }
    d
}

/// Median of the upper-triangle distances. If more than half the pairs
/// coincide the median is 0, so the median of the positive distances is used.
pub fn median_heuristic(distances: &DMatrix<f64>) -> Option<f64> {
    let m = distances.nrows();
    let mut upper: Vec<f64> = (0..m).flat_map(|i| ((i + 1)..m).map(move |j| (i, j))).map(|ij| distances[ij]).collect();
    upper.sort_by(f64::total_cmp);
    let median = median_sorted(&upper)?;
    if median > 0.0 {
        return Some(median);
    }
    let positive: Vec<f64> = upper.into_iter().filter(|d| *d > 0.0).collect();
    median_sorted(&positive)
}

fn median_sorted(v: &[f64]) -> Option<f64> {
    match v.len() {
        0 => None,
        n if n % 2 == 1 => Some(v[n / 2]),
        n => Some(0.5 * (v[n / 2 - 1] + v[n / 2])),
    }
}

/// Gaussian kernel `exp(-|r_i - r_j|^2 / (2 sigma^2))` with the median
/// heuristic for `sigma` unless overridden.
pub fn similarity_matrix(rows: &DMatrix<f64>, sigma_override: Option<f64>) -> Result<Similarity> {
    let m = rows.nrows();
    if m < 2 {
        return Err(ClusteringError::TooFewCoins { got: m, need: 2 });
    }
    let d = pairwise_distances(rows);
    if d.iter().all(|v| *v == 0.0) {
        return Err(ClusteringError::DegenerateGeometry);
    }
    let sigma = match sigma_override {
        Some(s) if s > 0.0 && s.is_finite() => s,
        Some(s) => return Err(ClusteringError::InvalidSigma(s)),
        None => median_heuristic(&d).ok_or(ClusteringError::DegenerateGeometry)?,
    };
    let denom = 2.0 * sigma * sigma;
    let matrix = DMatrix::from_fn(m, m, |i, j| if i == j { 0.0 } else { (-d[(i, j)].powi(2) / denom).exp() });
    Ok(Similarity { matrix, sigma })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_rows_have_unit_similarity() {
        let rows = DMatrix::from_row_slice(3, 2, &[0.0, 0.0, 0.0, 0.0, 3.0, 4.0]);
        let s = similarity_matrix(&rows, None).unwrap();
        assert_eq!(s.matrix[(0, 1)], 1.0);
        assert_eq!(s.matrix[(0, 0)], 0.0);
        assert_eq!(s.sigma, 5.0);
    }

    #[test]
    fn equilateral_triangle() {
        let h = 3f64.sqrt() / 2.0;
        let rows = DMatrix::from_row_slice(3, 2, &[0.0, 0.0, 1.0, 0.0, 0.5, h]);
        let s = similarity_matrix(&rows, None).unwrap();
        let a = s.matrix[(0, 1)];
        assert!((s.matrix[(0, 2)] - a).abs() < 1e-15 && (s.matrix[(1, 2)] - a).abs() < 1e-15);
        assert!((a - (-0.5f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn all_identical_is_degenerate() {
        let rows = DMatrix::from_element(4, 3, 1.5);
        assert_eq!(similarity_matrix(&rows, None), Err(ClusteringError::DegenerateGeometry));
    }

    #[test]
    fn mostly_duplicated_points_fall_back_to_positive_median() {
        let rows = DMatrix::from_row_slice(4, 1, &[0.0, 0.0, 0.0, 2.0]);
        // pairs: three zeros, three 2s -> median 1.0 (positive)
        assert_eq!(median_heuristic(&pairwise_distances(&rows)), Some(1.0));
        let rows = DMatrix::from_row_slice(5, 1, &[0.0, 0.0, 0.0, 0.0, 2.0]);
        assert_eq!(median_heuristic(&pairwise_distances(&rows)), Some(2.0));
    }

    #[test]
    fn sigma_override() {
        let rows = DMatrix::from_row_slice(2, 1, &[0.0, 1.0]);
        let s = similarity_matrix(&rows, Some(1.0)).unwrap();
        assert!((s.matrix[(0, 1)] - (-0.5f64).exp()).abs() < 1e-15);
        assert!(matches!(similarity_matrix(&rows, Some(0.0)), Err(ClusteringError::InvalidSigma(_))));
    }
}
