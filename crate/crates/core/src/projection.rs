//! Three-component PCA of the standardised feature matrix.

use std::io::Write;

use nalgebra::{DMatrix, SVD};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clustering::FeatureMatrix;

pub const COMPONENTS: usize = 3;
/// Singular values below this fraction of the largest count as zero.
const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProjectionError {
    #[error("{got} coins, need at least {need}")]
    TooFewCoins { got: usize, need: usize },
    #[error("feature matrix has no columns")]
    NoColumns,
    #[error("non-finite entry in feature matrix")]
    NonFinite,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Projection3D {
    pub coin_ids: Vec<String>,
    /// `m x 3` scores.
    pub coords: DMatrix<f64>,
    pub explained_variance_ratio: [f64; COMPONENTS],
    /// `3 x D`, orthonormal rows; zero rows for missing components.
    pub component_loadings: DMatrix<f64>,
    pub column_names: Vec<String>,
    /// Fewer than three nonzero singular values; the rest are zero-padded.
    pub rank_deficient: bool,
}

/// Scores on the top three right singular directions of the column-centred
/// matrix. Each component is signed so its largest-magnitude loading is
/// positive (first such loading on ties).
pub fn pca3(matrix: &FeatureMatrix) -> Result<Projection3D, ProjectionError> {
    let (m, d) = matrix.rows.shape();
    if m < 4 {
        return Err(ProjectionError::TooFewCoins { got: m, need: 4 });
    }
    if d == 0 {
        return Err(ProjectionError::NoColumns);
    }
    if matrix.rows.iter().any(|v| !v.is_finite()) {
        return Err(ProjectionError::NonFinite);
    }
    let mut x = matrix.rows.clone();
    for mut col in x.column_iter_mut() {
        let mean = col.mean();
        col.add_scalar_mut(-mean);
    }

    let svd = SVD::new(x.clone(), false, true);
    let v_t = svd.v_t.as_ref().expect("requested right vectors");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]).then(a.cmp(&b)));
    let total: f64 = svd.singular_values.iter().map(|s| s * s).sum();
    let s_max = order.first().map_or(0.0, |&i| svd.singular_values[i]);

    let mut loadings = DMatrix::zeros(COMPONENTS, d);
    let mut ratio = [0.0; COMPONENTS];
    let mut rank_deficient = false;
    for c in 0..COMPONENTS {
        let Some(&i) = order.get(c) else {
            rank_deficient = true;
            continue;
        };
        let s = svd.singular_values[i];
        if !(s > RANK_TOL * s_max) || s_max == 0.0 {
            rank_deficient = true;
            continue;
        }
        let mut row = v_t.row(i).clone_owned();
        let pivot = row.iter().copied().fold(0.0_f64, |acc, v| if v.abs() > acc.abs() { v } else { acc });
        if pivot < 0.0 {
            row.neg_mut();
        }
        loadings.set_row(c, &row);
        ratio[c] = s * s / total;
    }
    let coords = &x * loadings.transpose();
    Ok(Projection3D {
        coin_ids: matrix.coin_ids.clone(),
        coords,
        explained_variance_ratio: ratio,
        component_loadings: loadings,
        column_names: matrix.column_names.clone(),
        rank_deficient,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionSummary {
    pub explained_variance_ratio: [f64; COMPONENTS],
    pub rank_deficient: bool,
    /// Up to five largest-magnitude loadings per component, as `(column, loading)`.
    pub top_loadings: Vec<Vec<(String, f64)>>,
}

impl Projection3D {
    pub fn summary(&self) -> ProjectionSummary {
        let top_loadings = (0..COMPONENTS)
            .map(|c| {
                let row = self.component_loadings.row(c);
                let mut idx: Vec<usize> = (0..row.len()).filter(|&j| row[j] != 0.0).collect();
                idx.sort_by(|&a, &b| row[b].abs().total_cmp(&row[a].abs()).then(a.cmp(&b)));
                idx.into_iter().take(5).map(|j| (self.column_names[j].clone(), row[j])).collect()
            })
            .collect();
        ProjectionSummary {
            explained_variance_ratio: self.explained_variance_ratio,
            rank_deficient: self.rank_deficient,
            top_loadings,
        }
    }

    /// `coin_id,pc1,pc2,pc3,cluster_id`; `labels` aligned with `coin_ids`.
    pub fn write_csv<W: Write>(&self, labels: &[usize], mut out: W) -> std::io::Result<()> {
        writeln!(out, "coin_id,pc1,pc2,pc3,cluster_id")?;
        for (i, coin) in self.coin_ids.iter().enumerate() {
            let r = self.coords.row(i);
            writeln!(out, "{coin},{},{},{},{}", r[0], r[1], r[2], labels[i])?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fm(rows: DMatrix<f64>) -> FeatureMatrix {
        FeatureMatrix {
            coin_ids: (0..rows.nrows()).map(|i| format!("c{i}")).collect(),
            column_names: (0..rows.ncols()).map(|j| format!("f{j}")).collect(),
            rows,
            standardization: None,
            dropped_columns: vec![],
        }
    }

    #[test]
    fn planar_data_is_rank_deficient() {
        let rows = DMatrix::from_fn(6, 4, |i, j| match j {
            0 => i as f64,
            1 => 2.0 * i as f64,
            2 => ((i * i) % 5) as f64,
            _ => 1.0,
        });
        let p = pca3(&fm(rows)).unwrap();
        assert!(p.rank_deficient);
        assert!((p.explained_variance_ratio.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        assert_eq!(p.explained_variance_ratio[2], 0.0);
        assert!(p.coords.column(2).iter().all(|v| *v == 0.0));
    }

    #[test]
    fn sign_and_ordering() {
        let rows = DMatrix::from_fn(8, 3, |i, j| ((i * 3 + j * 5) % 7) as f64 * (j + 1) as f64);
        let p = pca3(&fm(rows)).unwrap();
        let r = p.explained_variance_ratio;
        assert!(r[0] >= r[1] && r[1] >= r[2]);
        for c in 0..3 {
            let row = p.component_loadings.row(c);
            let pivot = row.iter().copied().fold(0.0_f64, |a, v| if v.abs() > a.abs() { v } else { a });
            assert!(pivot > 0.0);
        }
        let g = &p.component_loadings * p.component_loadings.transpose();
        assert!((g - DMatrix::identity(3, 3)).amax() < 1e-9);
    }

    #[test]
    fn too_few() {
        assert!(matches!(pca3(&fm(DMatrix::zeros(3, 5))), Err(ProjectionError::TooFewCoins { .. })));
    }

    #[test]
    fn csv_layout() {
        let rows = DMatrix::from_fn(4, 3, |i, j| (i + j * j) as f64);
        let p = pca3(&fm(rows)).unwrap();
        let mut buf = Vec::new();
        p.write_csv(&[0, 0, 1, 1], &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(s.lines().count(), 5);
        assert!(s.starts_with("coin_id,pc1,pc2,pc3,cluster_id\nc0,"));
    }
}
