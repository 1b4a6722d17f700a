use nalgebra::{DMatrix, SymmetricEigen};

use super::{ClusteringError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    /// `m x k`, rows normalised to unit length.
    pub coords: DMatrix<f64>,
    /// Smallest eigenvalues of `L_sym`, ascending; `min(k + 1, m)` of them.
    pub eigenvalues: Vec<f64>,
    /// The unnormalised eigenvectors behind `coords`, as columns.
    pub eigenvectors: DMatrix<f64>,
}

/// `L_sym = I - D^-1/2 S D^-1/2`. Nodes with zero degree get a unit
/// self-loop so they form their own component instead of dividing by zero.
pub fn normalized_laplacian(similarity: &DMatrix<f64>) -> DMatrix<f64> {
    let m = similarity.nrows();
    let mut s = similarity.clone();
    for i in 0..m {
        if s.row(i).sum() <= 0.0 {
            s[(i, i)] = 1.0;
        }
    }
    let inv_sqrt: Vec<f64> = (0..m).map(|i| 1.0 / s.row(i).sum().sqrt()).collect();
    DMatrix::from_fn(m, m, |i, j| {
        let a = s[(i, j)] * inv_sqrt[i] * inv_sqrt[j];
        if i == j {
            1.0 - a
        } else {
            -a
        }
    })
}

/// Full eigendecomposition of a symmetric matrix, eigenvalues ascending.
/// Each eigenvector is signed so its largest-magnitude entry is positive.
pub fn sorted_eigen(matrix: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let eig = SymmetricEigen::try_new(matrix.clone(), 1e-14, 10_000).ok_or(ClusteringError::EigenFailure)?;
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]).then(a.cmp(&b)));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(matrix.nrows(), order.len());
    for (c, &i) in order.iter().enumerate() {
        let mut v = eig.eigenvectors.column(i).clone_owned();
        let pivot = v.iter().copied().fold(0.0_f64, |acc, x| if x.abs() > acc.abs() { x } else { acc });
        if pivot < 0.0 {
            v.neg_mut();
        }
        vectors.set_column(c, &v);
    }
    Ok((values, vectors))
}

/// Ng–Jordan–Weiss embedding: the eigenvectors of the `k` smallest
/// eigenvalues of `L_sym`, with each row scaled to unit length.
pub fn spectral_embed(similarity: &DMatrix<f64>, k: usize) -> Result<Embedding> {
    let m = similarity.nrows();
    if similarity.ncols() != m {
        return Err(ClusteringError::Shape(format!("similarity is {m} x {}", similarity.ncols())));
    }
    if k < 2 || k >= m {
        return Err(ClusteringError::InvalidK { k, m });
    }
    if similarity.iter().any(|v| *v < 0.0 || !v.is_finite()) {
        return Err(ClusteringError::Shape("similarity has negative or non-finite entries".into()));
    }
    let (values, vectors) = sorted_eigen(&normalized_laplacian(similarity))?;
    let eigenvectors = vectors.columns(0, k).clone_owned();
    let mut coords = eigenvectors.clone();
    for mut row in coords.row_iter_mut() {
        let norm = row.norm();
        if norm > 0.0 {
            row /= norm;
        }
    }
    Ok(Embedding {
        coords,
        eigenvalues: values.into_iter().take((k + 1).min(m)).collect(),
        eigenvectors,
    })
}
