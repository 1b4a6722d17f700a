//! Seeded k-means with k-means++ seeding.
//!
//! Restart `r` draws from `ChaCha8Rng` seeded with `seed` on stream `r`, so
//! each restart is reproducible on its own and restarts can run in any order.
//! Each restart runs Lloyd iterations to a fixed point and then single-point
//! transfers (Hartigan) until no move lowers the inertia. The winner is the
//! restart with the lowest `(inertia, restart index)`.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub const DEFAULT_RESTARTS: usize = 50;
const MAX_LLOYD_ITERS: usize = 500;

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansResult {
    pub labels: Vec<usize>,
    pub centers: DMatrix<f64>,
    pub inertia: f64,
    /// Index of the winning restart.
    pub restart: usize,
}

/// Sum of squared distances of each point to its cluster mean.
pub fn inertia(points: &DMatrix<f64>, labels: &[usize], k: usize) -> f64 {
    let centers = means(points, labels, k);
    labels.iter().enumerate().map(|(i, &c)| sq_dist_row(points, i, &centers, c)).sum()
}

/// Panics unless `1 <= k <= points.nrows()` and `restarts >= 1`.
pub fn kmeans(points: &DMatrix<f64>, k: usize, seed: u64, restarts: usize) -> KMeansResult {
    let m = points.nrows();
    assert!(k >= 1 && k <= m, "k = {k} outside 1..={m}");
    assert!(restarts >= 1);
    (0..restarts)
        .into_par_iter()
        .map(|r| single_run(points, k, seed, r))
        .reduce_with(|a, b| match a.inertia.total_cmp(&b.inertia).then(a.restart.cmp(&b.restart)) {
            std::cmp::Ordering::Greater => b,
            _ => a,
        })
        .expect("at least one restart")
}

fn single_run(points: &DMatrix<f64>, k: usize, seed: u64, restart: usize) -> KMeansResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    let mut centers = plus_plus(points, k, &mut rng);
    let mut labels = assign(points, &centers);
    for _ in 0..MAX_LLOYD_ITERS {
        repair_empty(points, &mut labels, &mut centers, k);
        centers = means(points, &labels, k);
        let next = assign(points, &centers);
        if next == labels {
            break;
        }
        labels = next;
    }
    repair_empty(points, &mut labels, &mut centers, k);
    hartigan(points, &mut labels, k);
    let centers = means(points, &labels, k);
    let inertia = labels.iter().enumerate().map(|(i, &c)| sq_dist_row(points, i, &centers, c)).sum();
    KMeansResult {
        labels,
        centers,
        inertia,
        restart,
    }
}

/// D²-weighted seeding. Once every point coincides with a chosen centre the
/// remaining centres take the lowest unchosen indices.
fn plus_plus(points: &DMatrix<f64>, k: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let m = points.nrows();
    let mut chosen = vec![rng.random_range(0..m)];
    let mut d2: Vec<f64> = (0..m).map(|i| sq_dist_points(points, i, chosen[0])).collect();
    while chosen.len() < k {
        let total: f64 = d2.iter().sum();
        let next = if total > 0.0 {
            let target = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut pick = None;
            for (i, &w) in d2.iter().enumerate() {
                acc += w;
                if w > 0.0 && acc > target {
                    pick = Some(i);
                    break;
                }
            }
            // rounding can leave target just above the final sum
            pick.unwrap_or_else(|| d2.iter().rposition(|&w| w > 0.0).expect("positive total"))
        } else {
            (0..m).find(|i| !chosen.contains(i)).expect("k <= m")
        };
        chosen.push(next);
        for (i, d) in d2.iter_mut().enumerate() {
            *d = d.min(sq_dist_points(points, i, next));
        }
    }
    DMatrix::from_fn(k, points.ncols(), |c, j| points[(chosen[c], j)])
}

/// Nearest centre, ties to the lowest centre index.
fn assign(points: &DMatrix<f64>, centers: &DMatrix<f64>) -> Vec<usize> {
    (0..points.nrows())
        .map(|i| {
            let mut best = (f64::INFINITY, 0);
            for c in 0..centers.nrows() {
                let d = sq_dist_row(points, i, centers, c);
                if d < best.0 {
                    best = (d, c);
                }
            }
            best.1
        })
        .collect()
}

/// Gives every empty cluster the point farthest from its own centre, taken
/// from a cluster with at least two members.
fn repair_empty(points: &DMatrix<f64>, labels: &mut [usize], centers: &mut DMatrix<f64>, k: usize) {
    loop {
        let sizes = sizes(labels, k);
        let Some(empty) = sizes.iter().position(|&s| s == 0) else {
            return;
        };
        let mut far = (f64::NEG_INFINITY, usize::MAX);
        for (i, &c) in labels.iter().enumerate() {
            if sizes[c] < 2 {
                continue;
            }
            let d = sq_dist_row(points, i, centers, c);
            if d > far.0 {
                far = (d, i);
            }
        }
        labels[far.1] = empty;
        centers.set_row(empty, &points.row(far.1));
    }
}

/// Moves single points between clusters while the exact inertia change
/// `n_b/(n_b+1)|x-c_b|² - n_a/(n_a-1)|x-c_a|²` is negative.
fn hartigan(points: &DMatrix<f64>, labels: &mut [usize], k: usize) {
    let m = points.nrows();
    let mut centers = means(points, labels, k);
    let mut counts = sizes(labels, k);
    let tol = 1e-12;
    for _ in 0..(100 * m) {
        let mut moved = false;
        for i in 0..m {
            let a = labels[i];
            if counts[a] < 2 {
                continue;
            }
            let na = counts[a] as f64;
            let removal = na / (na - 1.0) * sq_dist_row(points, i, &centers, a);
            let mut best = (0.0, a);
            for b in (0..k).filter(|&b| b != a) {
                let nb = counts[b] as f64;
                let delta = nb / (nb + 1.0) * sq_dist_row(points, i, &centers, b) - removal;
                if delta < best.0 - tol * (1.0 + removal) {
                    best = (delta, b);
                }
            }
            if best.1 != a {
                let b = best.1;
                let x: DVector<f64> = points.row(i).transpose();
                let (na, nb) = (counts[a] as f64, counts[b] as f64);
                let ca = (centers.row(a).transpose() * na - &x) / (na - 1.0);
                let cb = (centers.row(b).transpose() * nb + &x) / (nb + 1.0);
                centers.set_row(a, &ca.transpose());
                centers.set_row(b, &cb.transpose());
                counts[a] -= 1;
                counts[b] += 1;
                labels[i] = b;
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
}

fn sizes(labels: &[usize], k: usize) -> Vec<usize> {
    let mut s = vec![0; k];
    for &l in labels {
        s[l] += 1;
    }
    s
}

fn means(points: &DMatrix<f64>, labels: &[usize], k: usize) -> DMatrix<f64> {
    let mut sums = DMatrix::zeros(k, points.ncols());
    let mut counts = vec![0usize; k];
    for (i, &c) in labels.iter().enumerate() {
        let mut row = sums.row_mut(c);
        row += points.row(i);
        counts[c] += 1;
    }
    for (c, &n) in counts.iter().enumerate() {
        if n > 0 {
            let mut row = sums.row_mut(c);
            row /= n as f64;
        }
    }
    sums
}

fn sq_dist_row(points: &DMatrix<f64>, i: usize, centers: &DMatrix<f64>, c: usize) -> f64 {
    (0..points.ncols()).map(|j| (points[(i, j)] - centers[(c, j)]).powi(2)).sum()
}

fn sq_dist_points(points: &DMatrix<f64>, a: usize, b: usize) -> f64 {
    sq_dist_row(points, a, points, b)
}
