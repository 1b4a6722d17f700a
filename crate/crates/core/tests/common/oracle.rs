//! Independent reference implementations. Nothing here calls into the
//! library's numerics or into nalgebra: plain loops over `Vec<f64>`, written
//! from the textbook definitions and deliberately slow.

use std::f64::consts::PI;

pub struct Closed {
    pub mean: f64,
    pub sd: f64,
    pub skewness: f64,
    pub kurtosis: f64,
    pub minimum: f64,
    pub maximum: f64,
    pub lowerquant: f64,
    pub median: f64,
    pub upperquant: f64,
    pub var99: f64,
    pub var95: f64,
    pub slope: f64,
    pub intercept: f64,
    pub acf1: f64,
}

/// Direct-summation closed-form characteristics. Skewness and kurtosis use
/// the standardised-sum forms
/// `n / ((n-1)(n-2)) sum z^3` and
/// `n(n+1) / ((n-1)(n-2)(n-3)) sum z^4 - 3(n-1)^2 / ((n-2)(n-3))`
/// with `z = (x - mean) / s`, which are algebraically equal to the adjusted
/// Fisher-Pearson estimators but evaluated differently.
pub fn closed_form(x: &[f64]) -> Closed {
    let n = x.len();
    let nf = n as f64;
    let mut total = 0.0;
    for v in x {
        total += v;
    }
    let mean = total / nf;
    let mut ss = 0.0;
    for v in x {
        ss += (v - mean) * (v - mean);
    }
    let constant = x.iter().all(|v| *v == x[0]);
    let sd = if constant { 0.0 } else { (ss / (nf - 1.0)).sqrt() };
    let (mut skewness, mut kurtosis) = (0.0, 0.0);
    if !constant {
        let mut s3 = 0.0;
        let mut s4 = 0.0;
        for v in x {
            let z = (v - mean) / sd;
            s3 += z * z * z;
            s4 += z * z * z * z;
        }
        skewness = nf / ((nf - 1.0) * (nf - 2.0)) * s3;
        kurtosis = nf * (nf + 1.0) / ((nf - 1.0) * (nf - 2.0) * (nf - 3.0)) * s4
            - 3.0 * (nf - 1.0) * (nf - 1.0) / ((nf - 2.0) * (nf - 3.0));
    }

    let mut sorted = x.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let q = |p: f64| {
        let h = (nf - 1.0) * p;
        let lo = h.floor() as usize;
        let hi = (h.ceil() as usize).min(n - 1);
        sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
    };

    // slope against t = 0..n-1: sum (t - tbar) x / (n (n^2 - 1) / 12)
    let tbar = (nf - 1.0) / 2.0;
    let mut stx = 0.0;
    for (t, v) in x.iter().enumerate() {
        stx += (t as f64 - tbar) * (v - mean);
    }
    let slope = if constant { 0.0 } else { stx / (nf * (nf * nf - 1.0) / 12.0) };

    let acf1 = if constant {
        0.0
    } else {
        let mut num = 0.0;
        for t in 0..n - 1 {
            num += (x[t] - mean) * (x[t + 1] - mean);
        }
        num / ss
    };

    Closed {
        mean,
        sd,
        skewness,
        kurtosis,
        minimum: sorted[0],
        maximum: sorted[n - 1],
        lowerquant: q(0.25),
        median: q(0.5),
        upperquant: q(0.75),
        var99: q(0.01),
        var95: q(0.05),
        slope,
        intercept: x[0],
        acf1,
    }
}

/// `|f_k|^2` for `k = 1..=n/2` by the DFT-matrix product
/// `f_k = sum_j x_j exp(-2 pi i j k / n)` of the demeaned series.
pub fn dft_power(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mean = x.iter().sum::<f64>() / n as f64;
    (1..=n / 2)
        .map(|k| {
            let (mut re, mut im) = (0.0, 0.0);
            for (j, v) in x.iter().enumerate() {
                // reduce j*k mod n first so the angle stays exact
                let angle = 2.0 * PI * ((j * k) % n) as f64 / n as f64;
                re += (v - mean) * angle.cos();
                im -= (v - mean) * angle.sin();
            }
            re * re + im * im
        })
        .collect()
}

/// DFA-1 fluctuation at window `s` by explicit per-window normal equations.
pub fn dfa_fluctuation(x: &[f64], s: usize) -> f64 {
    let n = x.len();
    let mean = x.iter().sum::<f64>() / n as f64;
    let mut y = vec![0.0; n];
    let mut acc = 0.0;
    for i in 0..n {
        acc += x[i] - mean;
        y[i] = acc;
    }
    let mut starts: Vec<usize> = (0..n / s).map(|i| i * s).collect();
    if n % s != 0 {
        for i in 0..n / s {
            starts.push(n - (i + 1) * s);
        }
    }
    let mut ssr = 0.0;
    for &st in &starts {
        let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
        for i in 0..s {
            let t = i as f64;
            sx += t;
            sy += y[st + i];
            sxx += t * t;
            sxy += t * y[st + i];
        }
        let sf = s as f64;
        let b = (sf * sxy - sx * sy) / (sf * sxx - sx * sx);
        let a = (sy - b * sx) / sf;
        for i in 0..s {
            let r = y[st + i] - a - b * i as f64;
            ssr += r * r;
        }
    }
    (ssr / (starts.len() * s) as f64).sqrt()
}

/// Least-squares slope of `ln F(s)` on `ln s`.
pub fn dfa_exponent(x: &[f64], windows: &[usize]) -> f64 {
    let pts: Vec<(f64, f64)> = windows.iter().map(|&s| ((s as f64).ln(), dfa_fluctuation(x, s).ln())).collect();
    slope_of(&pts)
}

pub fn slope_of(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(a, b) in pts {
        sx += a;
        sy += b;
        sxx += a * a;
        sxy += a * b;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Rosenstein mean log-divergence `y(0..=fit_end)` with the same neighbour
/// rules as the estimator: Theiler window `w`, resolution floor `floor`.
pub fn rosenstein_divergence(x: &[f64], dim: usize, delay: usize, w: usize, fit_end: usize, floor: f64) -> Vec<f64> {
    let span = (dim - 1) * delay;
    let usable = x.len() - span - fit_end;
    let d = |a: usize, b: usize| {
        let mut s = 0.0;
        for e in 0..dim {
            let q = x[a + e * delay] - x[b + e * delay];
            s += q * q;
        }
        s.sqrt()
    };
    let mut pairs = Vec::new();
    for i in 0..usable {
        let mut best = (f64::INFINITY, usize::MAX);
        for j in 0..usable {
            let gap = if i > j { i - j } else { j - i };
            if gap <= w {
                continue;
            }
            let dij = d(i, j);
            if dij > floor && dij < best.0 {
                best = (dij, j);
            }
        }
        if best.1 != usize::MAX {
            pairs.push((i, best.1));
        }
    }
    (0..=fit_end)
        .map(|k| {
            let logs: Vec<f64> = pairs.iter().map(|&(i, j)| d(i + k, j + k)).filter(|v| *v > 0.0).map(f64::ln).collect();
            logs.iter().sum::<f64>() / logs.len() as f64
        })
        .collect()
}

/// Gaussian similarity by double loop; zero diagonal.
pub fn gaussian_similarity(rows: &[Vec<f64>], sigma: f64) -> Vec<Vec<f64>> {
    let m = rows.len();
    let mut s = vec![vec![0.0; m]; m];
    for i in 0..m {
        for j in 0..m {
            if i != j {
                let d2: f64 = rows[i].iter().zip(&rows[j]).map(|(a, b)| (a - b) * (a - b)).sum();
                s[i][j] = (-d2 / (2.0 * sigma * sigma)).exp();
            }
        }
    }
    s
}

/// `I - D^-1/2 S D^-1/2`, assuming every degree is positive.
pub fn sym_laplacian(s: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let m = s.len();
    let deg: Vec<f64> = s.iter().map(|r| r.iter().sum()).collect();
    let mut l = vec![vec![0.0; m]; m];
    for i in 0..m {
        for j in 0..m {
            let id = if i == j { 1.0 } else { 0.0 };
            l[i][j] = id - s[i][j] / (deg[i] * deg[j]).sqrt();
        }
    }
    l
}

/// Cyclic Jacobi eigen-decomposition of a symmetric matrix. Returns
/// eigenvalues ascending and the matching eigenvectors as columns `v[row][col]`.
pub fn jacobi_eigen(a: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut a: Vec<Vec<f64>> = a.to_vec();
    let mut v = vec![vec![0.0; n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off += a[i][j] * a[i][j];
                }
            }
        }
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let (vkp, vkq) = (row[p], row[q]);
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[x][x].partial_cmp(&a[y][y]).unwrap());
    let values = order.iter().map(|&i| a[i][i]).collect();
    let vectors = (0..n).map(|r| order.iter().map(|&c| v[r][c]).collect()).collect();
    (values, vectors)
}

/// Frobenius distance between the projectors onto the spans of the first
/// `k` columns of `u` and of `w`.
pub fn projector_distance(u: &[Vec<f64>], w: &[Vec<f64>], k: usize) -> f64 {
    let m = u.len();
    let mut total = 0.0;
    for i in 0..m {
        for j in 0..m {
            let mut pu = 0.0;
            let mut pw = 0.0;
            for c in 0..k {
                pu += u[i][c] * u[j][c];
                pw += w[i][c] * w[j][c];
            }
            total += (pu - pw) * (pu - pw);
        }
    }
    total.sqrt()
}

/// Within-cluster sum of squared distances to the cluster means.
pub fn wcss(points: &[Vec<f64>], labels: &[usize], k: usize) -> f64 {
    let d = points[0].len();
    let mut sums = vec![vec![0.0; d]; k];
    let mut counts = vec![0usize; k];
    for (p, &l) in points.iter().zip(labels) {
        counts[l] += 1;
        for e in 0..d {
            sums[l][e] += p[e];
        }
    }
    let mut total = 0.0;
    for (p, &l) in points.iter().zip(labels) {
        for e in 0..d {
            let c = sums[l][e] / counts[l] as f64;
            total += (p[e] - c) * (p[e] - c);
        }
    }
    total
}

/// Minimum within-cluster sum of squares over every partition of the points
/// into exactly `k` non-empty groups (restricted-growth enumeration).
pub fn exhaustive_kmeans(points: &[Vec<f64>], k: usize) -> f64 {
    let m = points.len();
    let mut labels = vec![0usize; m];
    let mut best = f64::INFINITY;
    fn rec(i: usize, used: usize, k: usize, labels: &mut Vec<usize>, points: &[Vec<f64>], best: &mut f64) {
        let m = labels.len();
        if m - i < k - used {
            return;
        }
        if i == m {
            if used == k {
                *best = best.min(wcss(points, labels, k));
            }
            return;
        }
        for l in 0..=used.min(k - 1) {
            labels[i] = l;
            rec(i + 1, used.max(l + 1), k, labels, points, best);
        }
    }
    rec(0, 0, k, &mut labels, points, &mut best);
    best
}

/// PCA via the eigen-decomposition of the Gram matrix of the column-centred
/// data. Returns `(scores m x c, explained variance ratios)` for the top `c`
/// components, each score column with arbitrary sign.
pub fn gram_pca(rows: &[Vec<f64>], c: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
    let m = rows.len();
    let d = rows[0].len();
    let mut x = rows.to_vec();
    for e in 0..d {
        let mean = x.iter().map(|r| r[e]).sum::<f64>() / m as f64;
        for r in x.iter_mut() {
            r[e] -= mean;
        }
    }
    let mut g = vec![vec![0.0; m]; m];
    for i in 0..m {
        for j in 0..m {
            g[i][j] = x[i].iter().zip(&x[j]).map(|(a, b)| a * b).sum();
        }
    }
    let (vals, vecs) = jacobi_eigen(&g);
    let trace: f64 = (0..m).map(|i| g[i][i]).sum();
    let mut scores = vec![vec![0.0; c]; m];
    let mut ratios = vec![0.0; c];
    for comp in 0..c {
        let idx = m - 1 - comp;
        let lam = vals[idx].max(0.0);
        ratios[comp] = lam / trace;
        for i in 0..m {
            scores[i][comp] = vecs[i][idx] * lam.sqrt();
        }
    }
    (scores, ratios)
}
