//! Householder QR with column pivoting, used for numerical rank and null spaces.

use num_complex::Complex64;

use super::matrix::DenseMatrix;

/// Default relative threshold on `|R_kk| / |R_00|`.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

/// `A P = Q R`; only `R` and the permutation are kept.
#[derive(Debug, Clone)]
pub struct PivotedQr {
    r: Vec<f64>,
    rows: usize,
    cols: usize,
    /// `perm[k]` is the original column placed at position `k`.
    perm: Vec<usize>,
}

impl PivotedQr {
    /// Factorizes a `rows x cols` row-major matrix.
    pub fn new(rows: usize, cols: usize, data: &[f64]) -> Self {
        assert_eq!(data.len(), rows * cols);
        let mut a = data.to_vec();
        let mut perm: Vec<usize> = (0..cols).collect();
        let mut norms: Vec<f64> = (0..cols)
            .map(|j| (0..rows).map(|i| a[i * cols + j].powi(2)).sum())
            .collect();
        let steps = rows.min(cols);
        for k in 0..steps {
            // Recompute the remaining column norms exactly; orders here are small.
            for j in k..cols {
                norms[j] = (k..rows).map(|i| a[i * cols + j].powi(2)).sum();
            }
            let p = (k..cols).fold(k, |best, j| if norms[j] > norms[best] { j } else { best });
            if p != k {
                for i in 0..rows {
                    a.swap(i * cols + k, i * cols + p);
                }
                perm.swap(k, p);
                norms.swap(k, p);
            }
            let alpha = norms[k].sqrt();
            if alpha == 0.0 {
                break;
            }
            let x0 = a[k * cols + k];
            let beta = if x0 >= 0.0 { -alpha } else { alpha };
            // v = x - beta e1, stored in place below the diagonal.
            let mut v: Vec<f64> = (k..rows).map(|i| a[i * cols + k]).collect();
            v[0] -= beta;
            let vnorm2: f64 = v.iter().map(|x| x * x).sum();
            if vnorm2 > 0.0 {
                for j in k + 1..cols {
                    let dot: f64 = (k..rows).map(|i| v[i - k] * a[i * cols + j]).sum();
                    let f = 2.0 * dot / vnorm2;
                    for i in k..rows {
                        a[i * cols + j] -= f * v[i - k];
                    }
                }
            }
            a[k * cols + k] = beta;
            for i in k + 1..rows {
                a[i * cols + k] = 0.0;
            }
        }
        Self { r: a, rows, cols, perm }
    }

    pub fn square(m: &DenseMatrix) -> Self {
        Self::new(m.n(), m.n(), m.as_slice())
    }

    fn r(&self, i: usize, j: usize) -> f64 {
        self.r[i * self.cols + j]
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.rows.min(self.cols)).map(|k| self.r(k, k).abs()).collect()
    }

    pub fn rank(&self, rank_tol: f64) -> usize {
        let d = self.diagonal();
        match d.first() {
            None => 0,
            Some(&0.0) => 0,
            Some(&r00) => d.iter().take_while(|&&x| x > rank_tol * r00).count(),
        }
    }

    /// Ratio `|R_kk| / |R_00|` at the first discarded and last kept positions,
    /// i.e. how far the rank decision was from its threshold on either side.
    pub fn rank_margin(&self, rank_tol: f64) -> (f64, f64) {
        let d = self.diagonal();
        let r = self.rank(rank_tol);
        let r00 = d.first().copied().unwrap_or(0.0);
        if r00 == 0.0 {
            return (0.0, f64::INFINITY);
        }
        let kept = if r > 0 { d[r - 1] / r00 } else { f64::INFINITY };
        let dropped = if r < d.len() { d[r] / r00 } else { 0.0 };
        (dropped, kept)
    }

    /// Basis of the null space as unit vectors (one per dropped column).
    pub fn null_space(&self, rank_tol: f64) -> Vec<Vec<f64>> {
        let r = self.rank(rank_tol);
        let n = self.cols;
        let mut basis = Vec::new();
        for free in r..n {
            // Solve R11 y = -R12[:, free] by back substitution.
            let mut y = vec![0.0; r];
            for i in (0..r).rev() {
                let mut s = -self.r(i, free);
                for (j, yj) in y.iter().enumerate().skip(i + 1) {
                    s -= self.r(i, j) * yj;
                }
                y[i] = s / self.r(i, i);
            }
            let mut x = vec![0.0; n];
            for (i, yi) in y.into_iter().enumerate() {
                x[self.perm[i]] = yi;
            }
            x[self.perm[free]] = 1.0;
            let nrm = x.iter().map(|t| t * t).sum::<f64>().sqrt();
            basis.push(x.into_iter().map(|t| t / nrm).collect());
        }
        basis
    }
}

pub fn rank(m: &DenseMatrix, rank_tol: f64) -> usize {
    PivotedQr::square(m).rank(rank_tol)
}

pub fn null_space(m: &DenseMatrix, rank_tol: f64) -> Vec<Vec<f64>> {
    PivotedQr::square(m).null_space(rank_tol)
}

/// Orthonormal basis of the span of `cols` by Gram–Schmidt with column
/// pivoting (reorthogonalized once). Stops when the largest remaining residual
/// norm is at most `rank_tol` times the first pivot norm, the same decision
/// [`PivotedQr::rank`] makes on `|R_kk|`.
pub fn orthonormal_range(cols: &[Vec<f64>], rank_tol: f64) -> Vec<Vec<f64>> {
    let mut rest: Vec<Vec<f64>> = cols.to_vec();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut first = None;
    while !rest.is_empty() {
        let (p, nrm) = rest
            .iter()
            .enumerate()
            .map(|(i, v)| (i, norm(v)))
            .fold((0, -1.0), |best, c| if c.1 > best.1 { c } else { best });
        let r00 = *first.get_or_insert(nrm);
        if r00 == 0.0 || nrm <= rank_tol * r00 {
            break;
        }
        let q: Vec<f64> = rest.swap_remove(p).iter().map(|x| x / nrm).collect();
        for v in &mut rest {
            for _ in 0..2 {
                let d: f64 = v.iter().zip(&q).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(&q).for_each(|(a, b)| *a -= d * b);
            }
        }
        basis.push(q);
    }
    basis
}

/// Rank of `m²`, decided on `m` applied to an orthonormal basis of its range
/// so that the conditioning of `m` is not squared.
pub fn rank_of_square(m: &DenseMatrix, rank_tol: f64) -> usize {
    let cols: Vec<Vec<f64>> = (0..m.n()).map(|j| (0..m.n()).map(|i| m[(i, j)]).collect()).collect();
    let basis = orthonormal_range(&cols, rank_tol);
    let image: Vec<Vec<f64>> = basis.iter().map(|v| m.mul_vec(v)).collect();
    orthonormal_range(&image, rank_tol).len()
}

/// Rank of the complex matrix `M − λI`, through its real `2n x 2n` embedding
/// `[[Re, −Im], [Im, Re]]` whose rank is twice the complex rank.
/// Returns the rank and the rank margin of the embedding.
pub fn complex_shifted_rank(m: &DenseMatrix, lambda: Complex64, rank_tol: f64) -> (usize, (f64, f64)) {
    let n = m.n();
    let w = 2 * n;
    let mut data = vec![0.0; w * w];
    for i in 0..n {
        for j in 0..n {
            let re = m[(i, j)] - if i == j { lambda.re } else { 0.0 };
            let im = if i == j { -lambda.im } else { 0.0 };
            data[i * w + j] = re;
            data[i * w + j + n] = -im;
            data[(i + n) * w + j] = im;
            data[(i + n) * w + j + n] = re;
        }
    }
    let qr = PivotedQr::new(w, w, &data);
    let r = qr.rank(rank_tol);
    // Numerically the embedding rank is even; round down to be conservative.
    (r / 2, qr.rank_margin(rank_tol))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_rank_keeps_small_eigenvalues() {
        let m = DenseMatrix::from_rows(&[[1.0, 1.0, 0.0], [0.0, 1e-6, 0.0], [0.0, 0.0, 0.0]]).unwrap();
        assert_eq!(rank(&m.matmul(&m), DEFAULT_RANK_TOL), 1);
        assert_eq!(rank_of_square(&m, DEFAULT_RANK_TOL), 2);
        let jordan = DenseMatrix::from_rows(&[[0.0, 1.0], [0.0, 0.0]]).unwrap();
        assert_eq!(rank_of_square(&jordan, DEFAULT_RANK_TOL), 0);
        let basis = orthonormal_range(&[vec![3.0, 4.0], vec![6.0, 8.0]], DEFAULT_RANK_TOL);
        assert_eq!(basis.len(), 1);
        assert!((basis[0][0].abs() - 0.6).abs() < 1e-15);
    }

    #[test]
    fn zero_matrix_rank() {
        assert_eq!(rank(&DenseMatrix::zeros(5), DEFAULT_RANK_TOL), 0);
    }

    #[test]
    fn k_tilde_rank() {
        let n = 4;
        let k = DenseMatrix::from_fn(n, |i, j| if i == j { 1.0 } else { 0.0 } - 0.25);
        assert_eq!(rank(&k, DEFAULT_RANK_TOL), 3);
        let ns = null_space(&k, DEFAULT_RANK_TOL);
        assert_eq!(ns.len(), 1);
        let v = &ns[0];
        assert!(k.mul_vec(v).iter().all(|x| x.abs() < 1e-14));
        assert!(v.iter().all(|x| (x.abs() - 0.5).abs() < 1e-14));
    }

    #[test]
    fn path_laplacian_rank_two() {
        // Standardized Laplacian of 0 -> 1 -> 2 with unit weights, b = 1.
        let t = 1.0 / 3.0;
        let l = DenseMatrix::from_rows(&[[t, -t, 0.0], [0.0, t, -t], [0.0, 0.0, 0.0]]).unwrap();
        assert_eq!(rank(&l, DEFAULT_RANK_TOL), 2);
    }

    #[test]
    fn null_space_vectors_annihilate() {
        let m = DenseMatrix::from_rows(&[
            [1.0, 2.0, 3.0, 4.0],
            [2.0, 4.0, 6.0, 8.0],
            [0.0, 1.0, 1.0, 0.0],
            [1.0, 3.0, 4.0, 4.0],
        ])
        .unwrap();
        assert_eq!(rank(&m, DEFAULT_RANK_TOL), 2);
        let ns = null_space(&m, DEFAULT_RANK_TOL);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(m.mul_vec(&v).iter().all(|x| x.abs() < 1e-12));
        }
    }

    #[test]
    fn complex_rank_of_rotation_shift() {
        let m = DenseMatrix::from_rows(&[[0.0, -1.0], [1.0, 0.0]]).unwrap();
        let (r, _) = complex_shifted_rank(&m, Complex64::new(0.0, 1.0), DEFAULT_RANK_TOL);
        assert_eq!(r, 1);
        let (r, _) = complex_shifted_rank(&m, Complex64::new(0.5, 1.0), DEFAULT_RANK_TOL);
        assert_eq!(r, 2);
    }
}
