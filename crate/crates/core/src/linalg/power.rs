use super::matrix::DenseMatrix;
use super::qr::orthonormal_range;

/// Outcome of [`matrix_power_limit`].
#[derive(Debug, Clone)]
pub enum PowerLimit {
    /// `limit = M^power` with `‖M^{power+1} − M^power‖_∞ ≤ tol`.
    Converged { limit: DenseMatrix, power: u64, step: f64 },
    /// The step criterion was not met by `M^power`, the last power tried.
    Divergent { power: u64, step: f64 },
}

impl PowerLimit {
    pub fn limit(&self) -> Option<&DenseMatrix> {
        match self {
            PowerLimit::Converged { limit, .. } => Some(limit),
            PowerLimit::Divergent { .. } => None,
        }
    }

    pub fn step(&self) -> f64 {
        match self {
            PowerLimit::Converged { step, .. } | PowerLimit::Divergent { step, .. } => *step,
        }
    }
}

/// Looks for `lim_k M^k` along the powers `M^1, M^2, M^4, …` obtained by
/// repeated squaring, stopping at the first `M^k` with
/// `‖M^{k+1} − M^k‖_∞ ≤ tol` or once `k` exceeds `max_k`.
pub fn matrix_power_limit(m: &DenseMatrix, tol: f64, max_k: u64) -> PowerLimit {
    let mut a = m.clone();
    let mut k: u64 = 1;
    loop {
        let next = m.matmul(&a);
        let step = (&next - &a).inf_norm();
        if step <= tol {
            return PowerLimit::Converged {
                limit: a,
                power: k,
                step,
            };
        }
        if k >= max_k || !step.is_finite() {
            return PowerLimit::Divergent { power: k, step };
        }
        a = a.matmul(&a);
        k = k.saturating_mul(2);
    }
}

/// Least `k` with `rank M^{k+1} = rank M^k`.
///
/// For a nilpotent Jordan block of order `n` this is `n`, one past the
/// `0..n-1` range quoted for Laplacians, so the search runs up to `n`.
pub fn index_of(m: &DenseMatrix, rank_tol: f64) -> usize {
    let n = m.n();
    // Orthonormal bases of range(m^k), so ranks of powers never square the conditioning.
    let mut basis: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..n).map(|i| f64::from(u8::from(i == j))).collect())
        .collect();
    let mut prev = n;
    for k in 0..=n {
        let image: Vec<Vec<f64>> = basis.iter().map(|v| m.mul_vec(v)).collect();
        basis = orthonormal_range(&image, rank_tol);
        if basis.len() == prev {
            return k;
        }
        prev = basis.len();
    }
    n
}
