//! Eigenvalues of real nonsymmetric matrices.
//!
//! The pipeline is the classical EISPACK one: diagonal balancing by powers of
//! two, Householder reduction to upper Hessenberg form, then the Francis
//! implicit double-shift QR iteration on the Hessenberg matrix. Complex
//! eigenvalues come out of a converged 2x2 block as an exact conjugate pair.
//! Eigenvectors are recovered afterwards by inverse iteration in complex
//! arithmetic, which also yields the residual recorded for each eigenvalue.

use num_complex::Complex64;
use serde::Serialize;

use super::matrix::{cnorm, DenseMatrix};
use super::LinalgError;

/// Default relative eigen-residual tolerance.
pub const DEFAULT_EIG_TOL: f64 = 1e-10;
/// Default radius below which eigenvalues are treated as coincident.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-6;

const EPS: f64 = f64::EPSILON;

#[derive(Debug, Clone, Copy)]
pub struct EigenOptions {
    pub tol: f64,
    pub cluster_tol: f64,
    /// Total QR sweep budget; `None` means `100 * n`.
    pub max_sweeps: Option<usize>,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_EIG_TOL,
            cluster_tol: DEFAULT_CLUSTER_TOL,
            max_sweeps: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Cluster {
    pub center: Complex64,
    pub multiplicity: usize,
}

/// Eigenvalues of a matrix with per-eigenvalue residuals and multiplicity clusters.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<Complex64>,
    /// `‖Mv − λv‖₂` for the unit inverse-iteration vector of each eigenvalue.
    pub residuals: Vec<f64>,
    /// Index into `clusters` for every eigenvalue.
    pub cluster_ids: Vec<usize>,
    pub clusters: Vec<Cluster>,
    /// `tol · max(1, ‖M‖_F)` used when the spectrum was computed.
    pub residual_bound: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SpectrumEntry {
    pub re: f64,
    pub im: f64,
    pub residual: f64,
    pub cluster_id: usize,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Number of eigenvalues in clusters that come within `radius` of `z`.
    pub fn multiplicity_at(&self, z: Complex64, radius: f64) -> usize {
        let mut hit = vec![false; self.clusters.len()];
        for (lam, &c) in self.eigenvalues.iter().zip(&self.cluster_ids) {
            if (lam - z).norm() <= radius {
                hit[c] = true;
            }
        }
        self.cluster_ids.iter().filter(|&&c| hit[c]).count()
    }

    pub fn entries(&self) -> Vec<SpectrumEntry> {
        self.eigenvalues
            .iter()
            .zip(&self.residuals)
            .zip(&self.cluster_ids)
            .map(|((z, &residual), &cluster_id)| SpectrumEntry {
                re: z.re,
                im: z.im,
                residual,
                cluster_id,
            })
            .collect()
    }
}

/// Full spectrum with residuals and clusters, using default options apart from `tol`.
pub fn eigenvalues(m: &DenseMatrix, tol: f64) -> Result<Spectrum, LinalgError> {
    eigenvalues_with(
        m,
        &EigenOptions {
            tol,
            ..EigenOptions::default()
        },
    )
}

pub fn eigenvalues_with(m: &DenseMatrix, opts: &EigenOptions) -> Result<Spectrum, LinalgError> {
    let mut eigs = eigvals_with_budget(m, opts.max_sweeps)?;
    sort_eigenvalues(&mut eigs);
    let bound = opts.tol * m.frobenius_norm().max(1.0);
    let residuals = eigs.iter().map(|&lam| inverse_iteration(m, lam, bound).1).collect();
    let (cluster_ids, clusters) = cluster(&eigs, opts.cluster_tol);
    Ok(Spectrum {
        eigenvalues: eigs,
        residuals,
        cluster_ids,
        clusters,
        residual_bound: bound,
    })
}

/// Eigenvalues only, in the order produced by the QR iteration.
pub fn eigvals(m: &DenseMatrix) -> Result<Vec<Complex64>, LinalgError> {
    eigvals_with_budget(m, None)
}

pub fn spectral_radius(m: &DenseMatrix) -> Result<f64, LinalgError> {
    Ok(eigvals(m)?.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

/// Sorts by real part, then imaginary part.
pub fn sort_eigenvalues(eigs: &mut [Complex64]) {
    eigs.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Union-find grouping of eigenvalues closer than `radius`.
pub fn cluster(eigs: &[Complex64], radius: f64) -> (Vec<usize>, Vec<Cluster>) {
    let n = eigs.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..n {
        for j in i + 1..n {
            if (eigs[i] - eigs[j]).norm() < radius {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut ids = vec![usize::MAX; n];
    let mut root_to_id = vec![usize::MAX; n];
    let mut clusters: Vec<Cluster> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        if root_to_id[r] == usize::MAX {
            root_to_id[r] = clusters.len();
            clusters.push(Cluster {
                center: Complex64::new(0.0, 0.0),
                multiplicity: 0,
            });
        }
        let c = root_to_id[r];
        ids[i] = c;
        clusters[c].center += eigs[i];
        clusters[c].multiplicity += 1;
    }
    for c in &mut clusters {
        c.center /= c.multiplicity as f64;
    }
    (ids, clusters)
}

/// Unit eigenvector for `lambda` by inverse iteration, with the largest
/// component rotated to be real and positive.
pub fn eigenvector_for(m: &DenseMatrix, lambda: Complex64, tol: f64) -> Result<Vec<Complex64>, LinalgError> {
    let bound = tol * m.frobenius_norm().max(1.0);
    let (v, residual) = inverse_iteration(m, lambda, bound);
    if residual <= bound {
        Ok(v)
    } else {
        Err(LinalgError::NotAnEigenvalue {
            re: lambda.re,
            im: lambda.im,
            residual,
        })
    }
}

/// Returns the best vector found and its residual `‖Mv − λv‖₂`.
fn inverse_iteration(m: &DenseMatrix, lambda: Complex64, target: f64) -> (Vec<Complex64>, f64) {
    let n = m.n();
    if n == 0 {
        return (Vec::new(), 0.0);
    }
    let scale = m.frobenius_norm().max(1.0);
    let lu = ComplexLu::new(m, lambda, EPS * scale);
    // Deterministic start with no special alignment to structured eigenvectors.
    let mut x: Vec<Complex64> = (0..n)
        .map(|j| Complex64::new(0.5 + ((j as f64 + 1.0) * 0.754_877_666_246_692_7).fract(), 0.0))
        .collect();
    normalize(&mut x);
    let mut best = (x.clone(), f64::INFINITY);
    for _ in 0..6 {
        let mut y = lu.solve(&x);
        if !normalize(&mut y) {
            break;
        }
        let r = residual(m, lambda, &y);
        if r < best.1 {
            best = (y.clone(), r);
        }
        x = y;
        if best.1 <= target * 1e-3 {
            break;
        }
    }
    fix_phase(&mut best.0);
    best
}

pub fn residual(m: &DenseMatrix, lambda: Complex64, v: &[Complex64]) -> f64 {
    let mv = m.mul_cvec(v);
    mv.iter()
        .zip(v)
        .map(|(a, b)| (a - lambda * b).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

fn normalize(v: &mut [Complex64]) -> bool {
    let nrm = cnorm(v);
    if !(nrm.is_finite() && nrm > 0.0) {
        return false;
    }
    for z in v.iter_mut() {
        *z /= nrm;
    }
    true
}

fn fix_phase(v: &mut [Complex64]) {
    let mut best = 0;
    for (i, z) in v.iter().enumerate() {
        if z.norm() > v[best].norm() * (1.0 + 1e-12) {
            best = i;
        }
    }
    let pivot = v[best];
    if pivot.norm() > 0.0 {
        let phase = pivot.conj() / pivot.norm();
        for z in v.iter_mut() {
            *z *= phase;
        }
    }
}

/// LU factorization of `M − σI` with partial pivoting; tiny pivots are
/// replaced by `floor` so that solves stay finite at exact eigenvalues.
struct ComplexLu {
    n: usize,
    lu: Vec<Complex64>,
    perm: Vec<usize>,
}

impl ComplexLu {
    fn new(m: &DenseMatrix, sigma: Complex64, floor: f64) -> Self {
        let n = m.n();
        let mut lu: Vec<Complex64> = m.as_slice().iter().map(|&x| Complex64::new(x, 0.0)).collect();
        for i in 0..n {
            lu[i * n + i] -= sigma;
        }
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let mut p = k;
            for i in k + 1..n {
                if lu[i * n + k].norm() > lu[p * n + k].norm() {
                    p = i;
                }
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            if lu[k * n + k].norm() < floor {
                lu[k * n + k] = Complex64::new(floor, 0.0);
            }
            let pivot = lu[k * n + k];
            for i in k + 1..n {
                let f = lu[i * n + k] / pivot;
                lu[i * n + k] = f;
                if f != Complex64::new(0.0, 0.0) {
                    for j in k + 1..n {
                        let u = lu[k * n + j];
                        lu[i * n + j] -= f * u;
                    }
                }
            }
        }
        Self { n, lu, perm }
    }

    fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for k in 0..i {
                let l = self.lu[i * n + k];
                x[i] = x[i] - l * x[k];
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let u = self.lu[i * n + k];
                x[i] = x[i] - u * x[k];
            }
            x[i] /= self.lu[i * n + i];
        }
        x
    }
}

fn eigvals_with_budget(m: &DenseMatrix, budget: Option<usize>) -> Result<Vec<Complex64>, LinalgError> {
    if !m.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    let n = m.n();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut h = m.clone();
    balance(&mut h);
    hessenberg(&mut h);
    hqr(&mut h, budget.unwrap_or(100 * n))
}

/// Scales rows and columns by powers of two so their off-diagonal norms are
/// comparable. Similarity by a diagonal of powers of two is exact.
pub(crate) fn balance(a: &mut DenseMatrix) {
    const RADIX: f64 = 2.0;
    const SQRDX: f64 = RADIX * RADIX;
    let n = a.n();
    let mut noconv = true;
    while noconv {
        noconv = false;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].abs();
                    r += a[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= SQRDX;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= SQRDX;
            }
            if (c + r) / f < 0.95 * s {
                noconv = true;
                let g = 1.0 / f;
                for j in 0..n {
                    a[(i, j)] *= g;
                }
                for j in 0..n {
                    a[(j, i)] *= f;
                }
            }
        }
    }
}

/// Householder reduction to upper Hessenberg form, in place.
pub(crate) fn hessenberg(h: &mut DenseMatrix) {
    let n = h.n();
    if n < 3 {
        return;
    }
    let mut ort = vec![0.0; n];
    let high = n - 1;
    for m in 1..high {
        let scale: f64 = (m..=high).map(|i| h[(i, m - 1)].abs()).sum();
        if scale == 0.0 {
            continue;
        }
        let mut hh = 0.0;
        for i in (m..=high).rev() {
            ort[i] = h[(i, m - 1)] / scale;
            hh += ort[i] * ort[i];
        }
        let mut g = hh.sqrt();
        if ort[m] > 0.0 {
            g = -g;
        }
        hh -= ort[m] * g;
        ort[m] -= g;

        for j in m..n {
            let mut f = 0.0;
            for i in (m..=high).rev() {
                f += ort[i] * h[(i, j)];
            }
            f /= hh;
            for i in m..=high {
                h[(i, j)] -= f * ort[i];
            }
        }
        for i in 0..=high {
            let mut f = 0.0;
            for j in (m..=high).rev() {
                f += ort[j] * h[(i, j)];
            }
            f /= hh;
            for j in m..=high {
                h[(i, j)] -= f * ort[j];
            }
        }
        h[(m, m - 1)] = scale * g;
        for i in m + 1..=high {
            h[(i, m - 1)] = 0.0;
        }
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix (EISPACK `hqr`).
fn hqr(h: &mut DenseMatrix, budget: usize) -> Result<Vec<Complex64>, LinalgError> {
    let nn = h.n();
    let mut wr = vec![0.0; nn];
    let mut wi = vec![0.0; nn];

    let mut norm = 0.0;
    for i in 0..nn {
        for j in i.saturating_sub(1)..nn {
            norm += h[(i, j)].abs();
        }
    }

    let mut sweeps = 0usize;
    let mut exshift = 0.0;
    let mut iter = 0usize;
    let mut n = nn as isize - 1;
    let (mut p, mut q, mut r, mut s, mut z);
    let (mut w, mut x, mut y);

    while n >= 0 {
        let nu = n as usize;
        // Look for a single small subdiagonal element.
        let mut l = nu;
        while l > 0 {
            s = h[(l - 1, l - 1)].abs() + h[(l, l)].abs();
            if s == 0.0 {
                s = norm;
            }
            if h[(l, l - 1)] == 0.0 || h[(l, l - 1)].abs() < EPS * s {
                break;
            }
            l -= 1;
        }

        if l == nu {
            // One root.
            h[(nu, nu)] += exshift;
            wr[nu] = h[(nu, nu)];
            wi[nu] = 0.0;
            n -= 1;
            iter = 0;
        } else if l + 1 == nu {
            // Two roots from the trailing 2x2 block.
            w = h[(nu, nu - 1)] * h[(nu - 1, nu)];
            p = (h[(nu - 1, nu - 1)] - h[(nu, nu)]) / 2.0;
            q = p * p + w;
            z = q.abs().sqrt();
            h[(nu, nu)] += exshift;
            h[(nu - 1, nu - 1)] += exshift;
            x = h[(nu, nu)];
            if q >= 0.0 {
                z = if p >= 0.0 { p + z } else { p - z };
                wr[nu - 1] = x + z;
                wr[nu] = if z != 0.0 { x - w / z } else { x + z };
                wi[nu - 1] = 0.0;
                wi[nu] = 0.0;
            } else {
                wr[nu - 1] = x + p;
                wr[nu] = x + p;
                wi[nu - 1] = z;
                wi[nu] = -z;
            }
            n -= 2;
            iter = 0;
        } else {
            sweeps += 1;
            if sweeps > budget {
                return Err(LinalgError::NoConvergence { sweeps: budget });
            }
            x = h[(nu, nu)];
            y = h[(nu - 1, nu - 1)];
            w = h[(nu, nu - 1)] * h[(nu - 1, nu)];

            // Exceptional shifts after every ten stalled sweeps, alternating
            // between the Wilkinson and the MATLAB ad hoc shifts.
            if iter > 0 && iter.is_multiple_of(10) {
                if (iter / 10) % 2 == 1 {
                    exshift += x;
                    for i in 0..=nu {
                        h[(i, i)] -= x;
                    }
                    s = h[(nu, nu - 1)].abs() + h[(nu - 1, nu - 2)].abs();
                    x = 0.75 * s;
                    y = x;
                    w = -0.4375 * s * s;
                } else {
                    s = (y - x) / 2.0;
                    s = s * s + w;
                    if s > 0.0 {
                        s = s.sqrt();
                        if y < x {
                            s = -s;
                        }
                        s = x - w / ((y - x) / 2.0 + s);
                        for i in 0..=nu {
                            h[(i, i)] -= s;
                        }
                        exshift += s;
                        x = 0.964;
                        y = x;
                        w = x;
                    }
                }
            }
            iter += 1;

            // Look for two consecutive small subdiagonal elements.
            let mut m = nu - 2;
            loop {
                z = h[(m, m)];
                r = x - z;
                s = y - z;
                p = (r * s - w) / h[(m + 1, m)] + h[(m, m + 1)];
                q = h[(m + 1, m + 1)] - z - r - s;
                r = h[(m + 2, m + 1)];
                s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                if h[(m, m - 1)].abs() * (q.abs() + r.abs())
                    < EPS * (p.abs() * (h[(m - 1, m - 1)].abs() + z.abs() + h[(m + 1, m + 1)].abs()))
                {
                    break;
                }
                m -= 1;
            }

            for i in m + 2..=nu {
                h[(i, i - 2)] = 0.0;
                if i > m + 2 {
                    h[(i, i - 3)] = 0.0;
                }
            }

            // Double QR step on rows l..=n and columns m..=n.
            let mut k = m;
            while k < nu {
                let notlast = k != nu - 1;
                if k != m {
                    p = h[(k, k - 1)];
                    q = h[(k + 1, k - 1)];
                    r = if notlast { h[(k + 2, k - 1)] } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x == 0.0 {
                        k += 1;
                        continue;
                    }
                    p /= x;
                    q /= x;
                    r /= x;
                }
                s = (p * p + q * q + r * r).sqrt();
                if p < 0.0 {
                    s = -s;
                }
                if s != 0.0 {
                    if k != m {
                        h[(k, k - 1)] = -s * x;
                    } else if l != m {
                        h[(k, k - 1)] = -h[(k, k - 1)];
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    z = r / s;
                    q /= p;
                    r /= p;

                    for j in k..nn {
                        p = h[(k, j)] + q * h[(k + 1, j)];
                        if notlast {
                            p += r * h[(k + 2, j)];
                            h[(k + 2, j)] -= p * z;
                        }
                        h[(k, j)] -= p * x;
                        h[(k + 1, j)] -= p * y;
                    }
                    for i in 0..=nu.min(k + 3) {
                        p = x * h[(i, k)] + y * h[(i, k + 1)];
                        if notlast {
                            p += z * h[(i, k + 2)];
                            h[(i, k + 2)] -= p * r;
                        }
                        h[(i, k)] -= p;
                        h[(i, k + 1)] -= p * q;
                    }
                }
                k += 1;
            }
        }
    }

    Ok(wr.into_iter().zip(wi).map(|(re, im)| Complex64::new(re, im)).collect())
}
