use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::{RegionError, DEFAULT_GEO_TOL};
use crate::laplacian::{convex_combination, l_k_matrix, zero_laplacian, StandardizedLaplacian};
use crate::linalg::eigenvector_for;

/// Upper vertex `λ_k = k/n − sin(kπ/n)/(n sin(π/n)) · e^{−i(k+1)π/n}` for
/// `0 ≤ k ≤ n − 1`, with `λ_0 = 0` and `λ_{n−1} = 1` exactly.
pub fn vertex(n: usize, k: usize) -> Complex64 {
    assert!(n >= 2 && k < n, "vertex index {k} out of range for order {n}");
    if k == 0 {
        return Complex64::new(0.0, 0.0);
    }
    if k == n - 1 {
        return Complex64::new(1.0, 0.0);
    }
    let nf = n as f64;
    let kf = k as f64;
    let s = (kf * PI / nf).sin() / (nf * (PI / nf).sin());
    let t = (kf + 1.0) * PI / nf;
    Complex64::new(kf / nf - s * t.cos(), s * t.sin())
}

/// `λ_k = (1/n)(k − μ − μ² − … − μ^k)` with `μ = e^{−2πi/n}`, summed directly.
pub fn vertex_partial_sum(n: usize, k: usize) -> Complex64 {
    let mu = Complex64::from_polar(1.0, -2.0 * PI / n as f64);
    let sum: Complex64 = (1..=k).map(|j| mu.powu(j as u32)).sum();
    (Complex64::new(k as f64, 0.0) - sum) / n as f64
}

/// The convex polygon with vertices `λ_0, …, λ_{n−1}, λ̄_{n−2}, …, λ̄_1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolygonS {
    pub n: usize,
    pub vertices: Vec<Complex64>,
}

pub fn polygon_s(n: usize) -> Result<PolygonS, RegionError> {
    if n < 2 {
        return Err(RegionError::BadOrder(n));
    }
    let upper: Vec<Complex64> = (0..n).map(|k| vertex(n, k)).collect();
    let lower = upper[1..n - 1].iter().rev().map(|z| z.conj());
    let vertices = upper.iter().copied().chain(lower).collect();
    Ok(PolygonS { n, vertices })
}

fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

impl PolygonS {
    /// Upper chain `λ_0, …, λ_{n−1}`.
    pub fn upper(&self) -> &[Complex64] {
        &self.vertices[..self.n]
    }

    pub fn centroid(&self) -> Complex64 {
        self.vertices.iter().sum::<Complex64>() / self.vertices.len() as f64
    }

    /// Every turn along the vertex cycle has the same (clockwise) sign.
    pub fn is_convex(&self) -> bool {
        let v = &self.vertices;
        let m = v.len();
        m < 3 || (0..m).all(|i| cross(v[(i + 1) % m] - v[i], v[(i + 2) % m] - v[(i + 1) % m]) < 0.0)
    }

    /// Half-plane test against every edge, each edge moved outward by `tol`.
    pub fn contains(&self, z: Complex64, tol: f64) -> bool {
        if self.n == 2 {
            return z.im.abs() <= tol && z.re >= -tol && z.re <= 1.0 + tol;
        }
        let v = &self.vertices;
        let m = v.len();
        (0..m).all(|i| {
            let (p, q) = (v[i], v[(i + 1) % m]);
            // Clockwise order: the interior lies to the right of each edge.
            cross(q - p, z - p) / (q - p).norm() <= tol
        })
    }
}

pub fn polygon_contains(s: &PolygonS, z: Complex64, geo_tol: f64) -> bool {
    s.contains(z, geo_tol)
}

/// A standardized Laplacian `a·0 + b·L_k + c·L_{k+1}` having a requested
/// point of `S` as an eigenvalue.
#[derive(Debug, Clone)]
pub struct WitnessMatrix {
    pub matrix: StandardizedLaplacian,
    /// `[a, b, c]`, nonnegative with unit sum.
    pub coefficients: [f64; 3],
    /// `k` of the segment `[λ_k, λ_{k+1}]` used; `None` for `s = 0`.
    pub segment: Option<usize>,
    /// Whether the lower half-plane point was handled through its conjugate.
    pub conjugated: bool,
    /// `‖Mv − sv‖₂` for the unit eigenvector found.
    pub residual: f64,
}

/// Residual bound for a witness eigenpair.
pub const WITNESS_RESIDUAL: f64 = 1e-8;

const SOLVE_SLACK: f64 = 1e-12;

/// Realizes a point `s` of `S` as an eigenvalue: the ray from `0` through `s`
/// meets an upper edge `[λ_k, λ_{k+1}]`, and `s = b λ_k + c λ_{k+1}` with
/// `b, c ≥ 0`, `b + c ≤ 1`. The matrix `b L_k + c L_{k+1}` shares the
/// eigenvector `(1, μ, …, μ^{n−1})` of all `L_k`, so `s` is its eigenvalue.
pub fn witness_matrix(n: usize, s: Complex64) -> Result<WitnessMatrix, RegionError> {
    let poly = polygon_s(n)?;
    if !poly.contains(s, DEFAULT_GEO_TOL) {
        return Err(RegionError::OutsidePolygon { re: s.re, im: s.im });
    }
    if s == Complex64::new(0.0, 0.0) {
        return Ok(WitnessMatrix {
            matrix: zero_laplacian(n),
            coefficients: [1.0, 0.0, 0.0],
            segment: None,
            conjugated: false,
            residual: 0.0,
        });
    }
    let conjugated = s.im < 0.0;
    let t = if conjugated { s.conj() } else { s };
    let upper = poly.upper();

    let (k, b, c) = if n == 2 || t.im == 0.0 {
        // On the real axis: s·L_{n−1} = s·K̃.
        (n - 2, 0.0, t.re)
    } else if cross(upper[1], t).abs() <= SOLVE_SLACK * t.norm() {
        // On the edge [0, λ_1]: the ray runs along it.
        (0, 0.0, t.norm() / upper[1].norm())
    } else {
        find_segment(upper, t).ok_or(RegionError::OutsidePolygon { re: s.re, im: s.im })?
    };
    let (b, c) = (b.clamp(0.0, 1.0), c.clamp(0.0, 1.0));
    let (b, c) = if b + c > 1.0 {
        (b / (b + c), 1.0 - b / (b + c))
    } else {
        (b, c)
    };
    let a = (1.0 - b - c).max(0.0);

    let zero = zero_laplacian(n);
    let lk = l_k_matrix(n, k)?;
    let lk1 = l_k_matrix(n, k + 1)?;
    let matrix = convex_combination(&[a, b, c], &[&zero, &lk, &lk1])?;
    let m = matrix.matrix();
    let tol = WITNESS_RESIDUAL / m.frobenius_norm().max(1.0);
    let v = eigenvector_for(m, s, tol).map_err(|e| match e {
        crate::linalg::LinalgError::NotAnEigenvalue { residual, .. } => RegionError::NotRealized {
            residual,
            bound: WITNESS_RESIDUAL,
        },
        _ => RegionError::NotRealized {
            residual: f64::NAN,
            bound: WITNESS_RESIDUAL,
        },
    })?;
    let residual = crate::linalg::residual(m, s, &v);
    Ok(WitnessMatrix {
        matrix,
        coefficients: [a, b, c],
        segment: Some(k),
        conjugated,
        residual,
    })
}

/// First `k ≥ 1` whose triangle `(0, λ_k, λ_{k+1})` contains `t`, by Cramer's rule.
fn find_segment(upper: &[Complex64], t: Complex64) -> Option<(usize, f64, f64)> {
    (1..upper.len() - 1).find_map(|k| {
        let (p, q) = (upper[k], upper[k + 1]);
        let det = cross(p, q);
        let b = cross(t, q) / det;
        let c = cross(p, t) / det;
        (b >= -SOLVE_SLACK && c >= -SOLVE_SLACK && b + c <= 1.0 + SOLVE_SLACK).then_some((k, b, c))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laplacian::k_tilde;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn closed_form_matches_partial_sums() {
        for n in 2..=60 {
            for k in 0..n {
                assert!((vertex(n, k) - vertex_partial_sum(n, k)).norm() < 1e-12, "n={n} k={k}");
            }
        }
        assert_eq!(vertex(9, 8), c(1.0, 0.0));
    }

    #[test]
    fn small_polygons() {
        let s3 = polygon_s(3).unwrap();
        let h = 1.0 / (2.0 * 3f64.sqrt());
        let want = [c(0.0, 0.0), c(0.5, h), c(1.0, 0.0), c(0.5, -h)];
        assert_eq!(s3.vertices.len(), 4);
        for (a, b) in s3.vertices.iter().zip(want) {
            assert!((a - b).norm() < 1e-12);
        }
        let s4 = polygon_s(4).unwrap();
        assert!((s4.vertices[1] - c(0.25, 0.25)).norm() < 1e-15);
        assert!((s4.vertices[2] - c(0.75, 0.25)).norm() < 1e-15);
        assert_eq!(polygon_s(2).unwrap().vertices, vec![c(0.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn convex_and_symmetric() {
        for n in 3..=80 {
            let s = polygon_s(n).unwrap();
            assert_eq!(s.vertices.len(), 2 * (n - 1));
            assert!(s.is_convex(), "n={n}");
            for k in 1..n - 1 {
                assert_eq!(s.vertices[2 * (n - 1) - k], s.vertices[k].conj());
            }
        }
    }

    #[test]
    fn containment_examples() {
        let s5 = polygon_s(5).unwrap();
        for &v in &s5.vertices {
            assert!(s5.contains(v, 0.0) || s5.contains(v, 1e-15));
        }
        assert!(s5.contains(s5.centroid(), 0.0));
        // The apex of S(1001) sits just below 1/π ≈ 0.31831.
        let s1001 = polygon_s(1001).unwrap();
        assert!(s1001.contains(c(0.5, std::f64::consts::FRAC_1_PI - 1e-4), 1e-9));
        assert!(!s1001.contains(c(0.5, 0.32), 1e-9));
        assert!(!s5.contains(c(0.5, 0.4), 1e-9));
        assert!(!s5.contains(c(-0.01, 0.0), 1e-9));
    }

    #[test]
    fn witness_examples() {
        let w0 = witness_matrix(5, c(0.0, 0.0)).unwrap();
        assert!(w0.matrix.exact().unwrap().is_zero());
        assert_eq!(w0.coefficients[0], 1.0);

        let w = witness_matrix(6, c(0.5, 0.0)).unwrap();
        assert!(w.matrix.matrix().max_abs_diff(&k_tilde(6).scale(0.5)) < 1e-15);

        let v2 = vertex(6, 2);
        let w2 = witness_matrix(6, v2).unwrap();
        assert!(w2.matrix.matrix().max_abs_diff(l_k_matrix(6, 2).unwrap().matrix()) < 1e-12);
        assert!(w2.residual <= WITNESS_RESIDUAL);

        let low = witness_matrix(7, c(0.4, -0.2)).unwrap();
        assert!(low.conjugated && low.residual <= WITNESS_RESIDUAL);
        assert!(matches!(
            witness_matrix(5, c(0.5, 0.4)),
            Err(RegionError::OutsidePolygon { .. })
        ));
        assert!(witness_matrix(2, c(0.3, 0.0)).unwrap().residual <= WITNESS_RESIDUAL);
        // Along the first edge.
        let e = vertex(8, 1) * 0.5;
        assert!(witness_matrix(8, e).unwrap().residual <= WITNESS_RESIDUAL);
    }
}
