use std::f64::consts::PI;

use num_complex::Complex64;
use serde_json::json;

use super::{TheoryError, Tolerances, VerificationReport};
use crate::laplacian::{l_k_matrix, StandardizedLaplacian};
use crate::linalg::{eigenvalues, eigenvector_for};

const TOL: f64 = 1e-9;

/// For the cycle Laplacian `(1/n)(I − Q)`: exactly one eigenvalue has argument
/// `π/2 − π/n`, its modulus is `(2/n) sin(π/n)`, its imaginary part is
/// `(1/n) sin(2π/n)`, and its eigenvector consists of `n`-th roots of unity
/// up to a common factor.
pub fn verify_hamiltonian_extremal(n: usize, tol: &Tolerances) -> Result<VerificationReport, TheoryError> {
    if n < 3 {
        return Err(TheoryError::BadOrder(n));
    }
    let nf = n as f64;
    let l = l_k_matrix(n, 1)?;
    let spec = eigenvalues(l.matrix(), tol.eig)?;
    let target_arg = PI / 2.0 - PI / nf;
    let hits: Vec<Complex64> = spec
        .eigenvalues
        .iter()
        .copied()
        .filter(|z| z.norm() > TOL && (z.arg() - target_arg).abs() <= TOL)
        .collect();

    let mut rep = VerificationReport::new("hamiltonian-extremal");
    rep.equal("eigenvalues-at-extremal-angle", hits.len(), 1);
    let Some(&lambda) = hits.first() else {
        return Ok(rep);
    };
    rep.at_most("modulus", (lambda.norm() - 2.0 / nf * (PI / nf).sin()).abs(), TOL);
    rep.at_most("imaginary-part", (lambda.im - (2.0 * PI / nf).sin() / nf).abs(), TOL);

    let v = eigenvector_for(l.matrix(), lambda, tol.eig)?;
    let v0 = v[0];
    let worst = v
        .iter()
        .map(|z| {
            let u = z / v0;
            (u.powu(n as u32) - 1.0).norm().max((u.norm() - 1.0).abs())
        })
        .fold(0.0, f64::max);
    rep.at_most("eigenvector-roots-of-unity", worst, TOL);
    rep.witness("eigenvalue", json!([lambda.re, lambda.im]));
    Ok(rep)
}

/// Instance check of the extremal angle `π/2 − π/n`. Every eigenvalue at that
/// angle satisfies `|λ| ≤ (2/n) sin(π/n)` and `Im λ ≤ (1/n) sin(2π/n)`. A
/// Hamiltonian cycle with equal weights has exactly one such eigenvalue; with
/// unequal weights the eigenvalue leaves the ray (weights 1, 1/2, 1 on three
/// vertices miss it by 0.037 rad), so only the count is recorded. For other
/// digraphs an eigenvalue at that angle is reported as a warning, since the
/// tolerance cannot separate it from a nearby one.
pub fn verify_extremal_angle(
    l: &StandardizedLaplacian,
    hamiltonian: bool,
    tol: &Tolerances,
) -> Result<VerificationReport, TheoryError> {
    let n = l.n();
    if n < 3 {
        return Err(TheoryError::BadOrder(n));
    }
    let nf = n as f64;
    let spec = eigenvalues(l.matrix(), tol.eig)?;
    let target_arg = PI / 2.0 - PI / nf;
    let hits: Vec<Complex64> = spec
        .eigenvalues
        .iter()
        .copied()
        .filter(|z| z.norm() > TOL && (z.arg() - target_arg).abs() <= TOL)
        .collect();
    let mut rep = VerificationReport::new("extremal-angle");
    let modulus = hits.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let im = hits.iter().map(|z| z.im).fold(0.0, f64::max);
    rep.at_most("modulus", modulus, 2.0 / nf * (PI / nf).sin() + TOL);
    rep.at_most("imaginary-part", im, (2.0 * PI / nf).sin() / nf + TOL);
    let m = l.matrix();
    let uniform = (1..n).all(|i| (m[(i, i)] - m[(0, 0)]).abs() <= TOL);
    if hamiltonian && uniform {
        rep.equal("eigenvalues-at-extremal-angle", hits.len(), 1);
    } else if hamiltonian {
        rep.witness("eigenvalues-at-extremal-angle", json!(hits.len()));
    } else if !hits.is_empty() {
        rep.warn(format!(
            "{} eigenvalue(s) at the extremal angle without a Hamiltonian cycle",
            hits.len()
        ));
    }
    Ok(rep)
}
