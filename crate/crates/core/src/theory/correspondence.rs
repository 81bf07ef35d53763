use num_complex::Complex64;
use serde_json::json;

use super::{TheoryError, Tolerances, VerificationReport};
use crate::laplacian::{complementary_laplacian, stochastic_companion, StandardizedLaplacian};
use crate::linalg::{cnorm, complex_shifted_rank, eigenvalues, eigenvector_for, residual, DenseMatrix};

/// Greedy minimal-distance matching of `a` into `b`: repeatedly pairs the
/// closest unused `(a_i, b_j)`. Returns, per element of `a`, the matched index
/// in `b` and the distance (`None` once `b` is exhausted).
pub fn greedy_match(a: &[Complex64], b: &[Complex64]) -> Vec<Option<(usize, f64)>> {
    let mut pairs: Vec<(f64, usize, usize)> = a
        .iter()
        .enumerate()
        .flat_map(|(i, x)| b.iter().enumerate().map(move |(j, y)| ((x - y).norm(), i, j)))
        .collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.cmp(&q.1)).then(p.2.cmp(&q.2)));
    let mut out = vec![None; a.len()];
    let mut used = vec![false; b.len()];
    for (d, i, j) in pairs {
        if out[i].is_none() && !used[j] {
            out[i] = Some((j, d));
            used[j] = true;
        }
    }
    out
}

fn max_match_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    greedy_match(a, b)
        .into_iter()
        .map(|m| m.map_or(f64::INFINITY, |(_, d)| d))
        .fold(0.0, f64::max)
}

fn away_from_0_and_1(eigs: &[Complex64], radius: f64) -> Vec<Complex64> {
    eigs.iter()
        .copied()
        .filter(|z| z.norm() > radius && (z - 1.0).norm() > radius)
        .collect()
}

fn rel_residual(m: &DenseMatrix, lambda: Complex64, x: &[Complex64]) -> f64 {
    residual(m, lambda, x) / cnorm(x)
}

/// `(I − J̄ s) v = v − s·mean(v)·1`.
fn minus_mean(v: &[Complex64], s: Complex64) -> Vec<Complex64> {
    let mean = v.iter().sum::<Complex64>() / v.len() as f64;
    v.iter().map(|z| z - s * mean).collect()
}

/// Checks that `L̃`, `P = L̃ + J̄` and `I − L̃c` share their spectrum away from
/// `0` and `1`, and that the eigenvector maps `x = (I − J̄/(1−λ))v` and
/// `v = (I − J̄/λ)x` carry eigenvectors between them.
///
/// Geometric multiplicities are compared by numerical rank, which is not a
/// reliable decision near defective clusters, so disagreements are warnings.
pub fn verify_spectrum_correspondence(
    l: &StandardizedLaplacian,
    tol: &Tolerances,
) -> Result<VerificationReport, TheoryError> {
    let mut rep = VerificationReport::new("spectrum-correspondence");
    let lt = l.matrix();
    let p = stochastic_companion(l)?;
    let lc = complementary_laplacian(l)?;
    let lc = lc.matrix();

    let s_l = eigenvalues(lt, tol.eig)?;
    let s_p = eigenvalues(&p, tol.eig)?;
    let s_c = eigenvalues(lc, tol.eig)?;
    let one_minus_c: Vec<Complex64> = s_c.eigenvalues.iter().map(|z| 1.0 - z).collect();

    let f_l = away_from_0_and_1(&s_l.eigenvalues, tol.cluster);
    let f_p = away_from_0_and_1(&s_p.eigenvalues, tol.cluster);
    let f_c = away_from_0_and_1(&one_minus_c, tol.cluster);

    let d_lp = max_match_distance(&f_l, &s_p.eigenvalues).max(max_match_distance(&f_p, &s_l.eigenvalues));
    let d_lc = max_match_distance(&f_l, &one_minus_c).max(max_match_distance(&f_c, &s_l.eigenvalues));
    rep.at_most("pairing-laplacian-stochastic", d_lp, tol.pairing);
    rep.at_most("pairing-laplacian-complementary", d_lc, tol.pairing);
    let worst = [&s_l, &s_p, &s_c]
        .iter()
        .map(|s| s.max_residual() / s.residual_bound)
        .fold(0.0, f64::max);
    rep.at_most("eigen-residual-ratio", worst, 1.0);

    let mut forward: f64 = 0.0;
    let mut forward_c: f64 = 0.0;
    let mut round_trip: f64 = 0.0;
    let mut geo_mismatch = Vec::new();
    let mut seen: Vec<Complex64> = Vec::new();
    for &lambda in &f_l {
        let v = match eigenvector_for(lt, lambda, tol.eig) {
            Ok(v) => v,
            Err(_) => {
                forward = f64::INFINITY;
                continue;
            }
        };
        let x = minus_mean(&v, 1.0 / (1.0 - lambda));
        forward = forward.max(rel_residual(&p, lambda, &x));
        forward_c = forward_c.max(rel_residual(lc, 1.0 - lambda, &x));
        // v' = (I − J̄/λ)x must be a multiple of v.
        let back = minus_mean(&x, 1.0 / lambda);
        let alpha = v.iter().zip(&back).map(|(a, b)| a.conj() * b).sum::<Complex64>();
        let diff: Vec<Complex64> = back.iter().zip(&v).map(|(b, a)| b - alpha * a).collect();
        round_trip = round_trip.max(cnorm(&diff) / cnorm(&back));

        if seen.iter().all(|s| (s - lambda).norm() > tol.cluster) {
            seen.push(lambda);
            let n = lt.n();
            let (r_l, m_l) = complex_shifted_rank(lt, lambda, tol.rank);
            let (r_p, _) = complex_shifted_rank(&p, lambda, tol.rank);
            let (r_c, _) = complex_shifted_rank(lc, 1.0 - lambda, tol.rank);
            if r_l != r_p || r_l != r_c {
                geo_mismatch.push(json!({
                    "re": lambda.re, "im": lambda.im,
                    "geometric": [n - r_l, n - r_p, n - r_c],
                    "margin": [m_l.0, m_l.1],
                }));
            }
        }
    }
    rep.at_most("eigenvector-to-stochastic", forward, tol.vector);
    rep.at_most("eigenvector-to-complementary", forward_c, tol.vector);
    rep.at_most("eigenvector-round-trip", round_trip, tol.vector);
    rep.witness(
        "shared-eigenvalues",
        json!(f_l.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>()),
    );
    if !geo_mismatch.is_empty() {
        rep.warn(format!(
            "numerical geometric multiplicities disagree at {} eigenvalue(s)",
            geo_mismatch.len()
        ));
        rep.witness("geometric-multiplicity-mismatch", json!(geo_mismatch));
    }
    Ok(rep)
}
