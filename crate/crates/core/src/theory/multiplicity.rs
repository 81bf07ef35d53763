use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::json;

use super::{TheoryError, Tolerances, VerificationReport};
use crate::graph::{complement, in_forest_dimension, WeightedDigraph};
use crate::laplacian::{
    complementary_laplacian, k_tilde, k_tilde_exact, standardize, standardize_exact, stochastic_companion,
    stochastic_companion_exact, StandardizedLaplacian,
};
use crate::linalg::{
    char_poly_exact, eigenvalues, null_space, rank, DenseMatrix, ExactMatrix, Rational, DEFAULT_BIT_BUDGET,
};

/// Multiplicities of the eigenvalues `0` and `1` of `L̃`, `P` and `L̃c`,
/// as `[at 0, at 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Multiplicities {
    pub laplacian: [usize; 2],
    pub stochastic: [usize; 2],
    pub complementary: [usize; 2],
}

const NAMES: [&str; 3] = ["laplacian", "stochastic", "complementary"];

/// `K̃v ≠ 0` is decided against this fraction of `‖v‖`.
const NONZERO_FRACTION: f64 = 1e-8;

/// Compares the multiplicities of `0` and `1` in the spectra of `L̃`, `P` and
/// `L̃c` with the in-forest dimensions `d` of `Γ` and `d_c` of its complement,
/// checks that these eigenvalues are semisimple, and that `K̃` maps the
/// eigenspaces `V_L̃(0) → V_P(0)` and `V_P(1) → V_L̃(1)`.
///
/// With `exact`, algebraic multiplicities are vanishing orders of the exact
/// characteristic polynomials and ranks are exact; float clusters are still
/// computed and any disagreement is reported as a warning.
pub fn verify_multiplicities(
    g: &WeightedDigraph,
    exact: bool,
    tol: &Tolerances,
) -> Result<VerificationReport, TheoryError> {
    let l = if exact { standardize_exact(g)? } else { standardize(g)? };
    verify_multiplicities_of(g, &l, tol)
}

/// As [`verify_multiplicities`], for a given `L̃` whose arc pattern is that of
/// `g`. Exact mode is used when `l` carries an exact copy.
pub fn verify_multiplicities_of(
    g: &WeightedDigraph,
    l: &StandardizedLaplacian,
    tol: &Tolerances,
) -> Result<VerificationReport, TheoryError> {
    let mut rep = VerificationReport::new("multiplicities");
    let n = g.n();
    let d = in_forest_dimension(g);
    let d_c = in_forest_dimension(&complement(g));
    let lc = complementary_laplacian(l)?;
    let floats = [l.matrix().clone(), stochastic_companion(l)?, lc.matrix().clone()];

    let mut float_alg = [[0usize; 2]; 3];
    for (slot, m) in float_alg.iter_mut().zip(&floats) {
        let s = eigenvalues(m, tol.eig)?;
        *slot = [
            s.multiplicity_at(Complex64::new(0.0, 0.0), tol.cluster),
            s.multiplicity_at(Complex64::new(1.0, 0.0), tol.cluster),
        ];
    }

    let (alg, geo) = if let Some(ex) = l.exact() {
        let exacts = [
            ex.clone(),
            stochastic_companion_exact(ex),
            lc.exact().expect("exact").clone(),
        ];
        let mut alg = [[0usize; 2]; 3];
        let mut geo = [[0usize; 2]; 3];
        for k in 0..3 {
            let f = char_poly_exact(&exacts[k], DEFAULT_BIT_BUDGET)?;
            alg[k] = [f.vanishing_order_at_zero(), f.vanishing_order_at(Rational::one())];
            geo[k] = [
                n - exacts[k].rank(),
                n - exacts[k].shift_diagonal(&Rational::one()).rank(),
            ];
            if alg[k] != float_alg[k] {
                rep.warn(format!(
                    "{}: float clusters give {:?}, exact polynomial gives {:?}",
                    NAMES[k], float_alg[k], alg[k]
                ));
            }
        }
        check_eigenspace_maps_exact(&mut rep, &exacts);
        (alg, geo)
    } else {
        let mut geo = [[0usize; 2]; 3];
        for k in 0..3 {
            geo[k] = [
                n - rank(&floats[k], tol.rank),
                n - rank(&floats[k].shift_diagonal(1.0), tol.rank),
            ];
        }
        check_eigenspace_maps_float(&mut rep, &floats, tol);
        (float_alg, geo)
    };

    let m = Multiplicities {
        laplacian: alg[0],
        stochastic: alg[1],
        complementary: alg[2],
    };
    rep.equal("laplacian-at-zero", m.laplacian[0], d);
    rep.equal("laplacian-at-one", m.laplacian[1], d_c - 1);
    rep.equal("stochastic-at-zero", m.stochastic[0], d - 1);
    rep.equal("stochastic-at-one", m.stochastic[1], d_c);
    rep.equal("complementary-at-one", m.complementary[1], d - 1);
    rep.equal("complementary-at-zero", m.complementary[0], d_c);
    for k in 0..3 {
        for (t, at) in ["zero", "one"].iter().enumerate() {
            rep.equal(format!("{}-semisimple-at-{at}", NAMES[k]), geo[k][t], alg[k][t]);
        }
    }
    rep.equal("in-forest-dimension-by-rank", geo[0][0], d);
    rep.witness("dimensions", json!({ "d": d, "d_c": d_c, "n": n }));
    rep.witness("multiplicities", serde_json::to_value(m).expect("plain struct"));
    Ok(rep)
}

fn check_eigenspace_maps_exact(rep: &mut VerificationReport, m: &[ExactMatrix; 3]) {
    let n = m[0].n();
    let k = k_tilde_exact(n);
    let (l, p, lc) = (&m[0], &m[1], &m[2]);
    let mut bad_forward = 0;
    for v in l.null_space() {
        let w = k.mul_vec(&v);
        if w.iter().all(Zero::is_zero) {
            continue;
        }
        let in_p0 = p.mul_vec(&w).iter().all(Zero::is_zero);
        let in_lc1 = lc.mul_vec(&w) == w;
        bad_forward += usize::from(!(in_p0 && in_lc1));
    }
    let mut bad_backward = 0;
    for x in lc.null_space() {
        let w = k.mul_vec(&x);
        if w.iter().all(Zero::is_zero) {
            continue;
        }
        bad_backward += usize::from(l.mul_vec(&w) != w);
    }
    rep.equal("kernel-map-to-stochastic-kernel", bad_forward, 0);
    rep.equal("fixed-space-map-to-laplacian-one", bad_backward, 0);
}

fn check_eigenspace_maps_float(rep: &mut VerificationReport, m: &[DenseMatrix; 3], tol: &Tolerances) {
    let n = m[0].n();
    let k = k_tilde(n);
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let dist = |a: &[f64], b: &[f64]| norm(&a.iter().zip(b).map(|(x, y)| x - y).collect::<Vec<_>>());
    let (l, p, lc) = (&m[0], &m[1], &m[2]);
    let mut forward: f64 = 0.0;
    for v in null_space(l, tol.rank) {
        let w = k.mul_vec(&v);
        let nw = norm(&w);
        if nw <= NONZERO_FRACTION * norm(&v) {
            continue;
        }
        forward = forward
            .max(norm(&p.mul_vec(&w)) / nw)
            .max(dist(&lc.mul_vec(&w), &w) / nw);
    }
    let mut backward: f64 = 0.0;
    for x in null_space(lc, tol.rank) {
        let w = k.mul_vec(&x);
        let nw = norm(&w);
        if nw <= NONZERO_FRACTION * norm(&x) {
            continue;
        }
        backward = backward.max(dist(&l.mul_vec(&w), &w) / nw);
    }
    rep.at_most("kernel-map-to-stochastic-kernel", forward, tol.vector);
    rep.at_most("fixed-space-map-to-laplacian-one", backward, tol.vector);
}
