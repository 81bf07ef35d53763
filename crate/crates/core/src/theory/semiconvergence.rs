use serde_json::json;

use super::{TheoryError, Tolerances, VerificationReport};
use crate::laplacian::{complementary_laplacian, j_bar, stochastic_companion, StandardizedLaplacian};
use crate::linalg::{eigenvalues, index_of, matrix_power_limit, rank, rank_of_square, PowerLimit};

/// Checks that `P = L̃ + J̄` and `L̃` are semiconvergent, and that their power
/// limits satisfy `lim L̃^k = (P − J̄) lim P^k`.
///
/// The spectral conditions are: `ρ(P) ≤ 1`, no eigenvalue of modulus one other
/// than `1`, and `rank (I − P)² = rank (I − P)`. The rank condition is decided
/// exactly when `L̃` carries an exact copy.
pub fn verify_semiconvergence(l: &StandardizedLaplacian, tol: &Tolerances) -> Result<VerificationReport, TheoryError> {
    let mut rep = VerificationReport::new("semiconvergence");
    let n = l.n();
    let lt = l.matrix();
    let p = stochastic_companion(l)?;
    let spec = eigenvalues(&p, tol.eig)?;

    let rho = spec.spectral_radius();
    rep.at_most("spectral-radius", rho, 1.0 + tol.eig);
    let peripheral_off_one = spec
        .eigenvalues
        .iter()
        .filter(|z| z.norm() >= 1.0 - tol.eig)
        .map(|z| (z - 1.0).norm())
        .fold(0.0, f64::max);
    rep.at_most("peripheral-eigenvalues-at-one", peripheral_off_one, tol.cluster);

    let lc = complementary_laplacian(l)?;
    let (r1, r2, r_l, r_l2) = match (lc.exact(), l.exact()) {
        (Some(c), Some(e)) => (c.rank(), c.matmul(c).rank(), e.rank(), e.matmul(e).rank()),
        _ => {
            let c = lc.matrix();
            (
                rank(c, tol.rank),
                rank_of_square(c, tol.rank),
                rank(lt, tol.rank),
                rank_of_square(lt, tol.rank),
            )
        }
    };
    rep.equal("rank-square-of-identity-minus-stochastic", r2, r1);
    // Rows sum to zero, so L̃ is singular and its index is exactly one.
    let index = if l.exact().is_some() {
        usize::from(r_l2 != r_l) + 1
    } else {
        index_of(lt, tol.rank)
    };
    rep.equal("laplacian-index", index, 1);

    let lim_p = matrix_power_limit(&p, tol.power, tol.max_power);
    let lim_l = matrix_power_limit(lt, tol.power, tol.max_power);
    record_limit(&mut rep, "stochastic-limit-step", &lim_p, tol);
    record_limit(&mut rep, "laplacian-limit-step", &lim_l, tol);
    if let (Some(a), Some(b)) = (lim_l.limit(), lim_p.limit()) {
        let rhs = (&p - &j_bar(n)).matmul(b);
        rep.at_most("limit-identity", a.max_abs_diff(&rhs), tol.limit);
        rep.witness("stochastic-limit-power", json!(power_of(&lim_p)));
        rep.witness("laplacian-limit-power", json!(power_of(&lim_l)));
    } else {
        rep.at_most("limit-identity", f64::INFINITY, tol.limit);
        rep.warn("a power sequence did not settle; this contradicts semiconvergence");
    }
    Ok(rep)
}

fn power_of(l: &PowerLimit) -> u64 {
    match l {
        PowerLimit::Converged { power, .. } | PowerLimit::Divergent { power, .. } => *power,
    }
}

fn record_limit(rep: &mut VerificationReport, name: &str, lim: &PowerLimit, tol: &Tolerances) {
    match lim {
        PowerLimit::Converged { step, .. } => rep.at_most(name, *step, tol.power),
        PowerLimit::Divergent { step, .. } => rep.push(name, *step, tol.power, false),
    }
}
