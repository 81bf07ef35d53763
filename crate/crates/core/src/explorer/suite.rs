use super::formats::Input;
use crate::graph::is_hamiltonian_cycle;
use crate::laplacian::{standardize, standardize_exact, Provenance, StandardizedLaplacian};
use crate::theory::{
    verify_charpoly_identities, verify_extremal_angle, verify_hamiltonian_extremal, verify_multiplicities_of,
    verify_semiconvergence, verify_spectrum_correspondence, TheoryError, Tolerances, VerificationReport,
};

/// Runs every verifier that applies to the input and folds the results.
///
/// A digraph is standardized directly; a matrix must already be a
/// standardized Laplacian, and its digraph is read off the negative entries.
/// With `exact`, rational copies are used for the characteristic polynomial
/// identities, ranks and multiplicities.
pub fn run_verify_suite(input: &Input, exact: bool, tol: &Tolerances) -> Result<VerificationReport, TheoryError> {
    let (g, l) = match input {
        Input::Digraph(g) => {
            let l = if exact { standardize_exact(g)? } else { standardize(g)? };
            (g.clone(), l)
        }
        Input::Matrix(m) => {
            let l = StandardizedLaplacian::new(m.clone(), Provenance::Raw)?;
            let l = if exact { l.with_exact()? } else { l };
            (l.digraph(), l)
        }
    };
    let mut parts = vec![
        verify_spectrum_correspondence(&l, tol)?,
        verify_semiconvergence(&l, tol)?,
        verify_multiplicities_of(&g, &l, tol)?,
    ];
    if exact {
        parts.push(verify_charpoly_identities(&l)?);
    }
    if g.n() >= 3 {
        let ham = is_hamiltonian_cycle(&g);
        parts.push(verify_extremal_angle(&l, ham, tol)?);
        if ham {
            parts.push(verify_hamiltonian_extremal(g.n(), tol)?);
        }
    }
    Ok(VerificationReport::aggregate("suite", &parts))
}
