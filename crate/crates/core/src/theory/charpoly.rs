use num_traits::{One, Zero};
use serde_json::json;

use super::{TheoryError, VerificationReport};
use crate::laplacian::{complementary_laplacian, stochastic_companion_exact, StandardizedLaplacian};
use crate::linalg::{char_poly_exact, Polynomial, Rational, DEFAULT_BIT_BUDGET};

fn mismatches(a: &Polynomial<Rational>, b: &Polynomial<Rational>) -> usize {
    let len = a.coeffs().len().max(b.coeffs().len());
    (0..len).filter(|&k| a.coeff(k) != b.coeff(k)).count()
}

/// Exact coefficient identities between the characteristic polynomials of
/// `L̃`, `P` and `L̃c`, in the cleared forms
/// `λ f_P(λ) = (λ − 1) f_L̃(λ)` and
/// `(1 − λ) f_L̃c(λ) = (−1)^{n−1} λ f_L̃(1 − λ)`.
pub fn verify_charpoly_identities(l: &StandardizedLaplacian) -> Result<VerificationReport, TheoryError> {
    let ex = l.exact().ok_or(TheoryError::ExactModeRequired)?;
    let n = ex.n();
    let one = Rational::one();
    let x = Polynomial::monomial(one.clone(), 1);

    let f_l = char_poly_exact(ex, DEFAULT_BIT_BUDGET)?;
    let f_p = char_poly_exact(&stochastic_companion_exact(ex), DEFAULT_BIT_BUDGET)?;
    let lc = complementary_laplacian(l)?;
    let f_c = char_poly_exact(
        lc.exact().expect("exact input gives exact complement"),
        DEFAULT_BIT_BUDGET,
    )?;

    let lhs1 = &x * &f_p;
    let rhs1 = &Polynomial::linear(-one.clone(), one.clone()) * &f_l;
    let lhs2 = &Polynomial::linear(one.clone(), -one.clone()) * &f_c;
    let sign = if (n - 1) % 2 == 0 { one.clone() } else { -one.clone() };
    let rhs2 = (&x * &f_l.compose_linear(one.clone(), -one)).scale(&sign);

    let mut rep = VerificationReport::new("charpoly-identities");
    rep.equal("stochastic-identity-mismatches", mismatches(&lhs1, &rhs1), 0);
    rep.equal("complementary-identity-mismatches", mismatches(&lhs2, &rhs2), 0);
    rep.holds(
        "monic-degree-n",
        [&f_l, &f_p, &f_c]
            .iter()
            .all(|f| f.degree() == Some(n) && f.coeff(n) == Rational::one()),
    );
    rep.holds("stochastic-has-root-one", f_p.eval(&Rational::one()).is_zero());
    rep.witness(
        "polynomials",
        json!({ "laplacian": f_l.to_string(), "stochastic": f_p.to_string(), "complementary": f_c.to_string() }),
    );
    Ok(rep)
}
