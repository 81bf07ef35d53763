//! Executable checks of the spectral properties of standardized Laplacians.
//!
//! Every verifier returns a [`VerificationReport`] whose `pass` flag is the
//! conjunction of its checks. Numerical disagreements that do not decide a
//! check (for instance float clusters overruled by exact arithmetic) are kept
//! as warnings.

mod charpoly;
mod correspondence;
mod hamiltonian;
mod multiplicity;
mod semiconvergence;

use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use crate::laplacian::LaplacianError;
use crate::linalg::{LinalgError, DEFAULT_CLUSTER_TOL, DEFAULT_EIG_TOL, DEFAULT_RANK_TOL};

pub use charpoly::verify_charpoly_identities;
pub use correspondence::{greedy_match, verify_spectrum_correspondence};
pub use hamiltonian::{verify_extremal_angle, verify_hamiltonian_extremal};
pub use multiplicity::{verify_multiplicities, verify_multiplicities_of, Multiplicities};
pub use semiconvergence::verify_semiconvergence;

#[derive(Debug, Error)]
pub enum TheoryError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Laplacian(#[from] LaplacianError),
    #[error("this check needs an exact rational matrix")]
    ExactModeRequired,
    #[error("order {0} is outside the supported range")]
    BadOrder(usize),
}

/// Numerical thresholds shared by the verifiers.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Tolerances {
    /// Eigenvalue residual tolerance, relative to `max(1, ‖M‖_F)`.
    pub eig: f64,
    /// Radius for eigenvalue clustering and for excluding the points 0 and 1.
    pub cluster: f64,
    /// Relative rank threshold.
    pub rank: f64,
    /// Largest accepted distance between matched eigenvalues.
    pub pairing: f64,
    /// Relative residual for transformed eigenvectors.
    pub vector: f64,
    /// Step criterion for matrix power limits.
    pub power: f64,
    /// Accepted error in identities between power limits.
    pub limit: f64,
    /// Largest effective power tried when looking for a limit.
    pub max_power: u64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            eig: DEFAULT_EIG_TOL,
            cluster: DEFAULT_CLUSTER_TOL,
            rank: DEFAULT_RANK_TOL,
            pairing: 1e-7,
            vector: 1e-8,
            power: 1e-13,
            limit: 1e-8,
            max_power: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub label: String,
    pub data: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub theorem: String,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub witnesses: Vec<Witness>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl VerificationReport {
    pub fn new(theorem: impl Into<String>) -> Self {
        Self {
            theorem: theorem.into(),
            pass: true,
            checks: Vec::new(),
            witnesses: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn push(&mut self, name: impl Into<String>, value: f64, bound: f64, pass: bool) {
        self.pass &= pass;
        self.checks.push(Check {
            name: name.into(),
            value,
            bound,
            pass,
        });
    }

    /// Passes when `value ≤ bound` (a NaN value fails).
    pub fn at_most(&mut self, name: impl Into<String>, value: f64, bound: f64) {
        self.push(name, value, bound, value <= bound);
    }

    /// Integer equality; the expected value is stored as the bound.
    pub fn equal(&mut self, name: impl Into<String>, got: usize, want: usize) {
        self.push(name, got as f64, want as f64, got == want);
    }

    pub fn holds(&mut self, name: impl Into<String>, ok: bool) {
        self.push(name, if ok { 1.0 } else { 0.0 }, 1.0, ok);
    }

    pub fn witness(&mut self, label: impl Into<String>, data: Value) {
        self.witnesses.push(Witness {
            label: label.into(),
            data,
        });
    }

    pub fn warn(&mut self, msg: impl Into<String>) {
        self.warnings.push(msg.into());
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// Folds several reports into one, prefixing check names with their origin.
    pub fn aggregate(theorem: impl Into<String>, parts: &[VerificationReport]) -> Self {
        let mut out = Self::new(theorem);
        for p in parts {
            for c in &p.checks {
                out.push(format!("{}/{}", p.theorem, c.name), c.value, c.bound, c.pass);
            }
            for w in &p.witnesses {
                out.witness(format!("{}/{}", p.theorem, w.label), w.data.clone());
            }
            out.warnings
                .extend(p.warnings.iter().map(|m| format!("{}: {m}", p.theorem)));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_is_conjunction() {
        let mut r = VerificationReport::new("t");
        r.at_most("a", 0.5, 1.0);
        assert!(r.pass);
        r.at_most("nan", f64::NAN, 1.0);
        assert!(!r.pass);
        r.equal("eq", 3, 3);
        assert!(!r.pass);
        assert_eq!(r.failed().count(), 1);
        let agg = VerificationReport::aggregate("all", &[r.clone(), VerificationReport::new("empty")]);
        assert!(!agg.pass);
        assert_eq!(agg.checks.len(), 3);
        assert!(agg.check("t/a").is_some());
    }

    #[test]
    fn report_json_shape() {
        let mut r = VerificationReport::new("x");
        r.holds("ok", true);
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["theorem"], "x");
        assert_eq!(v["checks"][0]["name"], "ok");
        assert!(v.get("warnings").is_none());
    }
}
