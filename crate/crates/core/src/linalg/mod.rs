//! Dense real linear algebra: spectra, rank, characteristic polynomials and
//! matrix power limits.

mod eigen;
mod exact;
mod matrix;
mod poly;
mod power;
mod qr;

use thiserror::Error;

pub use eigen::{
    cluster, eigenvalues, eigenvalues_with, eigenvector_for, eigvals, residual, sort_eigenvalues, spectral_radius,
    Cluster, EigenOptions, Spectrum, SpectrumEntry, DEFAULT_CLUSTER_TOL, DEFAULT_EIG_TOL,
};
pub use exact::{char_poly, char_poly_exact, det_exact, rat, rat_from_f64, ExactMatrix, Rational, DEFAULT_BIT_BUDGET};
pub use matrix::{cnorm, DenseMatrix};
pub use poly::Polynomial;
pub use power::{index_of, matrix_power_limit, PowerLimit};
pub use qr::{complex_shifted_rank, null_space, orthonormal_range, rank, rank_of_square, PivotedQr, DEFAULT_RANK_TOL};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("QR iteration did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("{re}{im:+}i is not an eigenvalue (inverse-iteration residual {residual:e})")]
    NotAnEigenvalue { re: f64, im: f64, residual: f64 },
    #[error("exact arithmetic needs {bits} bits, budget is {budget}")]
    Overflow { bits: u64, budget: u64 },
    #[error("matrix has non-finite entries")]
    NonFinite,
}
