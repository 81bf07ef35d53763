//! Geometry of the eigenvalue set of standardized Laplacians: the outer region
//! `R`, the realizable polygon `S`, witness matrices for points of `S`, and the
//! cycloid that `∂S` approaches as `n` grows.

mod bounds;
mod cycloid;
mod polygon;

use num_complex::Complex64;
use thiserror::Error;

use crate::laplacian::LaplacianError;

pub use bounds::{prop1_region_contains, region_r, region_r_contains, RegionR};
pub use cycloid::{cycloid_gap, cycloid_point, distance_to_cycloid};
pub use polygon::{
    polygon_contains, polygon_s, vertex, vertex_partial_sum, witness_matrix, PolygonS, WitnessMatrix, WITNESS_RESIDUAL,
};

/// A point of the complex plane.
pub type ComplexPoint = Complex64;

/// Default outward tolerance of every containment test.
pub const DEFAULT_GEO_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RegionError {
    #[error("order {0} is below the minimum of 2")]
    BadOrder(usize),
    #[error("point {re} + {im}i lies outside the polygon")]
    OutsidePolygon { re: f64, im: f64 },
    #[error("witness residual {residual} exceeds {bound}")]
    NotRealized { residual: f64, bound: f64 },
    #[error(transparent)]
    Laplacian(#[from] LaplacianError),
}

/// Bounds on the largest imaginary part of an eigenvalue of order `n`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ZBounds {
    /// `(1/2n) cot(π/2n)`, an upper bound for every `n`.
    pub band: f64,
    /// Largest imaginary part among the vertices of `S`, a lower bound.
    pub vertex_max: f64,
    /// The supremum itself, known for odd `n` where both bounds meet.
    pub z_exact: Option<f64>,
}

pub fn band_height(n: usize) -> f64 {
    let nf = n as f64;
    1.0 / ((std::f64::consts::PI / (2.0 * nf)).tan() * 2.0 * nf)
}

pub fn z_bounds(n: usize) -> Result<ZBounds, RegionError> {
    if n < 2 {
        return Err(RegionError::BadOrder(n));
    }
    let band = band_height(n);
    let vertex_max = (0..n).map(|k| vertex(n, k).im).fold(0.0, f64::max);
    let z_exact = (n % 2 == 1).then_some(band);
    Ok(ZBounds {
        band,
        vertex_max,
        z_exact,
    })
}
