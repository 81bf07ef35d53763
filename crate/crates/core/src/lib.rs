//! Standardized Laplacian matrices of weighted digraphs: construction, complex
//! spectra, checks of their spectral properties, and the geometry of where
//! their eigenvalues can lie.

pub mod explorer;
pub mod graph;
pub mod laplacian;
pub mod linalg;
pub mod region;
pub mod theory;
