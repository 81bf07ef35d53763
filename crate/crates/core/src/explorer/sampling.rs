//! Seeded random instances.
//!
//! All randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`), a
//! counter-based generator whose output is fixed across platforms. Trial `t`
//! of a run with seed `s` uses the generator seeded with `s` on stream `t`, so
//! any trial can be replayed on its own.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::WeightedDigraph;
use crate::laplacian::{Provenance, StandardizedLaplacian};
use crate::linalg::DenseMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleMode {
    /// Every off-diagonal entry uniform on `[−1/n, 0]`.
    DenseUniform,
    /// Each off-diagonal entry nonzero with probability `density`, then uniform.
    SparseDigraph,
}

/// Generator for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Off-diagonal entries are zero with probability `1 − density`, otherwise
/// uniform on `[−1/n, 0]`; the diagonal makes each row sum to zero.
pub fn sample_standardized<R: Rng + ?Sized>(n: usize, rng: &mut R, density: f64) -> StandardizedLaplacian {
    let scale = 1.0 / n as f64;
    let mut m = DenseMatrix::zeros(n);
    for i in 0..n {
        let mut sum = 0.0;
        for j in (0..n).filter(|&j| j != i) {
            if density >= 1.0 || rng.gen::<f64>() < density {
                let x = -scale * rng.gen::<f64>();
                m[(i, j)] = x;
                sum += x;
            }
        }
        m[(i, i)] = -sum;
    }
    StandardizedLaplacian::new(m, Provenance::Sampled).expect("sampled entries satisfy the bounds")
}

pub fn sample_with_mode<R: Rng + ?Sized>(
    n: usize,
    rng: &mut R,
    mode: SampleMode,
    density: f64,
) -> StandardizedLaplacian {
    match mode {
        SampleMode::DenseUniform => sample_standardized(n, rng, 1.0),
        SampleMode::SparseDigraph => sample_standardized(n, rng, density),
    }
}

/// Half dense, half sparse with a density drawn uniformly from `[0.05, 1)`.
/// The mix is a heuristic for covering different arc patterns; no measure on
/// matrices is implied.
pub fn sample_mixed<R: Rng + ?Sized>(n: usize, rng: &mut R) -> StandardizedLaplacian {
    if rng.gen::<bool>() {
        sample_standardized(n, rng, 1.0)
    } else {
        let density = 0.05 + 0.95 * rng.gen::<f64>();
        sample_standardized(n, rng, density)
    }
}

/// Each ordered pair gets an arc with probability `density`, weight uniform on `(0, b]`.
pub fn sample_digraph<R: Rng + ?Sized>(n: usize, rng: &mut R, density: f64, b: f64) -> WeightedDigraph {
    let mut arcs = Vec::new();
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            if density >= 1.0 || rng.gen::<f64>() < density {
                arcs.push((i, j, b * (1.0 - rng.gen::<f64>())));
            }
        }
    }
    WeightedDigraph::new(n, arcs, b).expect("weights lie in (0, b]")
}

/// As [`sample_digraph`] with integer weights uniform on `1..=b`, which keeps
/// exact arithmetic on the standardized Laplacian cheap.
pub fn sample_integer_digraph<R: Rng + ?Sized>(n: usize, rng: &mut R, density: f64, b: u32) -> WeightedDigraph {
    let mut arcs = Vec::new();
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            if density >= 1.0 || rng.gen::<f64>() < density {
                arcs.push((i, j, f64::from(rng.gen_range(1..=b))));
            }
        }
    }
    WeightedDigraph::new(n, arcs, f64::from(b)).expect("weights lie in 1..=b")
}
