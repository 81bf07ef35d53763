//! Laplacian matrices of weighted digraphs and the matrices derived from them.
//!
//! A standardized Laplacian of order `n` has zero row sums and off-diagonal
//! entries in `[−1/n, 0]`. Alongside the float matrix it may carry an exact
//! rational copy; every check on the exact copy is exact.

use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::graph::WeightedDigraph;
use crate::linalg::{rat, rat_from_f64, DenseMatrix, ExactMatrix, Rational};

/// Absolute tolerance for float validation of row sums and entry bounds.
pub const VALIDATION_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LaplacianError {
    #[error("invariant violated at ({row}, {col}): {what} (value {value})")]
    InvariantViolation {
        what: &'static str,
        row: usize,
        col: usize,
        value: f64,
    },
    #[error("coefficients must be nonnegative and sum to 1 (sum {sum})")]
    NotConvex { sum: f64 },
    #[error("index {index} outside {lo}..={hi}")]
    BadIndex { index: usize, lo: usize, hi: usize },
    #[error("order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("weight or bound {0} has no exact rational value")]
    NotRepresentable(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    FromDigraph,
    Sampled,
    LK,
    ConvexCombination,
    Complementary,
    Raw,
}

#[derive(Debug, Clone)]
pub struct StandardizedLaplacian {
    matrix: DenseMatrix,
    exact: Option<ExactMatrix>,
    provenance: Provenance,
}

impl StandardizedLaplacian {
    /// Validates a float matrix.
    pub fn new(matrix: DenseMatrix, provenance: Provenance) -> Result<Self, LaplacianError> {
        validate_float(&matrix)?;
        Ok(Self {
            matrix,
            exact: None,
            provenance,
        })
    }

    /// Validates an exact matrix exactly; the float copy is its rounding.
    pub fn from_exact(exact: ExactMatrix, provenance: Provenance) -> Result<Self, LaplacianError> {
        validate_exact(&exact)?;
        Ok(Self {
            matrix: exact.to_dense(),
            exact: Some(exact),
            provenance,
        })
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    pub fn exact(&self) -> Option<&ExactMatrix> {
        self.exact.as_ref()
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    /// Attaches an exact copy built from the stored off-diagonal entries, with
    /// the diagonal recomputed as their exact negated row sums.
    pub fn with_exact(mut self) -> Result<Self, LaplacianError> {
        if self.exact.is_none() {
            let n = self.n();
            let mut ex = ExactMatrix::zeros(n);
            for i in 0..n {
                let mut diag = Rational::zero();
                for j in (0..n).filter(|&j| j != i) {
                    let x = self.matrix[(i, j)];
                    let q = rat_from_f64(x).ok_or(LaplacianError::NotRepresentable(x))?;
                    diag -= &q;
                    ex.set(i, j, q);
                }
                ex.set(i, i, diag);
            }
            validate_exact(&ex)?;
            self.exact = Some(ex);
        }
        Ok(self)
    }

    /// The digraph in `G_1` whose standardized Laplacian this is:
    /// arc weight `−n·ℓ_ij` wherever `ℓ_ij < 0`.
    pub fn digraph(&self) -> WeightedDigraph {
        let n = self.n();
        let nf = n as f64;
        let arcs: Vec<_> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j && self.matrix[(i, j)] < 0.0)
            .map(|(i, j)| {
                let x = self.matrix[(i, j)];
                // Keep full-weight arcs exact so the complement drops them.
                (i, j, if x <= -1.0 / nf { 1.0 } else { (-nf * x).min(1.0) })
            })
            .collect();
        WeightedDigraph::new(n, arcs, 1.0).expect("validated entries give a digraph in G_1")
    }
}

fn validate_float(m: &DenseMatrix) -> Result<(), LaplacianError> {
    let n = m.n();
    let nf = n as f64;
    let viol = |what, row, col, value| Err(LaplacianError::InvariantViolation { what, row, col, value });
    for i in 0..n {
        let mut sum = 0.0;
        for j in 0..n {
            let x = m[(i, j)];
            if !x.is_finite() {
                return viol("entry is not finite", i, j, x);
            }
            sum += x;
            if i == j {
                if x < -VALIDATION_TOL || x > 1.0 - 1.0 / nf + VALIDATION_TOL {
                    return viol("diagonal outside [0, 1 - 1/n]", i, j, x);
                }
            } else if x > VALIDATION_TOL || x < -1.0 / nf - VALIDATION_TOL {
                return viol("off-diagonal outside [-1/n, 0]", i, j, x);
            }
        }
        if sum.abs() > VALIDATION_TOL {
            return viol("row sum is not zero", i, i, sum);
        }
    }
    Ok(())
}

fn validate_exact(m: &ExactMatrix) -> Result<(), LaplacianError> {
    use num_traits::ToPrimitive;
    let n = m.n();
    let lower = -rat(1, n as i64);
    let viol = |what, row, col, value: &Rational| {
        Err(LaplacianError::InvariantViolation {
            what,
            row,
            col,
            value: value.to_f64().unwrap_or(f64::NAN),
        })
    };
    for i in 0..n {
        let mut sum = Rational::zero();
        for j in 0..n {
            let x = m.get(i, j);
            sum += x;
            if i != j && (x.is_positive() || *x < lower) {
                return viol("off-diagonal outside [-1/n, 0]", i, j, x);
            }
        }
        if !sum.is_zero() {
            return viol("row sum is not zero", i, i, &sum);
        }
    }
    Ok(())
}

/// `L(Γ)`: minus the arc weights off the diagonal, zero row sums.
pub fn laplacian_of(g: &WeightedDigraph) -> DenseMatrix {
    let n = g.n();
    let mut l = DenseMatrix::zeros(n);
    for a in g.arcs() {
        l[(a.source, a.target)] = -a.weight;
    }
    for i in 0..n {
        l[(i, i)] = -(0..n).filter(|&k| k != i).map(|k| l[(i, k)]).sum::<f64>();
    }
    l
}

/// `(nb)^{-1} L(Γ)` in floating point.
pub fn standardize(g: &WeightedDigraph) -> Result<StandardizedLaplacian, LaplacianError> {
    let n = g.n();
    let nb = n as f64 * g.bound();
    let mut l = DenseMatrix::zeros(n);
    for a in g.arcs() {
        l[(a.source, a.target)] = -a.weight / nb;
    }
    for i in 0..n {
        l[(i, i)] = -(0..n).filter(|&k| k != i).map(|k| l[(i, k)]).sum::<f64>();
    }
    StandardizedLaplacian::new(l, Provenance::FromDigraph)
}

/// `(nb)^{-1} L(Γ)` with an exact rational copy built from the stored weights.
pub fn standardize_exact(g: &WeightedDigraph) -> Result<StandardizedLaplacian, LaplacianError> {
    let n = g.n();
    let b = rat_from_f64(g.bound()).ok_or(LaplacianError::NotRepresentable(g.bound()))?;
    let nb = b * rat(n as i64, 1);
    let mut ex = ExactMatrix::zeros(n);
    for a in g.arcs() {
        let w = rat_from_f64(a.weight).ok_or(LaplacianError::NotRepresentable(a.weight))?;
        ex.set(a.source, a.target, -(w / &nb));
    }
    for i in 0..n {
        let s = (0..n)
            .filter(|&k| k != i)
            .fold(Rational::zero(), |acc, k| acc - ex.get(i, k));
        ex.set(i, i, s);
    }
    StandardizedLaplacian::from_exact(ex, Provenance::FromDigraph)
}

/// The all-`1/n` matrix `J̄`.
pub fn j_bar(n: usize) -> DenseMatrix {
    DenseMatrix::from_fn(n, |_, _| 1.0 / n as f64)
}

pub fn j_bar_exact(n: usize) -> ExactMatrix {
    ExactMatrix::from_fn(n, |_, _| rat(1, n as i64))
}

/// `K̃ = I − J̄`, the standardized Laplacian of the complete digraph.
pub fn k_tilde(n: usize) -> DenseMatrix {
    DenseMatrix::from_fn(n, |i, j| if i == j { 1.0 } else { 0.0 } - 1.0 / n as f64)
}

pub fn k_tilde_exact(n: usize) -> ExactMatrix {
    &ExactMatrix::identity(n) - &j_bar_exact(n)
}

pub fn k_tilde_laplacian(n: usize) -> StandardizedLaplacian {
    StandardizedLaplacian::from_exact(k_tilde_exact(n), Provenance::Raw).expect("K̃ is a standardized Laplacian")
}

pub fn zero_laplacian(n: usize) -> StandardizedLaplacian {
    StandardizedLaplacian::from_exact(ExactMatrix::zeros(n), Provenance::Raw).expect("zero is a standardized Laplacian")
}

/// `P = L̃ + J̄`, checked to be row-stochastic.
pub fn stochastic_companion(l: &StandardizedLaplacian) -> Result<DenseMatrix, LaplacianError> {
    let n = l.n();
    let p = l.matrix() + &j_bar(n);
    for i in 0..n {
        let mut sum = 0.0;
        for j in 0..n {
            let x = p[(i, j)];
            if x < -VALIDATION_TOL {
                return Err(LaplacianError::InvariantViolation {
                    what: "stochastic matrix has a negative entry",
                    row: i,
                    col: j,
                    value: x,
                });
            }
            sum += x;
        }
        if (sum - 1.0).abs() > VALIDATION_TOL {
            return Err(LaplacianError::InvariantViolation {
                what: "stochastic row sum is not one",
                row: i,
                col: i,
                value: sum,
            });
        }
    }
    Ok(p)
}

pub fn stochastic_companion_exact(l: &ExactMatrix) -> ExactMatrix {
    l + &j_bar_exact(l.n())
}

/// `L̃c = K̃ − L̃`, the standardized Laplacian of the complementary digraph.
pub fn complementary_laplacian(l: &StandardizedLaplacian) -> Result<StandardizedLaplacian, LaplacianError> {
    let n = l.n();
    match l.exact() {
        Some(ex) => StandardizedLaplacian::from_exact(&k_tilde_exact(n) - ex, Provenance::Complementary),
        None => StandardizedLaplacian::new(&k_tilde(n) - l.matrix(), Provenance::Complementary),
    }
}

/// The standard circulant permutation matrix: `q_kj = 1` iff `j − k ∈ {1, 1 − n}`.
pub fn circulant_q(n: usize) -> DenseMatrix {
    DenseMatrix::from_fn(n, |k, j| if j == (k + 1) % n { 1.0 } else { 0.0 })
}

/// `L_k = (1/n)(kI − Q − Q² − … − Q^k)` for `1 ≤ k ≤ n − 1`; `k = 0` gives the zero matrix.
pub fn l_k_matrix(n: usize, k: usize) -> Result<StandardizedLaplacian, LaplacianError> {
    if n < 2 || k >= n {
        return Err(LaplacianError::BadIndex {
            index: k,
            lo: 0,
            hi: n.saturating_sub(1),
        });
    }
    // Q^s has its ones at column (row + s) mod n, and the patterns are disjoint.
    let ex = ExactMatrix::from_fn(n, |i, j| {
        if i == j {
            rat(k as i64, n as i64)
        } else if (j + n - i) % n <= k {
            rat(-1, n as i64)
        } else {
            Rational::zero()
        }
    });
    StandardizedLaplacian::from_exact(ex, Provenance::LK)
}

/// `Σ cᵢ Mᵢ` for convex weights `cᵢ`, revalidated.
pub fn convex_combination(
    coeffs: &[f64],
    matrices: &[&StandardizedLaplacian],
) -> Result<StandardizedLaplacian, LaplacianError> {
    assert_eq!(coeffs.len(), matrices.len(), "one coefficient per matrix");
    let sum: f64 = coeffs.iter().sum();
    if coeffs.iter().any(|&c| c.is_nan() || c < 0.0) || (sum - 1.0).abs() > VALIDATION_TOL || matrices.is_empty() {
        return Err(LaplacianError::NotConvex { sum });
    }
    let n = matrices[0].n();
    if let Some(m) = matrices.iter().find(|m| m.n() != n) {
        return Err(LaplacianError::OrderMismatch(n, m.n()));
    }
    if matrices.iter().all(|m| m.exact().is_some()) {
        let mut acc = ExactMatrix::zeros(n);
        for (&c, m) in coeffs.iter().zip(matrices) {
            let c = rat_from_f64(c).ok_or(LaplacianError::NotRepresentable(c))?;
            acc = &acc + &m.exact().expect("checked").scale(&c);
        }
        // Exact row sums stay zero; bounds hold because Σc ≤ 1 up to rounding of the floats.
        if let Ok(sl) = StandardizedLaplacian::from_exact(acc, Provenance::ConvexCombination) {
            return Ok(sl);
        }
    }
    let mut acc = DenseMatrix::zeros(n);
    for (&c, m) in coeffs.iter().zip(matrices) {
        acc = &acc + &m.matrix().scale(c);
    }
    StandardizedLaplacian::new(acc, Provenance::ConvexCombination)
}
