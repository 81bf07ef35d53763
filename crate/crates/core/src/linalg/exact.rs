//! Exact rational matrices and characteristic polynomials.

use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::matrix::DenseMatrix;
use super::poly::Polynomial;
use super::LinalgError;

/// Default cap on the bit length of any integer in exact computations.
pub const DEFAULT_BIT_BUDGET: u64 = 1 << 16;

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

/// Exact value of a finite double.
pub fn rat_from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExactMatrix {
    n: usize,
    data: Vec<Rational>,
}

impl ExactMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Rational::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { Rational::one() } else { Rational::zero() })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    /// Exact image of a float matrix; `None` if an entry is not finite.
    pub fn from_dense(m: &DenseMatrix) -> Option<Self> {
        let data = m
            .as_slice()
            .iter()
            .map(|&x| rat_from_f64(x))
            .collect::<Option<Vec<_>>>()?;
        Some(Self { n: m.n(), data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.n + j] = v;
    }

    pub fn to_dense(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.n, |i, j| self.get(i, j).to_f64().unwrap_or(f64::NAN))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn shift_diagonal(&self, s: &Rational) -> Self {
        let mut m = self.clone();
        for i in 0..self.n {
            let v = m.get(i, i) - s;
            m.set(i, i, v);
        }
        m
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        (0..self.n)
            .map(|i| (0..self.n).fold(Rational::zero(), |acc, j| acc + self.get(i, j) * &v[j]))
            .collect()
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * n + j] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Least common multiple of all entry denominators.
    pub fn common_denominator(&self) -> BigInt {
        self.data.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    }

    pub fn max_bits(&self) -> u64 {
        self.data
            .iter()
            .map(|x| x.numer().bits().max(x.denom().bits()))
            .max()
            .unwrap_or(0)
    }

    /// Exact rank by Gaussian elimination over the rationals.
    pub fn rank(&self) -> usize {
        self.row_echelon().1.len()
    }

    /// Basis of the right null space.
    pub fn null_space(&self) -> Vec<Vec<Rational>> {
        let n = self.n;
        let (rref, pivots) = self.row_echelon();
        let mut basis = Vec::new();
        for free in (0..n).filter(|c| !pivots.contains(c)) {
            let mut x = vec![Rational::zero(); n];
            x[free] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                x[pc] = -rref[row * n + free].clone();
            }
            basis.push(x);
        }
        basis
    }

    /// Reduced row echelon form and pivot columns.
    fn row_echelon(&self) -> (Vec<Rational>, Vec<usize>) {
        let n = self.n;
        let mut a = self.data.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..n {
            if row == n {
                break;
            }
            let Some(p) = (row..n).find(|&i| !a[i * n + col].is_zero()) else {
                continue;
            };
            if p != row {
                for j in 0..n {
                    a.swap(row * n + j, p * n + j);
                }
            }
            let inv = a[row * n + col].recip();
            for j in col..n {
                a[row * n + j] = &a[row * n + j] * &inv;
            }
            for i in 0..n {
                if i == row || a[i * n + col].is_zero() {
                    continue;
                }
                let f = a[i * n + col].clone();
                for j in col..n {
                    let t = &f * &a[row * n + j];
                    a[i * n + j] -= t;
                }
            }
            pivots.push(col);
            row += 1;
        }
        (a, pivots)
    }
}

impl Add for &ExactMatrix {
    type Output = ExactMatrix;

    fn add(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.n, rhs.n);
        ExactMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ExactMatrix {
    type Output = ExactMatrix;

    fn sub(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.n, rhs.n);
        ExactMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ExactMatrix {
    type Output = ExactMatrix;

    fn mul(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.matmul(rhs)
    }
}

/// `det(λI − M)` by Faddeev–LeVerrier in floating point.
pub fn char_poly(m: &DenseMatrix) -> Polynomial<f64> {
    let n = m.n();
    let mut coeffs = vec![0.0; n + 1];
    coeffs[n] = 1.0;
    let mut mk = DenseMatrix::zeros(n);
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I ;  c_{n-k} = -tr(A M_k) / k
        let mut next = m.matmul(&mk);
        for i in 0..n {
            next[(i, i)] += coeffs[n - k + 1];
        }
        mk = next;
        coeffs[n - k] = -m.matmul(&mk).trace() / k as f64;
    }
    Polynomial::new(coeffs)
}

/// `det(λI − M)` exactly.
///
/// Clears the common denominator `D` first, runs Faddeev–LeVerrier on the
/// integer matrix `A = D·M` (every division by `k` is exact there), then maps
/// the coefficients back through `f_M(λ) = D^{−n} f_A(Dλ)`.
pub fn char_poly_exact(m: &ExactMatrix, bit_budget: u64) -> Result<Polynomial<Rational>, LinalgError> {
    let n = m.n();
    let d = m.common_denominator();
    let a: Vec<BigInt> = m.data.iter().map(|x| x.numer() * (&d / x.denom())).collect();
    let check = |x: &BigInt| -> Result<(), LinalgError> {
        let bits = x.bits();
        if bits > bit_budget {
            Err(LinalgError::Overflow {
                bits,
                budget: bit_budget,
            })
        } else {
            Ok(())
        }
    };
    check(&d)?;

    let mut c = vec![BigInt::zero(); n + 1];
    c[n] = BigInt::one();
    let mut mk = vec![BigInt::zero(); n * n];
    for k in 1..=n {
        let mut next = int_matmul(&a, &mk, n);
        for i in 0..n {
            next[i * n + i] += &c[n - k + 1];
        }
        mk = next;
        let am = int_matmul(&a, &mk, n);
        let tr: BigInt = (0..n).map(|i| &am[i * n + i]).sum();
        let (q, r) = tr.div_rem(&BigInt::from(k));
        debug_assert!(r.is_zero(), "Faddeev-LeVerrier division must be exact over integers");
        c[n - k] = -q;
        check(&c[n - k])?;
        for x in &mk {
            check(x)?;
        }
    }

    // Coefficient of λ^j in f_M is c_j / D^{n-j}.
    let mut dpow = BigInt::one();
    let mut coeffs = vec![Rational::zero(); n + 1];
    for j in (0..=n).rev() {
        coeffs[j] = Rational::new(c[j].clone(), dpow.clone());
        dpow *= &d;
    }
    Ok(Polynomial::new(coeffs))
}

fn int_matmul(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n * n];
    for i in 0..n {
        for k in 0..n {
            let x = &a[i * n + k];
            if x.is_zero() {
                continue;
            }
            for j in 0..n {
                let y = &b[k * n + j];
                if !y.is_zero() {
                    out[i * n + j] += x * y;
                }
            }
        }
    }
    out
}

/// Determinant by exact elimination.
pub fn det_exact(m: &ExactMatrix) -> Rational {
    let n = m.n();
    let mut a = m.data.clone();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !a[i * n + col].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            for j in 0..n {
                a.swap(col * n + j, p * n + j);
            }
            det = -det;
        }
        let piv = a[col * n + col].clone();
        det *= &piv;
        for i in col + 1..n {
            if a[i * n + col].is_zero() {
                continue;
            }
            let f = &a[i * n + col] / &piv;
            for j in col..n {
                let t = &f * &a[col * n + j];
                a[i * n + j] -= t;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(c: &[i64]) -> Polynomial<Rational> {
        Polynomial::new(c.iter().map(|&x| rat(x, 1)).collect())
    }

    fn k_tilde(n: usize) -> ExactMatrix {
        ExactMatrix::from_fn(n, |i, j| {
            let one = if i == j { rat(1, 1) } else { rat(0, 1) };
            one - rat(1, n as i64)
        })
    }

    fn q(n: usize) -> ExactMatrix {
        ExactMatrix::from_fn(n, |i, j| if j == (i + 1) % n { rat(1, 1) } else { rat(0, 1) })
    }

    #[test]
    fn zero_matrix_char_poly() {
        let f = char_poly_exact(&ExactMatrix::zeros(2), DEFAULT_BIT_BUDGET).unwrap();
        assert_eq!(f, ints(&[0, 0, 1]));
    }

    #[test]
    fn circulant_char_poly() {
        for n in 2..=6 {
            let f = char_poly_exact(&q(n), DEFAULT_BIT_BUDGET).unwrap();
            let mut expected = vec![0; n + 1];
            expected[0] = -1;
            expected[n] = 1;
            assert_eq!(f, ints(&expected), "n={n}");
        }
    }

    #[test]
    fn k_tilde_char_poly_n3() {
        let f = char_poly_exact(&k_tilde(3), DEFAULT_BIT_BUDGET).unwrap();
        assert_eq!(f, ints(&[0, 1, -2, 1]));
    }

    #[test]
    fn float_mode_agrees_on_small_cases() {
        let f = char_poly(&k_tilde(3).to_dense());
        let expected = [0.0, 1.0, -2.0, 1.0];
        for (a, b) in f.coeffs().iter().zip(expected) {
            assert!((a - b).abs() < 1e-14);
        }
        assert_eq!(char_poly(&DenseMatrix::zeros(2)).coeffs(), &[0.0, 0.0, 1.0]);
    }

    #[test]
    fn constant_term_is_signed_determinant() {
        let m = ExactMatrix::from_fn(4, |i, j| rat(((i * 3 + j * 5) % 7) as i64 - 3, (1 + i + j) as i64));
        let f = char_poly_exact(&m, DEFAULT_BIT_BUDGET).unwrap();
        let sign = rat(1, 1); // (-1)^4
        assert_eq!(f.coeff(0), sign * det_exact(&m));
    }

    #[test]
    fn budget_overflow_is_reported() {
        let m = ExactMatrix::from_fn(4, |i, j| rat(1, (7 + 2 * i + 3 * j) as i64));
        assert!(matches!(char_poly_exact(&m, 8), Err(LinalgError::Overflow { .. })));
    }

    #[test]
    fn exact_rank_and_null_space() {
        let k = k_tilde(4);
        assert_eq!(k.rank(), 3);
        let ns = k.null_space();
        assert_eq!(ns.len(), 1);
        assert!(k.mul_vec(&ns[0]).iter().all(|x| x.is_zero()));
        assert_eq!(ExactMatrix::zeros(3).rank(), 0);
        assert_eq!(ExactMatrix::zeros(3).null_space().len(), 3);
    }
}
