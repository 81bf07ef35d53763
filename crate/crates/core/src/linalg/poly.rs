use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

/// Univariate polynomial, coefficients in ascending degree order.
///
/// Trailing zero coefficients are trimmed, so the zero polynomial has an
/// empty coefficient vector.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Clone + Zero> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    /// Multiplicity of `0` as a root (number of exactly-zero low coefficients).
    /// The zero polynomial reports `usize::MAX`.
    pub fn vanishing_order_at_zero(&self) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }
}

impl<T> Polynomial<T>
where
    T: Clone + Zero + One + Add<Output = T> + Mul<Output = T> + Sub<Output = T> + Neg<Output = T>,
{
    /// The monomial `c · x^k`.
    pub fn monomial(c: T, k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// `a + b x`
    pub fn linear(a: T, b: T) -> Self {
        Self::new(vec![a, b])
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    /// `p(a + b x)`, by Horner's scheme over polynomials.
    pub fn compose_linear(&self, a: T, b: T) -> Self {
        let inner = Self::linear(a, b);
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| &(&acc * &inner) + &Self::new(vec![c.clone()]))
    }

    /// Multiplicity of `x0` as a root, via the Taylor shift `p(x0 + x)`.
    pub fn vanishing_order_at(&self, x0: T) -> usize {
        self.compose_linear(x0, T::one()).vanishing_order_at_zero()
    }
}

impl<T> Add for &Polynomial<T>
where
    T: Clone + Zero + Add<Output = T>,
{
    type Output = Polynomial<T>;

    fn add(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<T> Sub for &Polynomial<T>
where
    T: Clone + Zero + Sub<Output = T>,
{
    type Output = Polynomial<T>;

    fn sub(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<T> Mul for &Polynomial<T>
where
    T: Clone + Zero + Add<Output = T> + Mul<Output = T>,
{
    type Output = Polynomial<T>;

    fn mul(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Polynomial::new(out)
    }
}

impl<T: fmt::Display + Zero> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})x")?,
                _ => write!(f, "({c})x^{k}")?,
            }
        }
        Ok(())
    }
}

impl<T: fmt::Debug> fmt::Debug for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Polynomial").field(&self.coeffs).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn p(c: &[i64]) -> Polynomial<BigRational> {
        Polynomial::new(c.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    #[test]
    fn trims_and_reports_degree() {
        let q = p(&[1, 2, 0, 0]);
        assert_eq!(q.degree(), Some(1));
        assert_eq!(p(&[0, 0]).degree(), None);
    }

    #[test]
    fn product_and_vanishing_orders() {
        // x (x - 1)^2 = x^3 - 2x^2 + x
        let x = p(&[0, 1]);
        let xm1 = p(&[-1, 1]);
        let f = &(&x * &xm1) * &xm1;
        assert_eq!(f, p(&[0, 1, -2, 1]));
        assert_eq!(f.vanishing_order_at_zero(), 1);
        assert_eq!(f.vanishing_order_at(BigRational::one()), 2);
    }

    #[test]
    fn compose_reflects_argument() {
        // f(x) = x^2 - x;  f(1 - x) = (1-x)^2 - (1-x) = x^2 - x
        let f = p(&[0, -1, 1]);
        let g = f.compose_linear(BigRational::one(), -BigRational::one());
        assert_eq!(g, f);
        let h = p(&[0, 0, 0, 1]).compose_linear(BigRational::one(), -BigRational::one());
        assert_eq!(h, p(&[1, -3, 3, -1]));
    }

    #[test]
    fn eval_float() {
        let f = Polynomial::new(vec![-1.0, 0.0, 1.0]);
        assert_eq!(f.eval(&3.0), 8.0);
    }
}
