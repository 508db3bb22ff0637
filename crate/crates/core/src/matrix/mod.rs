//! Dense square complex matrices.
//!
//! [`ComplexMatrix`] is the single operator representation used throughout the
//! crate. Storage is row-major. Inner products are linear in the first slot:
//! `<x, y> = sum_i x_i conj(y_i)`.

mod eig;

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

pub use eig::{abs_op, hermitian_eig, max_eigenvalue, op_norm, HermitianEig};

/// Absolute part of the library-wide matrix equality tolerance (Frobenius).
pub const EQ_ABS_TOL: f64 = 1e-12;
/// Relative part of the library-wide matrix equality tolerance (Frobenius).
pub const EQ_REL_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        Self { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::scalar(dim, ONE)
    }

    pub fn scalar(dim: usize, alpha: Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = alpha;
        }
        m
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &d) in entries.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.data[i * dim + j] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting non-square or non-finite data.
    pub fn from_row_major(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim {
            return Err(Error::BadShape { dim, len: data.len() });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows(rows: &[&[Complex64]]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::BadShape { dim, len: row.len() * dim });
            }
            data.extend_from_slice(row);
        }
        Self::from_row_major(dim, data)
    }

    /// Real-valued convenience constructor, mostly for tests and examples.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::BadShape { dim, len: row.len() * dim });
            }
            data.extend(row.iter().map(|&x| Complex64::new(x, 0.0)));
        }
        Self::from_row_major(dim, data)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        Self::from_fn(n, |i, j| self.data[j * n + i].conj())
    }

    pub fn scale(&self, alpha: Complex64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|&z| z * alpha).collect() }
    }

    pub fn scale_real(&self, alpha: f64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|&z| z * alpha).collect() }
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "matmul dimension mismatch");
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            let out_row = &mut out[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let b_row = &rhs.data[k * n..(k + 1) * n];
                for (o, &b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        Self { dim: n, data: out }
    }

    /// `X^* X`, symmetrized so the result is exactly Hermitian.
    pub fn gram(&self) -> Self {
        self.adjoint().matmul(self).hermitian_part()
    }

    /// `X X^*`, symmetrized so the result is exactly Hermitian.
    pub fn cogram(&self) -> Self {
        self.matmul(&self.adjoint()).hermitian_part()
    }

    /// `(M + M^*) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let n = self.dim;
        Self::from_fn(n, |i, j| (self.data[i * n + j] + self.data[j * n + i].conj()) * 0.5)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = Self::identity(self.dim);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.matmul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.matmul(&base);
            }
        }
        result
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.dim, "mul_vec dimension mismatch");
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(x).map(|(&a, &b)| a * b).sum())
            .collect()
    }

    /// `<M x, x>`.
    pub fn quadratic_form(&self, x: &[Complex64]) -> Complex64 {
        inner(&self.mul_vec(x), x)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `||M - M^*||_F`.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.dim;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self.data[i * n + j] - self.data[j * n + i].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// Self-adjoint within the library tolerance.
    pub fn is_hermitian(&self) -> bool {
        self.hermitian_defect() <= EQ_ABS_TOL + EQ_REL_TOL * self.frobenius_norm()
    }

    /// Tolerance-based equality: `||A - B||_F <= 1e-12 + 1e-10 * max(||A||_F, ||B||_F)`.
    pub fn approx_eq(&self, other: &Self) -> bool {
        if self.dim != other.dim {
            return false;
        }
        let diff = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let scale = self.frobenius_norm().max(other.frobenius_norm());
        diff <= EQ_ABS_TOL + EQ_REL_TOL * scale
    }

    pub fn diag(&self) -> Vec<Complex64> {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).collect()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        assert!(i < self.dim && j < self.dim);
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        assert!(i < self.dim && j < self.dim);
        &mut self.data[i * self.dim + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_list();
        for i in 0..self.dim {
            list.entry(&self.row(i));
        }
        list.finish()
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "add dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "sub dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.scale_real(-1.0)
    }
}

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        assert_eq!(self.dim, rhs.dim, "add dimension mismatch");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

/// Conjugate transpose; `adjoint(adjoint(m)) == m` exactly.
pub fn adjoint(m: &ComplexMatrix) -> ComplexMatrix {
    m.adjoint()
}

/// Cartesian decomposition `X = H + iK` with `H = (X + X^*)/2`, `K = (X - X^*)/2i`.
pub fn cartesian_parts(x: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let n = x.dim;
    let half_i = Complex64::new(0.0, -0.5);
    let h = ComplexMatrix::from_fn(n, |i, j| (x[(i, j)] + x[(j, i)].conj()) * 0.5);
    let k = ComplexMatrix::from_fn(n, |i, j| (x[(i, j)] - x[(j, i)].conj()) * half_i);
    (h, k)
}

/// `<x, y> = sum_i x_i conj(y_i)`.
pub fn inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}

pub fn vec_norm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn nilpotent() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap()
    }

    #[test]
    fn adjoint_examples() {
        assert_eq!(adjoint(&ComplexMatrix::identity(2)), ComplexMatrix::identity(2));
        let expected = ComplexMatrix::from_real_rows(&[&[0.0, 0.0], &[1.0, 0.0]]).unwrap();
        assert_eq!(adjoint(&nilpotent()), expected);
        let i = ComplexMatrix::from_rows(&[&[c(0.0, 1.0)]]).unwrap();
        assert_eq!(adjoint(&i)[(0, 0)], c(0.0, -1.0));
    }

    #[test]
    fn adjoint_is_an_involution() {
        let m = ComplexMatrix::from_fn(4, |i, j| c(i as f64 - 0.3 * j as f64, (i * j) as f64 + 0.7));
        assert_eq!(m.adjoint().adjoint(), m);
    }

    #[test]
    fn cartesian_parts_examples() {
        let herm = ComplexMatrix::from_rows(&[&[c(1.0, 0.0), c(2.0, -1.0)], &[c(2.0, 1.0), c(-3.0, 0.0)]])
            .unwrap();
        let (h, k) = cartesian_parts(&herm);
        assert!(h.approx_eq(&herm));
        assert!(k.approx_eq(&ComplexMatrix::zeros(2)));

        let (h, k) = cartesian_parts(&ComplexMatrix::scalar(3, c(0.0, 1.0)));
        assert!(h.approx_eq(&ComplexMatrix::zeros(3)));
        assert!(k.approx_eq(&ComplexMatrix::identity(3)));

        let (h, k) = cartesian_parts(&nilpotent());
        let h_expected = ComplexMatrix::from_real_rows(&[&[0.0, 0.5], &[0.5, 0.0]]).unwrap();
        let k_expected =
            ComplexMatrix::from_rows(&[&[c(0.0, 0.0), c(0.0, -0.5)], &[c(0.0, 0.5), c(0.0, 0.0)]]).unwrap();
        assert!(h.approx_eq(&h_expected));
        assert!(k.approx_eq(&k_expected));
    }

    #[test]
    fn cartesian_parts_reconstruct() {
        let x = ComplexMatrix::from_fn(5, |i, j| c((i + 2 * j) as f64 * 0.1, (i as f64 - j as f64) * 0.3));
        let (h, k) = cartesian_parts(&x);
        assert!(h.is_hermitian() && k.is_hermitian());
        let rebuilt = &h + &k.scale(c(0.0, 1.0));
        let err = (&rebuilt - &x).frobenius_norm();
        assert!(err <= 1e-12 * x.frobenius_norm());
    }

    #[test]
    fn from_row_major_rejects_bad_input() {
        assert_eq!(
            ComplexMatrix::from_row_major(2, vec![ZERO; 3]).unwrap_err(),
            Error::BadShape { dim: 2, len: 3 }
        );
        assert_eq!(
            ComplexMatrix::from_row_major(1, vec![c(f64::NAN, 0.0)]).unwrap_err(),
            Error::NonFinite
        );
    }

    #[test]
    fn pow_matches_repeated_product() {
        let m = ComplexMatrix::from_fn(3, |i, j| c(0.2 * i as f64 - 0.1, 0.05 * j as f64));
        let mut expected = ComplexMatrix::identity(3);
        for _ in 0..5 {
            expected = expected.matmul(&m);
        }
        assert!(m.pow(5).approx_eq(&expected));
        assert_eq!(m.pow(0), ComplexMatrix::identity(3));
    }

    #[test]
    fn approx_eq_uses_relative_tolerance() {
        let m = ComplexMatrix::scalar(2, c(1e6, 0.0));
        let bumped = &m + &ComplexMatrix::scalar(2, c(1e-6, 0.0));
        assert!(m.approx_eq(&bumped));
        let far = &m + &ComplexMatrix::scalar(2, c(1.0, 0.0));
        assert!(!m.approx_eq(&far));
    }
}
