//! Trigonometric-polynomial symbols and their Toeplitz truncations.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::matrix::ComplexMatrix;
use crate::optimize::angular_max;
use crate::{Error, Result};

/// `phi(e^{i theta}) = sum_k c_k e^{i k theta}` with finitely many nonzero `c_k`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SymbolSeries {
    coeffs: BTreeMap<i64, Complex64>,
}

impl SymbolSeries {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a series, dropping exact zeros. Non-finite coefficients are rejected.
    pub fn from_coeffs(coeffs: impl IntoIterator<Item = (i64, Complex64)>) -> Result<Self> {
        let mut out = Self::new();
        for (k, c) in coeffs {
            if !(c.re.is_finite() && c.im.is_finite()) {
                return Err(Error::NonFinite);
            }
            out.set(k, c);
        }
        Ok(out)
    }

    pub fn set(&mut self, k: i64, c: Complex64) {
        if c == Complex64::new(0.0, 0.0) {
            self.coeffs.remove(&k);
        } else {
            self.coeffs.insert(k, c);
        }
    }

    /// Coefficient `c_k`, zero outside the support.
    pub fn get(&self, k: i64) -> Complex64 {
        self.coeffs.get(&k).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs.iter().map(|(&k, &c)| (k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Smallest and largest index with a nonzero coefficient.
    pub fn support(&self) -> Option<(i64, i64)> {
        Some((*self.coeffs.keys().next()?, *self.coeffs.keys().next_back()?))
    }

    /// `conj(phi)`: coefficients `conj(c_{-k})`.
    pub fn conj_reflect(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|(&k, &c)| (-k, c.conj())).collect() }
    }

    pub fn eval_circle(&self, theta: f64) -> Complex64 {
        self.iter().map(|(k, c)| c * Complex64::from_polar(1.0, k as f64 * theta)).sum()
    }

    /// `sum_k |k| |c_k|`, a Lipschitz constant of `theta -> phi(e^{i theta})`.
    pub fn derivative_bound(&self) -> f64 {
        self.iter().map(|(k, c)| k.unsigned_abs() as f64 * c.norm()).sum()
    }
}

/// `T_N(phi)` with entries `c_{i-j}`.
pub fn toeplitz_matrix(symbol: &SymbolSeries, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, |i, j| symbol.get(i as i64 - j as i64))
}

/// Harmonic extension `sum_{k>=0} c_k z^k + sum_{k<0} c_k conj(z)^{|k|}` inside the disk.
pub fn harmonic_extension(symbol: &SymbolSeries, z: Complex64) -> Result<Complex64> {
    if z.norm() >= 1.0 || z.is_nan() {
        return Err(Error::OutsideDisk);
    }
    Ok(symbol
        .iter()
        .map(|(k, c)| if k >= 0 { c * z.powi(k as i32) } else { c * z.conj().powi((-k) as i32) })
        .sum())
}

/// Grid estimate of `||phi||_inf` with a certified enclosure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupNorm {
    /// Maximum of `|phi|` over the sample angles and a golden-section pass around the best one.
    pub value: f64,
    /// `value <= ||phi||_inf <= value + gap`.
    pub gap: f64,
}

impl SupNorm {
    pub fn upper(&self) -> f64 {
        self.value + self.gap
    }
}

/// Samples `|phi|` at `steps` equally spaced angles; `steps >= 16`.
pub fn symbol_sup_norm(symbol: &SymbolSeries, steps: u32) -> Result<SupNorm> {
    if steps < 16 {
        return Err(Error::InvalidArgument("sup norm needs at least 16 steps"));
    }
    let h = 2.0 * PI / steps as f64;
    let (_, value) = angular_max(|theta| symbol.eval_circle(theta).norm(), steps, 40);
    // every angle is within h/2 of a sample
    let gap = symbol.derivative_bound() * h / 2.0;
    Ok(SupNorm { value, gap })
}

/// Coefficient list in index order, for serialization.
pub fn coefficients(symbol: &SymbolSeries) -> Vec<(i64, Complex64)> {
    symbol.iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn series(items: &[(i64, f64)]) -> SymbolSeries {
        SymbolSeries::from_coeffs(items.iter().map(|&(k, v)| (k, c(v, 0.0)))).unwrap()
    }

    #[test]
    fn toeplitz_examples() {
        let shift = series(&[(1, 1.0)]);
        let t = toeplitz_matrix(&shift, 3);
        let expected = ComplexMatrix::from_real_rows(&[&[0.0, 0.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]).unwrap();
        assert_eq!(t, expected);
        assert_eq!(toeplitz_matrix(&series(&[(0, 2.0)]), 4), ComplexMatrix::scalar(4, c(2.0, 0.0)));
        assert_eq!(toeplitz_matrix(&SymbolSeries::new(), 3), ComplexMatrix::zeros(3));
        let t = toeplitz_matrix(&series(&[(1, 1.0), (-1, 1.0)]), 2);
        assert!((crate::matrix::op_norm(&t) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn adjoint_is_toeplitz_of_conjugate_symbol() {
        let s = SymbolSeries::from_coeffs([(2, c(1.0, 2.0)), (-1, c(0.5, -0.3)), (0, c(0.1, 0.0))]).unwrap();
        let t = toeplitz_matrix(&s, 6);
        assert_eq!(t.adjoint(), toeplitz_matrix(&s.conj_reflect(), 6));
    }

    #[test]
    fn harmonic_extension_examples() {
        let s = series(&[(1, 1.0), (-2, 0.5)]);
        let z = c(0.3, 0.4);
        let got = harmonic_extension(&s, z).unwrap();
        assert!((got - (z + z.conj() * z.conj() * 0.5)).norm() < 1e-15);
        assert_eq!(harmonic_extension(&s, c(1.0, 0.0)), Err(Error::OutsideDisk));
    }

    #[test]
    fn sup_norm_examples() {
        let s = series(&[(1, 1.0), (-2, 0.5)]);
        let sup = symbol_sup_norm(&s, 96).unwrap();
        assert!((sup.value - 1.5).abs() < 1e-12);
        assert!(sup.upper() >= 1.5);
        let sup = symbol_sup_norm(&series(&[(1, 1.0), (-1, 1.0)]), 16).unwrap();
        assert!((sup.value - 2.0).abs() < 1e-12);
        let sup = symbol_sup_norm(&series(&[(0, 3.0)]), 16).unwrap();
        assert_eq!(sup.value, 3.0);
        assert_eq!(sup.gap, 0.0);
        assert!(symbol_sup_norm(&s, 8).is_err());
    }

    #[test]
    fn non_finite_coefficients_are_rejected() {
        assert_eq!(SymbolSeries::from_coeffs([(0, c(f64::NAN, 0.0))]), Err(Error::NonFinite));
    }
}
