//! Cyclic Jacobi eigensolver for complex Hermitian matrices and the spectral
//! functions built on it.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::ComplexMatrix;
use crate::{Error, Result};

/// Sweeps stop once the off-diagonal Frobenius mass falls below this fraction of `||M||_F`.
const OFF_DIAGONAL_TOL: f64 = 1e-13;
const MAX_SWEEPS: usize = 100;
/// Precondition for [`hermitian_eig`]: `||M - M^*||_F <= 1e-10 ||M||_F`.
const HERMITIAN_TOL: f64 = 1e-10;
/// `abs_op` clamps eigenvalues of `X^* X` down to `-1e-12 ||X^* X||`.
const CLAMP_TOL: f64 = 1e-12;

/// Eigendecomposition `M = U diag(eigenvalues) U^*` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Unitary; column `j` is the eigenvector for `eigenvalues[j]`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEig {
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_spectrum(|x| x)
    }

    /// `U diag(f(lambda)) U^*`.
    pub fn map_spectrum(&self, mut f: impl FnMut(f64) -> f64) -> ComplexMatrix {
        let u = &self.eigenvectors;
        let n = u.dim();
        let weights: Vec<f64> = self.eigenvalues.iter().map(|&x| f(x)).collect();
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n).map(|k| u[(i, k)] * u[(j, k)].conj() * weights[k]).sum()
        })
        .hermitian_part()
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Fails with [`Error::NotHermitian`] when `||M - M^*||_F > 1e-10 ||M||_F`.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianEig> {
    let defect = m.hermitian_defect();
    if defect > HERMITIAN_TOL * m.frobenius_norm() {
        return Err(Error::NotHermitian { defect });
    }
    let (eig, off) = jacobi(&m.hermitian_part());
    match off {
        Some(off_diagonal) => Err(Error::NoConvergence { off_diagonal }),
        None => Ok(eig),
    }
}

/// Largest eigenvalue of a matrix already known to be Hermitian (it is symmetrized first).
pub fn max_eigenvalue(h: &ComplexMatrix) -> f64 {
    jacobi(&h.hermitian_part()).0.max()
}

/// Largest singular value, `sqrt(lambda_max(X^* X))`.
pub fn op_norm(x: &ComplexMatrix) -> f64 {
    if x.dim() == 1 {
        return x[(0, 0)].norm();
    }
    max_eigenvalue(&x.gram()).max(0.0).sqrt()
}

/// `|X| = (X^* X)^{1/2}`.
pub fn abs_op(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (eig, _) = jacobi(&x.gram());
    let scale = eig.eigenvalues.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if let Some(&worst) = eig.eigenvalues.iter().find(|&&v| v < -CLAMP_TOL * scale) {
        return Err(Error::NegativeSpectrum(worst));
    }
    Ok(eig.map_spectrum(|v| v.max(0.0).sqrt()))
}

/// Runs Jacobi sweeps on an exactly Hermitian matrix. The second component is
/// `Some(off_mass)` when the sweep cap was reached before convergence.
fn jacobi(m: &ComplexMatrix) -> (HermitianEig, Option<f64>) {
    let n = m.dim();
    let mut a: Vec<Complex64> = m.as_slice().to_vec();
    let mut u = ComplexMatrix::identity(n);
    let threshold = OFF_DIAGONAL_TOL * m.frobenius_norm();
    let mut unconverged = None;

    for sweep in 0..=MAX_SWEEPS {
        let off = off_diagonal_mass(&a, n);
        if off <= threshold {
            break;
        }
        if sweep == MAX_SWEEPS {
            unconverged = Some(off);
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut u, n, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |i, j| u[(i, order[j])]);
    (HermitianEig { eigenvalues, eigenvectors }, unconverged)
}

fn off_diagonal_mass(a: &[Complex64], n: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[i * n + j].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Annihilates `a[p][q]` with the unitary `V = D R`, where `D` strips the phase
/// of `a[p][q]` and `R` is the real symmetric Jacobi rotation.
fn rotate(a: &mut [Complex64], u: &mut ComplexMatrix, n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let phase = apq / mag;
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta >= 0.0 {
        1.0 / (theta + (theta * theta + 1.0).sqrt())
    } else {
        -1.0 / (-theta + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let e_minus = phase.conj();

    // A <- A V
    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = akp * c - akq * e_minus * s;
        a[k * n + q] = akp * s + akq * e_minus * c;
    }
    // A <- V^* A
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = apk * c - aqk * phase * s;
        a[q * n + k] = apk * s + aqk * phase * c;
    }
    a[p * n + q] = Complex64::new(0.0, 0.0);
    a[q * n + p] = Complex64::new(0.0, 0.0);
    a[p * n + p] = Complex64::new(a[p * n + p].re, 0.0);
    a[q * n + q] = Complex64::new(a[q * n + q].re, 0.0);

    // U <- U V
    for k in 0..n {
        let ukp = u[(k, p)];
        let ukq = u[(k, q)];
        u[(k, p)] = ukp * c - ukq * e_minus * s;
        u[(k, q)] = ukp * s + ukq * e_minus * c;
    }
}
