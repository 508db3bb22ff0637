//! Seeded random operator ensembles.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matrix::{vec_norm, ComplexMatrix};
use crate::toeplitz::{toeplitz_matrix, SymbolSeries};
use crate::{Error, Result};

/// Support `[-TOEPLITZ_DEGREE, TOEPLITZ_DEGREE]` of random Toeplitz symbols.
pub const TOEPLITZ_DEGREE: i64 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EnsembleKind {
    Ginibre,
    Hermitian,
    UnitaryConjugatedJordan,
    Diagonal,
    ToeplitzPoly,
}

impl EnsembleKind {
    pub const ALL: [EnsembleKind; 5] = [
        EnsembleKind::Ginibre,
        EnsembleKind::Hermitian,
        EnsembleKind::UnitaryConjugatedJordan,
        EnsembleKind::Diagonal,
        EnsembleKind::ToeplitzPoly,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EnsembleKind::Ginibre => "ginibre",
            EnsembleKind::Hermitian => "hermitian",
            EnsembleKind::UnitaryConjugatedJordan => "unitary-conjugated-jordan",
            EnsembleKind::Diagonal => "diagonal",
            EnsembleKind::ToeplitzPoly => "toeplitz-poly",
        }
    }

    /// Nearest matrix with this kind's structure, used to keep perturbations inside the ensemble.
    ///
    /// Jordan conjugates have no linear structure, so they are projected to nothing.
    pub fn project(self, m: &ComplexMatrix) -> ComplexMatrix {
        match self {
            EnsembleKind::Ginibre | EnsembleKind::UnitaryConjugatedJordan => m.clone(),
            EnsembleKind::Hermitian => m.hermitian_part(),
            EnsembleKind::Diagonal => ComplexMatrix::diagonal(&m.diag()),
            EnsembleKind::ToeplitzPoly => {
                let n = m.dim() as i64;
                let reach = TOEPLITZ_DEGREE.min(n - 1);
                let mut symbol = SymbolSeries::new();
                for d in -reach..=reach {
                    let cells = (0..n).filter(|&i| (0..n).contains(&(i - d)));
                    let count = n - d.abs();
                    let sum: Complex64 = cells.map(|i| m[(i as usize, (i - d) as usize)]).sum();
                    symbol.set(d, sum / count as f64);
                }
                toeplitz_matrix(&symbol, m.dim())
            }
        }
    }
}

impl fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EnsembleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EnsembleKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::UnknownKind(s.into()))
    }
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian, `E|z|^2 = 1`.
pub fn complex_normal(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * core::f64::consts::FRAC_1_SQRT_2
}

pub fn random_vector(dim: usize, rng: &mut impl Rng) -> Vec<Complex64> {
    (0..dim).map(|_| complex_normal(rng)).collect()
}

pub fn random_unit_vector(dim: usize, rng: &mut impl Rng) -> Vec<Complex64> {
    loop {
        let v = random_vector(dim, rng);
        let norm = vec_norm(&v);
        if norm > 1e-8 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Gaussian matrix with entry variance `1 / dim`, so the norm stays near 2.
pub fn ginibre(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let scale = 1.0 / (dim as f64).sqrt();
    ComplexMatrix::from_fn(dim, |_, _| complex_normal(rng) * scale)
}

/// Haar-like unitary from Gram-Schmidt on Gaussian columns.
pub fn random_unitary(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v = random_vector(dim, rng);
        for q in &cols {
            let proj: Complex64 = q.iter().zip(&v).map(|(qi, vi)| qi.conj() * vi).sum();
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= proj * qi;
            }
        }
        let norm = vec_norm(&v);
        if norm > 1e-6 {
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    ComplexMatrix::from_fn(dim, |i, j| cols[j][i])
}

/// `U J U^*` for the nilpotent Jordan block `J` (ones on the superdiagonal).
pub fn unitary_conjugated_jordan(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let jordan = ComplexMatrix::from_fn(dim, |i, j| {
        if j == i + 1 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let u = random_unitary(dim, rng);
    &(&u * &jordan) * &u.adjoint()
}

pub fn random_toeplitz_symbol(rng: &mut impl Rng) -> SymbolSeries {
    let scale = 1.0 / ((2 * TOEPLITZ_DEGREE + 1) as f64).sqrt();
    let mut s = SymbolSeries::new();
    for k in -TOEPLITZ_DEGREE..=TOEPLITZ_DEGREE {
        s.set(k, complex_normal(rng) * scale);
    }
    s
}

pub fn draw(kind: EnsembleKind, dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    match kind {
        EnsembleKind::Ginibre => ginibre(dim, rng),
        EnsembleKind::Hermitian => ginibre(dim, rng).hermitian_part(),
        EnsembleKind::UnitaryConjugatedJordan => unitary_conjugated_jordan(dim, rng),
        EnsembleKind::Diagonal => {
            let entries: Vec<Complex64> = (0..dim).map(|_| complex_normal(rng)).collect();
            ComplexMatrix::diagonal(&entries)
        }
        EnsembleKind::ToeplitzPoly => toeplitz_matrix(&random_toeplitz_symbol(rng), dim),
    }
}

/// `count` independent draws; the same seed gives the same matrices.
pub fn generate_ensemble(kind: EnsembleKind, dim: usize, count: usize, seed: u64) -> Result<Vec<ComplexMatrix>> {
    if dim == 0 {
        return Err(Error::InvalidArgument("ensemble dimension must be at least 1"));
    }
    let mut rng = rng_from_seed(seed);
    Ok((0..count).map(|_| draw(kind, dim, &mut rng)).collect())
}

/// `X = H + iK` with Hermitian `H`, `K` satisfying `HK + KH = 0`.
///
/// In a random orthonormal basis `H = diag(P, -P)` and `K` has off-diagonal
/// blocks `Q`, `Q^*` with `Q = c1 + c2 P`; odd dimensions get one zero row and column.
pub fn anticommuting_operator(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let half = dim / 2;
    let p = ginibre(half.max(1), rng).hermitian_part();
    let c1: f64 = rng.sample(StandardNormal);
    let c2: f64 = rng.sample(StandardNormal);
    let mut core = ComplexMatrix::zeros(dim);
    let i = Complex64::new(0.0, 1.0);
    for r in 0..half {
        for c in 0..half {
            let pv = p[(r, c)];
            let qv = pv * c2 + if r == c { Complex64::new(c1, 0.0) } else { Complex64::new(0.0, 0.0) };
            core[(r, c)] = pv;
            core[(half + r, half + c)] = -pv;
            // K[r, half + c] = Q[r, c], K[half + r, c] = Q^*[r, c]
            core[(r, half + c)] = i * qv;
            core[(half + r, c)] = i * qv;
        }
    }
    let u = random_unitary(dim, rng);
    &(&u * &core) * &u.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::cartesian_parts;

    #[test]
    fn kinds_round_trip() {
        for kind in EnsembleKind::ALL {
            assert_eq!(kind.as_str().parse::<EnsembleKind>().unwrap(), kind);
        }
        assert_eq!("wishart".parse::<EnsembleKind>(), Err(Error::UnknownKind("wishart".into())));
    }

    #[test]
    fn same_seed_same_matrices() {
        for kind in EnsembleKind::ALL {
            let a = generate_ensemble(kind, 5, 3, 99).unwrap();
            assert_eq!(a, generate_ensemble(kind, 5, 3, 99).unwrap());
            assert_ne!(a, generate_ensemble(kind, 5, 3, 100).unwrap());
            assert_eq!(a.len(), 3);
        }
    }

    #[test]
    fn draws_have_their_structure() {
        let mut rng = rng_from_seed(5);
        for dim in [1, 2, 5, 9] {
            for kind in EnsembleKind::ALL {
                let m = draw(kind, dim, &mut rng);
                assert_eq!(m.dim(), dim);
                assert!(m.is_finite());
                assert!(kind.project(&m).approx_eq(&m), "{kind} dim {dim}");
            }
        }
        let h = draw(EnsembleKind::Hermitian, 6, &mut rng);
        assert!(h.is_hermitian());
    }

    #[test]
    fn unitary_is_unitary() {
        let mut rng = rng_from_seed(1);
        for dim in [1, 3, 8] {
            let u = random_unitary(dim, &mut rng);
            assert!(u.gram().approx_eq(&ComplexMatrix::identity(dim)));
        }
    }

    #[test]
    fn anticommuting_parts_anticommute() {
        let mut rng = rng_from_seed(11);
        for dim in [2, 3, 6, 7] {
            let x = anticommuting_operator(dim, &mut rng);
            let (h, k) = cartesian_parts(&x);
            let anti = &(&h * &k) + &(&k * &h);
            assert!(anti.frobenius_norm() <= 1e-12 * (1.0 + h.frobenius_norm() * k.frobenius_norm()));
            assert!(k.frobenius_norm() > 1e-6);
        }
    }

    #[test]
    fn zero_dimension_is_rejected() {
        assert!(generate_ensemble(EnsembleKind::Ginibre, 0, 1, 0).is_err());
    }
}
