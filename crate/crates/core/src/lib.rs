//! Berezin symbols and Berezin numbers of operators on finite-dimensional
//! reproducing kernel Hilbert space models.
//!
//! The crate is `no_std` and needs only `alloc`. It provides
//!
//! * [`matrix`]: dense complex matrices and the spectral primitives built on a
//!   cyclic Jacobi Hermitian eigensolver (`|X|`, operator norm, Cartesian parts);
//! * [`rkhs`]: truncated Hardy and Bergman disk models and orthonormal-kernel
//!   (diagonal) models, together with deterministic sampling grids;
//! * [`berezin`]: Berezin symbols, refined Berezin-number estimates, certified
//!   numerical-radius enclosures and boundary-defect diagnostics;
//! * [`toeplitz`]: truncated Toeplitz matrices of trigonometric-polynomial symbols;
//! * [`catalog`]: a catalog of Berezin-number inequalities that can be checked
//!   against concrete operands, plus a randomized tightness search;
//! * [`ensemble`]: seeded random operator ensembles.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

// Modules import `num_traits::Float` for float math. When std is in the
// dependency graph its inherent methods take precedence and the import goes unused.

pub mod berezin;
pub mod catalog;
pub mod ensemble;
mod error;
pub mod matrix;
mod optimize;
pub mod rkhs;
pub mod toeplitz;

pub use error::Error;
pub use num_complex::Complex64;

pub type Result<T> = core::result::Result<T, Error>;
