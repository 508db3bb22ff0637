use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;

use super::Role;
use crate::ensemble::{anticommuting_operator, complex_normal, draw, random_toeplitz_symbol, random_vector, EnsembleKind};
use crate::matrix::{vec_norm, ComplexMatrix};
use crate::toeplitz::SymbolSeries;
use crate::{Error, Result};

/// Largest power drawn for power-inequality entries.
pub const MAX_DRAWN_POWER: u32 = 4;

/// Operands of one check, by role.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Operands {
    pub a: Option<ComplexMatrix>,
    pub b: Option<ComplexMatrix>,
    pub x: Option<ComplexMatrix>,
    pub y: Option<ComplexMatrix>,
    pub alpha: Option<Complex64>,
    pub power: Option<u32>,
    pub vec_x: Option<Vec<Complex64>>,
    pub vec_y: Option<Vec<Complex64>>,
    pub symbol: Option<SymbolSeries>,
    /// Where the operands came from, e.g. the ensemble name.
    pub source: Option<String>,
}

fn need<'a, T>(slot: &'a Option<T>, role: &'static str) -> Result<&'a T> {
    slot.as_ref().ok_or(Error::MissingOperand(role))
}

impl Operands {
    pub fn a(&self) -> Result<&ComplexMatrix> {
        need(&self.a, "A")
    }
    pub fn b(&self) -> Result<&ComplexMatrix> {
        need(&self.b, "B")
    }
    pub fn x(&self) -> Result<&ComplexMatrix> {
        need(&self.x, "X")
    }
    pub fn y(&self) -> Result<&ComplexMatrix> {
        need(&self.y, "Y")
    }
    pub fn alpha(&self) -> Result<Complex64> {
        need(&self.alpha, "alpha").copied()
    }
    pub fn power(&self) -> Result<u32> {
        need(&self.power, "n").copied()
    }
    pub fn vec_x(&self) -> Result<&[Complex64]> {
        need(&self.vec_x, "x").map(|v| v.as_slice())
    }
    pub fn vec_y(&self) -> Result<&[Complex64]> {
        need(&self.vec_y, "y").map(|v| v.as_slice())
    }
    pub fn symbol(&self) -> Result<&SymbolSeries> {
        need(&self.symbol, "phi")
    }

    pub fn matrices(&self) -> impl Iterator<Item = (Role, &ComplexMatrix)> {
        [(Role::A, &self.a), (Role::B, &self.b), (Role::X, &self.x), (Role::Y, &self.y)]
            .into_iter()
            .filter_map(|(role, m)| m.as_ref().map(|m| (role, m)))
    }

    /// Checks every operand against the model dimension.
    pub fn check_dim(&self, dim: usize) -> Result<()> {
        let vectors = [&self.vec_x, &self.vec_y].into_iter().flatten().map(|v| v.len());
        for found in self.matrices().map(|(_, m)| m.dim()).chain(vectors) {
            if found != dim {
                return Err(Error::DimMismatch { expected: dim, found });
            }
        }
        Ok(())
    }

    /// One short descriptor per supplied operand.
    pub fn describe(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .matrices()
            .map(|(role, m)| format!("{}: {n}x{n} |.|_F={:.6}", role.as_str(), m.frobenius_norm(), n = m.dim()))
            .collect();
        if let Some(alpha) = self.alpha {
            out.push(format!("alpha: {}{:+}i", alpha.re, alpha.im));
        }
        if let Some(n) = self.power {
            out.push(format!("n: {n}"));
        }
        for (name, v) in [("x", &self.vec_x), ("y", &self.vec_y)] {
            if let Some(v) = v {
                out.push(format!("{name}: len {} |.|={:.6}", v.len(), vec_norm(v)));
            }
        }
        if let Some(s) = &self.symbol {
            match s.support() {
                Some((lo, hi)) => out.push(format!("phi: support [{lo}, {hi}]")),
                None => out.push("phi: 0".into()),
            }
        }
        if let Some(src) = &self.source {
            out.push(format!("source: {src}"));
        }
        out
    }
}

/// Random operands for `entry_id` in dimension `dim`.
///
/// Matrix roles come from `kind`; entries with structural hypotheses get
/// operands satisfying them (anticommuting Cartesian parts, Hermitian `X`).
pub fn draw_operands(entry_id: &str, dim: usize, kind: EnsembleKind, rng: &mut impl Rng) -> Result<Operands> {
    let entry = super::lookup(entry_id)?;
    let mut ops = Operands { source: Some(kind.as_str().into()), ..Operands::default() };
    for role in entry.roles {
        match role {
            Role::A => ops.a = Some(draw(kind, dim, rng)),
            Role::B => ops.b = Some(draw(kind, dim, rng)),
            Role::X => {
                ops.x = Some(match entry.id {
                    "C07" => anticommuting_operator(dim, rng),
                    "C08" | "C09" => draw(kind, dim, rng).hermitian_part(),
                    _ => draw(kind, dim, rng),
                })
            }
            Role::Y => ops.y = Some(draw(kind, dim, rng)),
            Role::Alpha => ops.alpha = Some(complex_normal(rng)),
            Role::Power => ops.power = Some(rng.random_range(1..=MAX_DRAWN_POWER)),
            Role::VecX => ops.vec_x = Some(random_vector(dim, rng)),
            Role::VecY => ops.vec_y = Some(random_vector(dim, rng)),
            Role::Symbol => ops.symbol = Some(random_toeplitz_symbol(rng)),
        }
    }
    Ok(ops)
}

/// Restores the structural hypotheses of `entry_id` after a perturbation.
pub(crate) fn enforce_structure(entry_id: &str, ops: &mut Operands) {
    if matches!(entry_id, "C08" | "C09") {
        if let Some(x) = &mut ops.x {
            *x = x.hermitian_part();
        }
    }
}
