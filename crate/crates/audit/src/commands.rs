//! The non-audit subcommands as library calls.

use std::str::FromStr;

use berezin::berezin::{berezin_profile, boundary_defect, BerezinProfile, DefectCurve, Trend};
use berezin::catalog::{evaluate_check, tightness_search, CheckResult, Operands, Outcome, SamplingPlan, TightnessResult};
use berezin::ensemble::{generate_ensemble, EnsembleKind};
use berezin::matrix::ComplexMatrix;
use berezin::rkhs::{hardy_model, make_grid, RkhsModel};
use berezin::toeplitz::{toeplitz_matrix, SymbolSeries};

use crate::error::{AuditError, Result};
use crate::formats::{parse_matrix, parse_symbol};

/// Where the operator of `profile` and `power` comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum OperatorSource {
    Matrix(ComplexMatrix),
    /// Truncated Toeplitz matrix of the symbol at the model dimension.
    Symbol(SymbolSeries),
    /// Draw number `index` of `generate_ensemble(kind, dim, index + 1, seed)`.
    Ensemble { kind: EnsembleKind, index: usize, seed: u64 },
}

/// `kind` or `kind:index`.
pub fn parse_ensemble_ref(text: &str, seed: u64) -> Result<OperatorSource> {
    let (name, index) = match text.rsplit_once(':') {
        Some((name, idx)) => {
            let index = idx.parse().map_err(|_| AuditError::Parse(format!("bad ensemble index in {text:?}")))?;
            (name, index)
        }
        None => (text, 0),
    };
    let kind = EnsembleKind::from_str(name).map_err(|e| AuditError::Parse(e.to_string()))?;
    Ok(OperatorSource::Ensemble { kind, index, seed })
}

impl OperatorSource {
    pub fn from_matrix_json(text: &str) -> Result<Self> {
        parse_matrix(text).map(OperatorSource::Matrix)
    }

    pub fn from_symbol_json(text: &str) -> Result<Self> {
        parse_symbol(text).map(OperatorSource::Symbol)
    }

    pub fn build(&self, dim: usize) -> Result<ComplexMatrix> {
        match self {
            OperatorSource::Matrix(m) => {
                if m.dim() != dim {
                    return Err(berezin::Error::DimMismatch { expected: dim, found: m.dim() }.into());
                }
                Ok(m.clone())
            }
            OperatorSource::Symbol(s) => Ok(toeplitz_matrix(s, dim)),
            OperatorSource::Ensemble { kind, index, seed } => {
                let mut draws = generate_ensemble(*kind, dim, index + 1, *seed)?;
                Ok(draws.swap_remove(*index))
            }
        }
    }
}

pub struct ProfileRun {
    pub matrix: ComplexMatrix,
    pub profile: BerezinProfile,
}

pub fn profile(model: &RkhsModel, source: &OperatorSource, radial: u32, angular: u32, refine: u32) -> Result<ProfileRun> {
    let matrix = source.build(model.dim())?;
    let grid = make_grid(model, radial, angular);
    let profile = berezin_profile(model, &matrix, &grid, refine)?;
    Ok(ProfileRun { matrix, profile })
}

/// One truncation size of a Toeplitz convergence study.
#[derive(Debug, Clone)]
pub struct ToeplitzRow {
    pub n: usize,
    pub check: CheckResult,
}

impl ToeplitzRow {
    pub fn diagnostic(&self, name: &str) -> f64 {
        self.check.diagnostics.iter().find(|(k, _)| k == name).map_or(f64::NAN, |(_, v)| *v)
    }

    pub fn ber(&self) -> f64 {
        self.diagnostic("ber")
    }
}

pub const TOEPLITZ_HEADER: [&str; 10] =
    ["n", "ber", "w_lower", "w_upper", "norm", "sup_norm", "sup_norm_gap", "ber_over_sup", "outcome", "refinement"];

impl ToeplitzRow {
    pub fn record(&self) -> Vec<String> {
        let mut row = vec![self.n.to_string()];
        for name in ["ber", "w_lower", "w_upper", "norm", "sup_norm", "sup_norm_gap", "ber_over_sup"] {
            row.push(self.diagnostic(name).to_string());
        }
        row.push(self.check.outcome.as_str().into());
        row.push(self.check.refinement.to_string());
        row
    }
}

/// C23 on `hardy(n)` for each `n`.
pub fn toeplitz_study(symbol: &SymbolSeries, sizes: &[usize], max_radius: f64, plan: &SamplingPlan) -> Result<Vec<ToeplitzRow>> {
    let ops = Operands { symbol: Some(symbol.clone()), source: Some("symbol".into()), ..Operands::default() };
    sizes
        .iter()
        .map(|&n| {
            let model = hardy_model(n, max_radius)?;
            let check = evaluate_check("C23", &model, &ops, plan)?;
            Ok(ToeplitzRow { n, check })
        })
        .collect()
}

/// True when the study's Berezin numbers never decrease with `n`.
pub fn ber_nondecreasing(rows: &[ToeplitzRow]) -> bool {
    rows.windows(2).all(|w| w[1].ber() >= w[0].ber())
}

pub struct PowerRun {
    pub matrix: ComplexMatrix,
    /// Absent for finite-point models.
    pub defect: Option<DefectCurve>,
    /// C22 then C24 for each power `1..=max_power`.
    pub checks: Vec<CheckResult>,
}

impl PowerRun {
    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| c.outcome == Outcome::Fail).count()
    }
}

pub fn trend_name(t: Trend) -> &'static str {
    match t {
        Trend::NonDecreasing => "nondecreasing",
        Trend::NonIncreasing => "nonincreasing",
        Trend::Mixed => "mixed",
    }
}

pub fn power(model: &RkhsModel, source: &OperatorSource, max_power: u32, plan: &SamplingPlan) -> Result<PowerRun> {
    if max_power == 0 {
        return Err(AuditError::Config("max power must be at least 1".into()));
    }
    let matrix = source.build(model.dim())?;
    let defect = match make_grid(model, plan.radial, plan.angular).lattice() {
        Some(lat) => {
            let radii: Vec<f64> = (0..lat.radial_count).map(|j| lat.ring_radius(j)).collect();
            Some(boundary_defect(model, &matrix, &radii, plan.defect_angles)?)
        }
        None => None,
    };
    let mut checks = Vec::new();
    for n in 1..=max_power {
        let ops = Operands { a: Some(matrix.clone()), power: Some(n), ..Operands::default() };
        for id in ["C22", "C24"] {
            checks.push(evaluate_check(id, model, &ops, plan)?);
        }
    }
    Ok(PowerRun { matrix, defect, checks })
}

pub fn tighten(
    id: &str,
    model: &RkhsModel,
    kinds: &[EnsembleKind],
    iterations: usize,
    seed: u64,
    plan: &SamplingPlan,
) -> Result<TightnessResult> {
    let mut found = tightness_search(id, model, kinds, iterations, seed, plan)?;
    found.best.seed = Some(seed);
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ensemble_refs() {
        assert_eq!(
            parse_ensemble_ref("hermitian:2", 7).unwrap(),
            OperatorSource::Ensemble { kind: EnsembleKind::Hermitian, index: 2, seed: 7 }
        );
        assert_eq!(
            parse_ensemble_ref("unitary-conjugated-jordan", 1).unwrap(),
            OperatorSource::Ensemble { kind: EnsembleKind::UnitaryConjugatedJordan, index: 0, seed: 1 }
        );
        assert!(parse_ensemble_ref("wishart", 0).is_err());
        assert!(parse_ensemble_ref("ginibre:x", 0).is_err());
    }

    #[test]
    fn ensemble_source_matches_generator() {
        let src = OperatorSource::Ensemble { kind: EnsembleKind::Ginibre, index: 2, seed: 9 };
        let expected = generate_ensemble(EnsembleKind::Ginibre, 3, 3, 9).unwrap().remove(2);
        assert_eq!(src.build(3).unwrap(), expected);
    }

    #[test]
    fn matrix_source_checks_dim() {
        let src = OperatorSource::from_matrix_json("[[1, 0], [0, 1]]").unwrap();
        assert!(src.build(2).is_ok());
        assert!(matches!(src.build(3), Err(AuditError::Core(_))));
    }
}
