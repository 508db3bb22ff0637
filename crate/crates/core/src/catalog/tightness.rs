#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use super::operands::enforce_structure;
use super::{draw_operands, evaluate_check, lookup, CheckResult, Operands, Outcome, SamplingPlan};
use crate::ensemble::{complex_normal, rng_from_seed, EnsembleKind};
use crate::matrix::ComplexMatrix;
use crate::rkhs::RkhsModel;
use crate::{Error, Result};

/// Local steps between random restarts.
pub const RESTART_EVERY: usize = 16;
const INITIAL_STEP: f64 = 0.3;
const STEP_DECAY: f64 = 0.85;

/// Best ratio found and the operands achieving it.
#[derive(Debug, Clone)]
pub struct TightnessResult {
    pub best: CheckResult,
    pub witness: Operands,
    pub kind: EnsembleKind,
    pub evaluations: usize,
}

fn perturb_matrix(m: &ComplexMatrix, kind: EnsembleKind, step: f64, rng: &mut impl Rng) -> ComplexMatrix {
    let n = m.dim();
    let scale = step * (m.frobenius_norm() / n as f64).max(1e-3);
    let noise = ComplexMatrix::from_fn(n, |_, _| complex_normal(rng) * scale);
    kind.project(&(m + &noise))
}

fn perturb(entry_id: &str, ops: &Operands, kind: EnsembleKind, step: f64, rng: &mut impl Rng) -> Operands {
    let mut out = ops.clone();
    for m in [&mut out.a, &mut out.b, &mut out.y].into_iter().flatten() {
        *m = perturb_matrix(m, kind, step, rng);
    }
    // the anticommuting construction has no cheap projection, so X stays put there
    if entry_id != "C07" {
        if let Some(x) = &mut out.x {
            *x = perturb_matrix(x, kind, step, rng);
        }
    }
    if let Some(alpha) = &mut out.alpha {
        *alpha += complex_normal(rng) * (step * alpha.norm().max(1e-3));
    }
    for v in [&mut out.vec_x, &mut out.vec_y].into_iter().flatten() {
        let scale = step * (crate::matrix::vec_norm(v) / (v.len() as f64).sqrt()).max(1e-3);
        for z in v.iter_mut() {
            *z += complex_normal(rng) * scale;
        }
    }
    if let Some(symbol) = &mut out.symbol {
        let coeffs: alloc::vec::Vec<_> = symbol.iter().collect();
        for (k, c) in coeffs {
            symbol.set(k, c + complex_normal(rng) * (step * c.norm().max(1e-3)));
        }
    }
    enforce_structure(entry_id, &mut out);
    out
}

/// Random restarts plus Gaussian local search maximizing `lhs / rhs`.
///
/// Restarts cycle through `kinds`; local steps perturb the current point,
/// project back onto the ensemble's structure and keep improvements. A `Fail`
/// is returned as soon as it is seen.
pub fn tightness_search(
    id: &str,
    model: &RkhsModel,
    kinds: &[EnsembleKind],
    iterations: usize,
    seed: u64,
    plan: &SamplingPlan,
) -> Result<TightnessResult> {
    lookup(id)?;
    if iterations == 0 {
        return Err(Error::InvalidArgument("tightness search needs at least one iteration"));
    }
    if kinds.is_empty() {
        return Err(Error::InvalidArgument("tightness search needs at least one ensemble kind"));
    }
    let mut rng = rng_from_seed(seed);
    let mut best: Option<TightnessResult> = None;
    let mut fallback: Option<TightnessResult> = None;
    let mut current: Option<(f64, Operands)> = None;
    let mut kind = kinds[0];
    for it in 0..iterations {
        let local = it % RESTART_EVERY;
        let ops = match (&current, local) {
            (Some((_, ops)), l) if l != 0 => {
                let step = INITIAL_STEP * STEP_DECAY.powi(l as i32);
                perturb(id, ops, kind, step, &mut rng)
            }
            _ => {
                kind = kinds[(it / RESTART_EVERY) % kinds.len()];
                draw_operands(id, model.dim(), kind, &mut rng)?
            }
        };
        let result = evaluate_check(id, model, &ops, plan)?;
        let found = TightnessResult { best: result, witness: ops, kind, evaluations: it + 1 };
        match found.best.outcome {
            Outcome::Fail => return Ok(found),
            Outcome::NotApplicable => {
                fallback.get_or_insert(found);
                continue;
            }
            Outcome::Pass => {}
        }
        let r = found.best.ratio;
        if local == 0 || current.as_ref().is_none_or(|(c, _)| r > *c) {
            current = Some((r, found.witness.clone()));
        }
        if best.as_ref().is_none_or(|b| r > b.best.ratio) {
            best = Some(found);
        }
    }
    let mut out = best.or(fallback).expect("at least one iteration ran");
    out.evaluations = iterations;
    Ok(out)
}
