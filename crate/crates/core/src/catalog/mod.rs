//! Checkable Berezin-number inequalities.
//!
//! Each [`CatalogEntry`] pairs a statement with an evaluator that computes its
//! two sides for given operands on a model. Sup-level entries compare sampled
//! Berezin numbers; where a per-point inequality is available it is also checked
//! at every sample point. Diagnostic entries report finite-truncation
//! quantities for statements that only make sense near the boundary.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::matrix::{abs_op, inner, vec_norm, ComplexMatrix};
use crate::rkhs::{GridPoint, RkhsModel};
use crate::{Error, Result};

mod entries;
mod operands;
mod tightness;

pub use operands::{draw_operands, Operands, MAX_DRAWN_POWER};
pub use tightness::{tightness_search, TightnessResult};

/// Sup-level comparison tolerance `1e-8 (1 + rhs)`.
pub const SUP_TOL: f64 = 1e-8;
/// Per-point tolerance factor; the actual slack is `1e-10 * scale`.
pub const POINT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    A,
    B,
    X,
    Y,
    Alpha,
    Power,
    VecX,
    VecY,
    Symbol,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::A => "A",
            Role::B => "B",
            Role::X => "X",
            Role::Y => "Y",
            Role::Alpha => "alpha",
            Role::Power => "n",
            Role::VecX => "x",
            Role::VecY => "y",
            Role::Symbol => "phi",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntryKind {
    /// A per-vector inequality checked exactly.
    ExactPointwise,
    /// Compares sampled suprema.
    SupLevel,
    /// Reports finite-truncation measurements.
    Diagnostic,
}

impl EntryKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EntryKind::ExactPointwise => "exact-pointwise",
            EntryKind::SupLevel => "sup-level",
            EntryKind::Diagnostic => "diagnostic",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub statement: &'static str,
    pub roles: &'static [Role],
    /// Hypothesis on the operands, empty when there is none.
    pub hypothesis: &'static str,
    pub kind: EntryKind,
    /// Whether the per-point form is checked at every sample as well.
    pub pointwise: bool,
}

use EntryKind::{Diagnostic, ExactPointwise, SupLevel};
use Role::{Alpha, Power, Symbol, VecX, VecY, A, B, X, Y};

const fn entry(
    id: &'static str,
    statement: &'static str,
    roles: &'static [Role],
    hypothesis: &'static str,
    kind: EntryKind,
    pointwise: bool,
) -> CatalogEntry {
    CatalogEntry { id, statement, roles, hypothesis, kind, pointwise }
}

static CATALOG: [CatalogEntry; 27] = [
    entry("C01", "ber(A) <= ||A||", &[A], "", SupLevel, false),
    entry("C02", "ber(alpha A) = |alpha| ber(A)", &[A, Alpha], "", SupLevel, false),
    entry("C03", "ber(A + B) <= ber(A) + ber(B)", &[A, B], "", SupLevel, false),
    entry(
        "C04",
        "ber(X) = sup_theta ber(Re(e^{i theta} X)) = sup_theta ber(Im(e^{i theta} X))",
        &[X],
        "",
        SupLevel,
        false,
    ),
    entry("C05", "ber(H) <= ber(X) <= sqrt(ber^2(H) + ber^2(K)), X = H + iK", &[X], "", SupLevel, false),
    entry(
        "C06",
        "ber(AX +- XA*) <= sqrt2 ||A|| sqrt(ber(H^2) + ber(K^2) + sqrt((ber(H^2) - ber(K^2))^2 + ber^2(HK + KH)))",
        &[A, X],
        "",
        SupLevel,
        true,
    ),
    entry(
        "C07",
        "ber(AX +- XA*) <= 2 ||A|| max(ber^{1/2}(H^2), ber^{1/2}(K^2))",
        &[A, X],
        "HK + KH = 0",
        SupLevel,
        false,
    ),
    entry("C08", "ber(AX +- XA*) <= 2 ||A|| ber^{1/2}(X^2)", &[A, X], "X self-adjoint", SupLevel, false),
    entry("C09", "ber(AX) <= ||A|| ber^{1/2}(X^2)", &[A, X], "X self-adjoint", SupLevel, false),
    entry(
        "C10",
        "ber(AX +- XA) <= ber^{1/2}(A*A + AA*) ber^{1/2}(X*X + XX*)",
        &[A, X],
        "",
        SupLevel,
        true,
    ),
    entry(
        "C11",
        "ber(AX +- XA) <= ber^{1/2}(A*A + X*X) ber^{1/2}(AA* + XX*)",
        &[A, X],
        "",
        SupLevel,
        true,
    ),
    entry("C12", "ber^2(X) <= ber(I + X*X) ber(I + XX*)", &[X], "", SupLevel, false),
    entry("C13", "ber^2(X) <= ber(X*X + XX*) / 2", &[X], "", SupLevel, true),
    entry(
        "C14",
        "ber(X*X + XX*)/2 <= (ber(X*X) + ber(XX*))/2 <= (||X*X|| + ||XX*||)/2 = ||X||^2",
        &[X],
        "",
        SupLevel,
        false,
    ),
    entry("C15", "ber^2(A*XB) <= ||X||^2 ber(A*A) ber(B*B)", &[A, B, X], "", SupLevel, true),
    entry("C16", "ber(A*XB) <= ber(B*|X|B + A*|X*|A) / 2", &[A, B, X], "", SupLevel, true),
    entry(
        "C17",
        "ber^2(A*B) <= ber(A*A) ber(B*B) and ber(A*B) <= ber(A*A + B*B) / 2",
        &[A, B],
        "",
        SupLevel,
        false,
    ),
    entry(
        "C18",
        "ber(A*XB) <= ber^{1/2}(B*|X|B) ber^{1/2}(A*|X*|A) and ber(A*XB) <= ber((||B||/||A||) B*|X|B + (||A||/||B||) A*|X*|A) / 2",
        &[A, B, X],
        "||A||, ||B|| > 0",
        SupLevel,
        false,
    ),
    entry(
        "C19",
        "ber(A*XB +- B*YA) <= sqrt2 || |X| + |Y*| || ber^{1/2}(B*B) ber^{1/2}(A*A)",
        &[A, B, X, Y],
        "",
        SupLevel,
        true,
    ),
    entry(
        "C20",
        "ber(A*XB +- B*YA) <= (||X|| + ||Y||) ber^{1/2}(B*B) ber^{1/2}(A*A)",
        &[A, B, X, Y],
        "",
        SupLevel,
        true,
    ),
    entry(
        "C21",
        "ber(A*X +- XA) <= 2 ||X|| ber^{1/2}(A*A) and ber(A*B +- B*A) <= 2 ber^{1/2}(B*B) ber^{1/2}(A*A)",
        &[A, B, X],
        "",
        SupLevel,
        false,
    ),
    entry("C22", "ber(A^n) <= ber^n(A) (w(A)/ber(A))^n", &[A, Power], "ber(A) > 0", SupLevel, false),
    entry(
        "C23",
        "ber(T_N) <= w(T_N) <= ||T_N|| <= ||phi||_inf for truncated Toeplitz T_N",
        &[Symbol],
        "Hardy model",
        Diagnostic,
        false,
    ),
    entry(
        "C24",
        "ber(A^n) <= ber^n(A) when the boundary defect vanishes and the symbol of A^n stays away from 0",
        &[A, Power],
        "disk model, small boundary defect, nonvanishing symbol of A^n",
        Diagnostic,
        false,
    ),
    entry(
        "C25",
        "max_{|lambda| = r} |(AB)~| <= ber(A) ber(B) + ||B|| max_{|lambda| = r} ||(A* - conj(A~)) k^||",
        &[A, B],
        "disk model",
        Diagnostic,
        false,
    ),
    entry(
        "C26",
        "ber(AB) - ber(A) ber(B) <= sqrt((B*B)~(lambda0) ((AA*)~(lambda0) - |A~(lambda0)|^2)) for some lambda0",
        &[A, B],
        "",
        Diagnostic,
        false,
    ),
    entry("L2", "|<Xx, y>|^2 <= <|X|x, x> <|X*|y, y>", &[X, VecX, VecY], "", ExactPointwise, false),
];

/// All entries, ordered by id.
pub fn list_catalog() -> &'static [CatalogEntry] {
    &CATALOG
}

pub fn lookup(id: &str) -> Result<&'static CatalogEntry> {
    CATALOG.iter().find(|e| e.id == id).ok_or_else(|| Error::UnknownEntry(id.into()))
}

/// Everything about how a check samples the domain.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplingPlan {
    pub radial: u32,
    pub angular: u32,
    /// Refinement rounds for left-hand sides.
    pub refine_steps: u32,
    /// Relative stability at which right-hand-side refinement stops.
    pub rhs_stability: f64,
    pub rhs_max_depth: u32,
    /// Rotation grid for the sup over theta, and zoom rounds around its peaks.
    pub theta_steps: u32,
    pub theta_levels: u32,
    /// Numerical-radius angles and golden-section iterations.
    pub w_steps: u32,
    pub w_iters: u32,
    /// Angles per ring for boundary-defect curves.
    pub defect_angles: u32,
}

impl Default for SamplingPlan {
    fn default() -> Self {
        Self {
            radial: 24,
            angular: 96,
            refine_steps: 3,
            rhs_stability: crate::berezin::STABILITY_TOL,
            rhs_max_depth: crate::rkhs::MAX_REFINEMENT,
            theta_steps: crate::berezin::DEFAULT_THETA_STEPS,
            theta_levels: crate::berezin::DEFAULT_THETA_LEVELS,
            w_steps: 90,
            w_iters: 30,
            defect_angles: 96,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    NotApplicable,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::NotApplicable => "not-applicable",
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `lhs / rhs`, with `0/0 = 0`.
pub fn ratio(lhs: f64, rhs: f64) -> f64 {
    if rhs > 0.0 {
        lhs / rhs
    } else if lhs <= 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

/// One inequality (or equality) inside an entry.
#[derive(Debug, Clone, PartialEq)]
pub struct Link {
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
    pub tolerance: f64,
    /// Two-sided: `|lhs - rhs| <= tolerance`.
    pub equality: bool,
}

impl Link {
    pub fn sup(label: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Link { label: label.into(), lhs, rhs, tolerance: SUP_TOL * (1.0 + rhs.abs()), equality: false }
    }

    pub fn with_tolerance(label: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64, equality: bool) -> Self {
        Link { label: label.into(), lhs, rhs, tolerance, equality }
    }

    pub fn passed(&self) -> bool {
        if self.equality {
            (self.lhs - self.rhs).abs() <= self.tolerance
        } else {
            self.lhs <= self.rhs + self.tolerance
        }
    }

    pub fn margin(&self) -> f64 {
        self.rhs - self.lhs
    }

    pub fn ratio(&self) -> f64 {
        ratio(self.lhs, self.rhs)
    }
}

/// Per-point check of a pointwise form over a sample set.
#[derive(Debug, Clone, PartialEq)]
pub struct PointwiseStats {
    pub points: usize,
    pub violations: usize,
    /// Largest per-point `lhs / rhs`.
    pub max_ratio: f64,
    /// Largest `lhs - rhs` over the points (negative when all are strict).
    pub max_excess: f64,
    pub worst_point: Option<GridPoint>,
    pub tolerance: f64,
}

impl PointwiseStats {
    pub fn new(tolerance: f64) -> Self {
        PointwiseStats {
            points: 0,
            violations: 0,
            max_ratio: 0.0,
            max_excess: f64::NEG_INFINITY,
            worst_point: None,
            tolerance,
        }
    }

    pub fn record(&mut self, point: GridPoint, lhs: f64, rhs: f64) {
        self.points += 1;
        if lhs > rhs + self.tolerance {
            self.violations += 1;
        }
        let excess = lhs - rhs;
        if excess > self.max_excess {
            self.max_excess = excess;
            self.worst_point = Some(point);
        }
        self.max_ratio = self.max_ratio.max(ratio(lhs, rhs));
    }

    pub fn merge(&mut self, other: PointwiseStats) {
        self.points += other.points;
        self.violations += other.violations;
        self.max_ratio = self.max_ratio.max(other.max_ratio);
        self.tolerance = self.tolerance.max(other.tolerance);
        if other.max_excess > self.max_excess {
            self.max_excess = other.max_excess;
            self.worst_point = other.worst_point;
        }
    }
}

/// Grid parameters a result was computed with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub radial: u32,
    pub angular: u32,
    /// `None` for finite models.
    pub max_radius: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub id: String,
    pub model: String,
    pub dim: usize,
    /// Sides of the reported link (the one with the largest ratio).
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub ratio: f64,
    pub pass: bool,
    pub outcome: Outcome,
    pub tolerance: f64,
    pub links: Vec<Link>,
    pub pointwise: Option<PointwiseStats>,
    /// Named measurements, mostly for diagnostic entries.
    pub diagnostics: Vec<(String, f64)>,
    /// Why the entry was not applicable, if it was not.
    pub note: Option<String>,
    pub operands: Vec<String>,
    pub grid: Option<GridSpec>,
    pub refinement: u32,
    pub seed: Option<u64>,
}

/// What an entry evaluator produces before assembly.
#[derive(Debug, Clone, Default)]
pub(crate) struct Evaluation {
    pub links: Vec<Link>,
    pub pointwise: Option<PointwiseStats>,
    pub diagnostics: Vec<(String, f64)>,
    /// Set when a hypothesis or degeneracy rule excludes the operands.
    pub not_applicable: Option<String>,
    pub refinement: u32,
}

impl Evaluation {
    pub fn not_applicable(reason: impl Into<String>) -> Self {
        Evaluation { not_applicable: Some(reason.into()), ..Self::default() }
    }
}

fn assemble(id: &str, model: &str, dim: usize, eval: Evaluation, grid: Option<GridSpec>, operands: Vec<String>) -> CheckResult {
    let pick = |failing_only: bool| {
        eval.links
            .iter()
            .filter(|l| !failing_only || !l.passed())
            .max_by(|a, b| a.ratio().total_cmp(&b.ratio()))
    };
    let reported = pick(true).or_else(|| pick(false));
    let links_pass = eval.links.iter().all(Link::passed);
    let points_pass = eval.pointwise.as_ref().is_none_or(|p| p.violations == 0);
    let pass = links_pass && points_pass;
    let outcome = if eval.not_applicable.is_some() {
        Outcome::NotApplicable
    } else if pass {
        Outcome::Pass
    } else {
        Outcome::Fail
    };
    let (lhs, rhs, tolerance) = reported.map_or((0.0, 0.0, 0.0), |l| (l.lhs, l.rhs, l.tolerance));
    CheckResult {
        id: id.into(),
        model: model.into(),
        dim,
        lhs,
        rhs,
        margin: rhs - lhs,
        ratio: ratio(lhs, rhs),
        pass,
        outcome,
        tolerance,
        links: eval.links,
        pointwise: eval.pointwise,
        diagnostics: eval.diagnostics,
        note: eval.not_applicable,
        operands,
        grid,
        refinement: eval.refinement,
        seed: None,
    }
}

/// Evaluates entry `id` for `operands` on `model`.
pub fn evaluate_check(id: &str, model: &RkhsModel, operands: &Operands, plan: &SamplingPlan) -> Result<CheckResult> {
    let entry = lookup(id)?;
    operands.check_dim(model.dim())?;
    let grid_spec = model.max_radius().map(|r| GridSpec { radial: plan.radial, angular: plan.angular, max_radius: Some(r) });
    let eval = if entry.id == "L2" {
        mixed_schwarz(operands.x()?, operands.vec_x()?, operands.vec_y()?)?
    } else {
        entries::evaluate(entry, model, operands, plan)?
    };
    Ok(assemble(entry.id, model.name(), model.dim(), eval, grid_spec, operands.describe()))
}

fn mixed_schwarz(x: &ComplexMatrix, vx: &[Complex64], vy: &[Complex64]) -> Result<Evaluation> {
    let n = x.dim();
    for len in [vx.len(), vy.len()] {
        if len != n {
            return Err(Error::DimMismatch { expected: n, found: len });
        }
    }
    let lhs = inner(&x.mul_vec(vx), vy).norm_sqr();
    let abs_x = abs_op(x)?;
    let abs_xs = abs_op(&x.adjoint())?;
    let rhs = abs_x.quadratic_form(vx).re * abs_xs.quadratic_form(vy).re;
    let scale = x.frobenius_norm().powi(2) * vec_norm(vx).powi(2) * vec_norm(vy).powi(2);
    let link = Link::with_tolerance("|<Xx,y>|^2 <= <|X|x,x><|X*|y,y>", lhs, rhs, POINT_TOL * scale, false);
    Ok(Evaluation { links: alloc::vec![link], ..Evaluation::default() })
}

/// `|<Xx, y>|^2 <= <|X|x, x> <|X*|y, y>` for one pair of vectors.
pub fn mixed_schwarz_check(x: &ComplexMatrix, vx: &[Complex64], vy: &[Complex64]) -> Result<CheckResult> {
    let eval = mixed_schwarz(x, vx, vy)?;
    let ops = Operands { x: Some(x.clone()), vec_x: Some(vx.to_vec()), vec_y: Some(vy.to_vec()), ..Operands::default() };
    Ok(assemble("L2", "", x.dim(), eval, None, ops.describe()))
}

