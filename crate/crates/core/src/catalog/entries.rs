//! Per-entry evaluators.
//!
//! Left-hand sides are sampled on the base grid and refined a fixed number of
//! rounds. Right-hand-side Berezin numbers start from the left-hand sample set
//! (so its argmax is always included) and are refined until stable.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cell::Cell;
use core::f64::consts::SQRT_2;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::{CatalogEntry, Evaluation, Link, Operands, PointwiseStats, SamplingPlan, POINT_TOL};
use crate::berezin::{
    ber_on, berezin_symbol, boundary_defect, max_abs, numerical_radius, point_defect, refine, sample_symbols, symbol_power_floor,
    Refinement, SampleSet, Trend,
};
use crate::matrix::{abs_op, cartesian_parts, op_norm, ComplexMatrix};
use crate::optimize::angular_zoom_max;
use crate::rkhs::{make_grid, DomainGrid, ModelKind, RkhsModel};
use crate::toeplitz::{symbol_sup_norm, toeplitz_matrix};
use crate::Result;

/// Outer defect below which the power conclusion is asserted.
pub const DEFECT_THRESHOLD: f64 = 0.05;
/// Symbol floor above which the power conclusion is asserted.
pub const FLOOR_THRESHOLD: f64 = 1e-3;
/// Relative size below which `ber(A)` counts as zero for power ratios.
pub const DEGENERATE_BER: f64 = 1e-8;
/// Circle samples for symbol sup norms.
pub const CIRCLE_STEPS: u32 = 1024;

struct Ctx<'a> {
    model: &'a RkhsModel,
    grid: DomainGrid,
    plan: &'a SamplingPlan,
    depth: Cell<u32>,
}

/// A refined left-hand sup with its sample set.
struct Sup<'g> {
    value: f64,
    set: SampleSet<'g>,
    values: Vec<Complex64>,
}

impl<'a> Ctx<'a> {
    fn lhs(&self, m: &ComplexMatrix) -> Result<Sup<'_>> {
        let mut set = SampleSet::new(&self.grid);
        let mut values = sample_symbols(self.model, m, &set)?;
        let depth = refine(self.model, m, &mut set, &mut values, Refinement::Steps(self.plan.refine_steps))?;
        self.depth.set(self.depth.get().max(depth));
        Ok(Sup { value: max_abs(&values), set, values })
    }

    fn rhs(&self, m: &ComplexMatrix, start: &SampleSet<'_>) -> Result<f64> {
        let mut set = start.clone();
        let policy = Refinement::Stable { rel_tol: self.plan.rhs_stability, max_depth: self.plan.rhs_max_depth };
        Ok(ber_on(self.model, m, &mut set, policy)?.0)
    }

    /// Real parts of the symbols of a self-adjoint matrix on `set`.
    fn real_symbols(&self, m: &ComplexMatrix, set: &SampleSet<'_>) -> Result<Vec<f64>> {
        Ok(sample_symbols(self.model, m, set)?.into_iter().map(|z| z.re).collect())
    }

    fn eval(&self, links: Vec<Link>, pointwise: Option<PointwiseStats>) -> Evaluation {
        Evaluation { links, pointwise, refinement: self.depth.get(), ..Evaluation::default() }
    }
}

fn merge(acc: &mut Option<PointwiseStats>, stats: PointwiseStats) {
    match acc {
        Some(a) => a.merge(stats),
        None => *acc = Some(stats),
    }
}

fn pointwise_stats(set: &SampleSet<'_>, lhs: &[f64], rhs: &[f64], tolerance: f64) -> PointwiseStats {
    let mut stats = PointwiseStats::new(tolerance);
    for ((point, &l), &r) in set.iter().zip(lhs).zip(rhs) {
        stats.record(point, l, r);
    }
    stats
}

fn fro(m: &ComplexMatrix) -> f64 {
    m.frobenius_norm()
}

const SIGNS: [(f64, &str); 2] = [(1.0, "+"), (-1.0, "-")];

pub(crate) fn evaluate(
    entry: &CatalogEntry,
    model: &RkhsModel,
    ops: &Operands,
    plan: &SamplingPlan,
) -> Result<Evaluation> {
    let ctx = Ctx { model, grid: make_grid(model, plan.radial, plan.angular), plan, depth: Cell::new(0) };
    match entry.id {
        "C01" => c01(&ctx, ops),
        "C02" => c02(&ctx, ops),
        "C03" => c03(&ctx, ops),
        "C04" => c04(&ctx, ops),
        "C05" => c05(&ctx, ops),
        "C06" => c06(&ctx, ops),
        "C07" => c07(&ctx, ops),
        "C08" => c08(&ctx, ops),
        "C09" => c09(&ctx, ops),
        "C10" => c10_c11(&ctx, ops, false),
        "C11" => c10_c11(&ctx, ops, true),
        "C12" => c12(&ctx, ops),
        "C13" => c13(&ctx, ops),
        "C14" => c14(&ctx, ops),
        "C15" => c15(&ctx, ops),
        "C16" => c16(&ctx, ops),
        "C17" => c17(&ctx, ops),
        "C18" => c18(&ctx, ops),
        "C19" => c19_c20(&ctx, ops, true),
        "C20" => c19_c20(&ctx, ops, false),
        "C21" => c21(&ctx, ops),
        "C22" => c22(&ctx, ops),
        "C23" => c23(&ctx, ops),
        "C24" => c24(&ctx, ops),
        "C25" => c25(&ctx, ops),
        "C26" => c26(&ctx, ops),
        other => Err(crate::Error::UnknownEntry(other.into())),
    }
}

fn c01(ctx: &Ctx<'_>, ops: &Operands) -> Result<Evaluation> {
    let a = ops.a()?;
    let s = ctx.lhs(a)?;
    Ok(ctx.eval(vec![Link::sup("ber(A) <= ||A||", s.value, op_norm(a))], None))
}

fn c02(ctx: &Ctx<'_>, ops: &Operands) -> Result<Evaluation> {
    let (a, alpha) = (ops.a()?, ops.alpha()?);
    // both sides on the same refined set; the symbol of alpha A is alpha times that of A
    let s = ctx.lhs(a)?;
    let scaled = sample_symbols(ctx.model, &a.scale(alpha), &s.set)?;
    let lhs = max_abs(&scaled);
    let rhs = alpha.norm() * s.value;
    let link = Link::with_tolerance("ber(alpha A) = |alpha| ber(A)", lhs, rhs, 1e-12 * (1.0 + rhs), true);
    Ok(ctx.eval(vec![link], None))
}

fn c03(ctx: &Ctx<'_>, ops: &Operands) -> Result<Evaluation> {
    let (a, b) = (ops.a()?, ops.b()?);
    let s = ctx.lhs(&(a + b))?;
    let rhs = ctx.rhs(a, &s.set)? + ctx.rhs(b, &s.set)?;
    Ok(ctx.eval(vec![Link::sup("ber(A+B) <= ber(A) + ber(B)", s.value, rhs)], None))
}

fn c04(ctx: &Ctx<'_>, ops: &Operands) -> Result<Evaluation> {
    let x = ops.x()?;
    let s = ctx.lhs(x)?;
    let (h, k) = cartesian_parts(x);
    let hs = ctx.real_symbols(&h, &s.set)?;
    let ks = ctx.real_symbols(&k, &s.set)?;
    // Re(e^{i theta} X) = cos H - sin K, Im(e^{i theta} X) = sin H + cos K
    let rotated_sup = |imag: bool| {
        let g = |theta: f64| {
            let (sn, cs) = theta.sin_cos();
            let (ch, ck) = if imag { (sn, cs) } else { (cs, -sn) };
            hs.iter().zip(&ks).fold(0.0f64, |acc, (&hv, &kv)| acc.max((ch * hv + ck * kv).abs()))
        };
        angular_zoom_max(g, ctx.plan.theta_steps, ctx.plan.theta_levels).1
    };
    let re = rotated_sup(false);
    let im = rotated_sup(true);
    let tol = 1e-6 * (1.0 + s.value);
    let links = vec![
        Link::with_tolerance("sup_theta ber(Re(e^{i theta} X)) = ber(X)", re, s.value, tol, true),
        Link::with_tolerance("sup_theta ber(Im(e^{i theta} X)) = ber(X)", im, s.value, tol, true),
    ];
    Ok(ctx.eval(links, None))
}

fn c05(ctx: &Ctx<'_>, ops: &Operands) -> Result<Evaluation> {
    let x = ops.x()?;
    let (h, k) = cartesian_parts(x);
    let sh = ctx.lhs(&h)?;
    let lower = Link::sup("ber(H) <= ber(X)", sh.value, ctx.rhs(x, &sh.set)?);
    let sx = ctx.lhs(x)?;
    let bh = ctx.rhs(&h, &sx.set)?;
    let bk = ctx.rhs(&k, &sx.set)?;
    let upper = Link::sup("ber(X) <= sqrt(ber^2(H) + ber^2(K))", sx.value, (bh * bh + bk * bk).sqrt());
    Ok(ctx.eval(vec![lower, upper], None))
}

/// `AX + s XA^*`.
fn skew_sum(a: &ComplexMatrix, x: &ComplexMatrix, sign: f64) -> ComplexMatrix {
    &(a * x) + &(x * &a.adjoint()).scale_real(sign)
}

fn c06(ctx: &Ctx<'_>, ops: &Operands) -> Result<Evaluation> {
    let (a, x) = (ops.a()?, ops.x()?);
    let norm_a = op_norm(a);
    let (h, k) = cartesian_parts(x);
    let h2 = &h * &h;
    let k2 = &k * &k;
    let anti = &(&h * &k) + &(&k * &h);
    let bound = |hv: f64, kv: f64, mv: f64| hv + kv + ((hv - kv) * (hv - kv) + mv * mv).sqrt();
    let tol = POINT_TOL * fro(a).powi(2) * fro(x).powi(2);
    let mut links = Vec::new();
    let mut points = None;
    for (sign, label) in SIGNS {
        let s = ctx.lhs(&skew_sum(a, x, sign))?;
        let bh = ctx.rhs(&h2, &s.set)?;
        let bk = ctx.rhs(&k2, &s.set)?;
        let bm = ctx.rhs(&anti, &s.set)?;
        let rhs = SQRT_2 * norm_a * bound(bh, bk, bm).sqrt();
        links.push(Link::sup(format!("ber(AX {label} XA*) <= sqrt2 ||A|| sqrt(...)"), s.value, rhs));

        let hv = ctx.real_symbols(&h2, &s.set)?;
        let kv = ctx.real_symbols(&k2, &s.set)?;
        let mv = ctx.real_symbols(&anti, &s.set)?;
        let lhs_pt: Vec<f64> = s.values.iter().map(|t| t.norm_sqr()).collect();
        let rhs_pt: Vec<f64> = (0..lhs_pt.len())
            .map(|i| 2.0 * norm_a * norm_a * bound(hv[i].max(0.0), kv[i].max(0.0), mv[i]))
            .collect();
        merge(&mut points, pointwise_stats(&s.set, &lhs_pt, &rhs_pt, tol));
    }
    Ok(ctx.eval(links, points))
}

fn c07(ctx: &Ctx<'_>, ops: &Operands) -> Result<Evaluation> {
    let (a, x) = (ops.a()?, ops.x()?);
    let (h, k) = cartesian_parts(x);
    let anti = &(&h * &k) + &(&k * &h);
    if op_norm(&anti) > 1e-10 * op_norm(&h) * op_norm(&k) {
        return Ok(Evaluation::not_applicable("HK + KH != 0"));
    }
    let norm_a = op_norm(a);
    let h2 = &h * &h;
    let k2 = &k * &k;
    let mut links = Vec::new();
    for (sign, label) in SIGNS {
        let s = ctx.lhs(&skew_sum(a, x, sign))?;
        let bh = ctx.rhs(&h2, &s.set)?.sqrt();
        let bk = ctx.rhs(&k2, &s.set)?.sqrt();
        links.push(Link::sup(
            format!("ber(AX {label} XA*) <= 2 ||A|| max(ber^1/2(H^2), ber^1/2(K^2))"),
            s.value,
            2.0 * norm_a * bh.max(bk),
        ));
    }
    Ok(ctx.eval(links, None))
}

fn c08(ctx: &Ctx<'_>, ops: &Operands) -> Result<Evaluation> {
    let (a, x) = (ops.a()?, ops.x()?);
    if !x.is_hermitian() {
        return Ok(Evaluation::not_applicable("X is not self-adjoint"));
    }
    let norm_a = op_norm(a);
    let x2 = x * x;
    let mut links = Vec::new();
    for (sign, label) in SIGNS {
        let s = ctx.lhs(&skew_sum(a, x, sign))?;
        let rhs = 2.0 * norm_a * ctx.rhs(&x2, &s.set)?.sqrt();
        links.push(Link::sup(format!("ber(AX {label} XA*) <= 2 ||A|| ber^1/2(X^2)"), s.value, rhs));
    }
    Ok(ctx.eval(links, None))
}

fn c09(ctx: &Ctx<'_>, ops: &Operands) -> Result<Evaluation> {
    let (a, x) = (ops.a()?, ops.x()?);
    if !x.is_hermitian() {
        return Ok(Evaluation::not_applicable("X is not self-adjoint"));
    }
    let s = ctx.lhs(&(a * x))?;
    let rhs = op_norm(a) * ctx.rhs(&(x * x), &s.set)?.sqrt();
    Ok(ctx.eval(vec![Link::sup("ber(AX) <= ||A|| ber^1/2(X^2)", s.value, rhs)], None))
}

fn c10_c11(ctx: &Ctx<'_>, ops: &Operands, mixed: bool) -> Result<Evaluation> {
    let (a, x) = (ops.a()?, ops.x()?);
    let (aa, ac, xa, xc) = (a.gram(), a.cogram(), x.gram(), x.cogram());
    // C10 pairs A*A + AA* with X*X + XX*; C11 pairs A*A + X*X with AA* + XX*
    let (p, q, tol, name) = if mixed {
        (&aa + &xa, &ac + &xc, POINT_TOL * (fro(a).powi(2) + fro(x).powi(2)), "ber^1/2(A*A + X*X) ber^1/2(AA* + XX*)")
    } else {
        (&aa + &ac, &xa + &xc, POINT_TOL * fro(a) * fro(x), "ber^1/2(A*A + AA*) ber^1/2(X*X + XX*)")
    };
    let mut links = Vec::new();
    let mut points = None;
    for (sign, label) in SIGNS {
        let s = ctx.lhs(&(&(a * x) + &(x * a).scale_real(sign)))?;
        let rhs = ctx.rhs(&p, &s.set)?.sqrt() * ctx.rhs(&q, &s.set)?.sqrt();
        links.push(Link::sup(format!("ber(AX {label} XA) <= {name}"), s.value, rhs));
        let pv = ctx.real_symbols(&p, &s.set)?;
        let qv = ctx.real_symbols(&q, &s.set)?;
        let lhs_pt: Vec<f64> = s.values.iter().map(|t| t.norm()).collect();
        let rhs_pt: Vec<f64> = pv.iter().zip(&qv).map(|(u, v)| (u.max(0.0) * v.max(0.0)).sqrt()).collect();
        merge(&mut points, pointwise_stats(&s.set, &lhs_pt, &rhs_pt, tol));
    }
    Ok(ctx.eval(links, points))
}

fn c12(ctx: &Ctx<'_>, ops: &Operands) -> Result<Evaluation> {
    let x = ops.x()?;
    let id = ComplexMatrix::identity(x.dim());
    let s = ctx.lhs(x)?;
    let rhs = ctx.rhs(&(&id + &x.gram()), &s.set)? * ctx.rhs(&(&id + &x.cogram()), &s.set)?;
    Ok(ctx.eval(vec![Link::sup("ber^2(X) <= ber(I + X*X) ber(I + XX*)", s.value * s.value, rhs)], None))
}

fn c13(ctx: &Ctx<'_>, ops: &Operands) -> Result<Evaluation> {
    let x = ops.x()?;
    let sum = &x.gram() + &x.cogram();
    let s = ctx.lhs(x)?;
    let rhs = 0.5 * ctx.rhs(&sum, &s.set)?;
    let link = Link::sup("ber^2(X) <= ber(X*X + XX*)/2", s.value * s.value, rhs);
    let sv = ctx.real_symbols(&sum, &s.set)?;
    let lhs_pt: Vec<f64> = s.values.iter().map(|t| t.norm_sqr()).collect();
    let rhs_pt: Vec<f64> = sv.iter().map(|v| 0.5 * v).collect();
    let stats = pointwise_stats(&s.set, &lhs_pt, &rhs_pt, POINT_TOL * fro(x).powi(2));
    Ok(ctx.eval(vec![link], Some(stats)))
}

fn c14(ctx: &Ctx<'_>, ops: &Operands) -> Result<Evaluation> {
    let x = ops.x()?;
    let (g, c) = (x.gram(), x.cogram());
    let s = ctx.lhs(&(&g + &c))?;
    let first = Link::sup(
        "ber(X*X + XX*)/2 <= (ber(X*X) + ber(XX*))/2",
        0.5 * s.value,
        0.5 * (ctx.rhs(&g, &s.set)? + ctx.rhs(&c, &s.set)?),
    );
    let second = Link::sup(
        "(ber(X*X) + ber(XX*))/2 <= (||X*X|| + ||XX*||)/2",
        0.5 * (ctx.lhs(&g)?.value + ctx.lhs(&c)?.value),
        0.5 * (op_norm(&g) + op_norm(&c)),
    );
    let norm = op_norm(x);
    let third = Link::with_tolerance(
        "(||X*X|| + ||XX*||)/2 = ||X||^2",
        0.5 * (op_norm(&g) + op_norm(&c)),
        norm * norm,
        1e-10 * (1.0 + norm * norm),
        true,
    );
    Ok(ctx.eval(vec![first, second, third], None))
}

/// `A^* X B`.
fn sandwich(a: &ComplexMatrix, x: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    &(&a.adjoint() * x) * b
}

fn c15(ctx: &Ctx<'_>, ops: &Operands) -> Result<Evaluation> {
    let (a, b, x) = (ops.a()?, ops.b()?, ops.x()?);
    let (aa, bb) = (a.gram(), b.gram());
    let norm_x = op_norm(x);
    let s = ctx.lhs(&sandwich(a, x, b))?;
    let rhs = norm_x * norm_x * ctx.rhs(&aa, &s.set)? * ctx.rhs(&bb, &s.set)?;
    let link = Link::sup("ber^2(A*XB) <= ||X||^2 ber(A*A) ber(B*B)", s.value * s.value, rhs);
    let av = ctx.real_symbols(&aa, &s.set)?;
    let bv = ctx.real_symbols(&bb, &s.set)?;
    let lhs_pt: Vec<f64> = s.values.iter().map(|t| t.norm_sqr()).collect();
    let rhs_pt: Vec<f64> = av.iter().zip(&bv).map(|(u, v)| norm_x * norm_x * u.max(0.0) * v.max(0.0)).collect();
    let tol = POINT_TOL * (fro(a) * fro(x) * fro(b)).powi(2);
    Ok(ctx.eval(vec![link], Some(pointwise_stats(&s.set, &lhs_pt, &rhs_pt, tol))))
}

fn c16(ctx: &Ctx<'_>, ops: &Operands) -> Result<Evaluation> {
    let (a, b, x) = (ops.a()?, ops.b()?, ops.x()?);
    let sum = &sandwich(b, &abs_op(x)?, b) + &sandwich(a, &abs_op(&x.adjoint())?, a);
    let s = ctx.lhs(&sandwich(a, x, b))?;
    let rhs = 0.5 * ctx.rhs(&sum, &s.set)?;
    let link = Link::sup("ber(A*XB) <= ber(B*|X|B + A*|X*|A)/2", s.value, rhs);
    let sv = ctx.real_symbols(&sum, &s.set)?;
    let lhs_pt: Vec<f64> = s.values.iter().map(|t| t.norm()).collect();
    let rhs_pt: Vec<f64> = sv.iter().map(|v| 0.5 * v).collect();
    let tol = POINT_TOL * fro(x) * (fro(a).powi(2) + fro(b).powi(2));
    Ok(ctx.eval(vec![link], Some(pointwise_stats(&s.set, &lhs_pt, &rhs_pt, tol))))
}

fn c17(ctx: &Ctx<'_>, ops: &Operands) -> Result<Evaluation> {
    let (a, b) = (ops.a()?, ops.b()?);
    let (aa, bb) = (a.gram(), b.gram());
    let s = ctx.lhs(&(&a.adjoint() * b))?;
    let product = ctx.rhs(&aa, &s.set)? * ctx.rhs(&bb, &s.set)?;
    let mean = 0.5 * ctx.rhs(&(&aa + &bb), &s.set)?;
    let links = vec![
        Link::sup("ber^2(A*B) <= ber(A*A) ber(B*B)", s.value * s.value, product),
        Link::sup("ber(A*B) <= ber(A*A + B*B)/2", s.value, mean),
    ];
    Ok(ctx.eval(links, None))
}

fn c18(ctx: &Ctx<'_>, ops: &Operands) -> Result<Evaluation> {
    let (a, b, x) = (ops.a()?, ops.b()?, ops.x()?);
    let (norm_a, norm_b) = (op_norm(a), op_norm(b));
    if norm_a == 0.0 || norm_b == 0.0 {
        return Ok(Evaluation::not_applicable("||A|| or ||B|| is zero"));
    }
    let p = sandwich(b, &abs_op(x)?, b);
    let q = sandwich(a, &abs_op(&x.adjoint())?, a);
    let weighted = &p.scale_real(norm_b / norm_a) + &q.scale_real(norm_a / norm_b);
    let s = ctx.lhs(&sandwich(a, x, b))?;
    let geometric = ctx.rhs(&p, &s.set)?.sqrt() * ctx.rhs(&q, &s.set)?.sqrt();
    let links = vec![
        Link::sup("ber(A*XB) <= ber^1/2(B*|X|B) ber^1/2(A*|X*|A)", s.value, geometric),
        Link::sup("ber(A*XB) <= ber(weighted sum)/2", s.value, 0.5 * ctx.rhs(&weighted, &s.set)?),
    ];
    Ok(ctx.eval(links, None))
}

fn c19_c20(ctx: &Ctx<'_>, ops: &Operands, absolute: bool) -> Result<Evaluation> {
    let (a, b, x, y) = (ops.a()?, ops.b()?, ops.x()?, ops.y()?);
    let constant = if absolute {
        SQRT_2 * op_norm(&(&abs_op(x)? + &abs_op(&y.adjoint())?))
    } else {
        op_norm(x) + op_norm(y)
    };
    let name = if absolute { "sqrt2 || |X| + |Y*| ||" } else { "(||X|| + ||Y||)" };
    let (aa, bb) = (a.gram(), b.gram());
    let tol = POINT_TOL * (fro(x) + fro(y)) * fro(a) * fro(b);
    let mut links = Vec::new();
    let mut points = None;
    for (sign, label) in SIGNS {
        let m = &sandwich(a, x, b) + &sandwich(b, y, a).scale_real(sign);
        let s = ctx.lhs(&m)?;
        let rhs = constant * ctx.rhs(&bb, &s.set)?.sqrt() * ctx.rhs(&aa, &s.set)?.sqrt();
        links.push(Link::sup(format!("ber(A*XB {label} B*YA) <= {name} ber^1/2(B*B) ber^1/2(A*A)"), s.value, rhs));
        let av = ctx.real_symbols(&aa, &s.set)?;
        let bv = ctx.real_symbols(&bb, &s.set)?;
        let lhs_pt: Vec<f64> = s.values.iter().map(|t| t.norm()).collect();
        let rhs_pt: Vec<f64> = av.iter().zip(&bv).map(|(u, v)| constant * (u.max(0.0) * v.max(0.0)).sqrt()).collect();
        merge(&mut points, pointwise_stats(&s.set, &lhs_pt, &rhs_pt, tol));
    }
    Ok(ctx.eval(links, points))
}

fn c21(ctx: &Ctx<'_>, ops: &Operands) -> Result<Evaluation> {
    let (a, b, x) = (ops.a()?, ops.b()?, ops.x()?);
    let (aa, bb) = (a.gram(), b.gram());
    let adj = a.adjoint();
    let norm_x = op_norm(x);
    let mut links = Vec::new();
    for (sign, label) in SIGNS {
        let s = ctx.lhs(&(&(&adj * x) + &(x * a).scale_real(sign)))?;
        let rhs = 2.0 * norm_x * ctx.rhs(&aa, &s.set)?.sqrt();
        links.push(Link::sup(format!("ber(A*X {label} XA) <= 2 ||X|| ber^1/2(A*A)"), s.value, rhs));
    }
    for (sign, label) in SIGNS {
        let s = ctx.lhs(&(&(&adj * b) + &(&b.adjoint() * a).scale_real(sign)))?;
        let rhs = 2.0 * ctx.rhs(&bb, &s.set)?.sqrt() * ctx.rhs(&aa, &s.set)?.sqrt();
        links.push(Link::sup(format!("ber(A*B {label} B*A) <= 2 ber^1/2(B*B) ber^1/2(A*A)"), s.value, rhs));
    }
    Ok(ctx.eval(links, None))
}

fn c22(ctx: &Ctx<'_>, ops: &Operands) -> Result<Evaluation> {
    let (a, n) = (ops.a()?, ops.power()?);
    if n == 0 {
        return Err(crate::Error::InvalidArgument("power must be at least 1"));
    }
    let sa = ctx.lhs(a)?;
    let ber_a = sa.value;
    if ber_a <= DEGENERATE_BER * op_norm(a) {
        return Ok(Evaluation::not_applicable("ber(A) is numerically zero"));
    }
    let w = numerical_radius(a, ctx.plan.w_steps, ctx.plan.w_iters);
    let s = ctx.lhs(&a.pow(n))?;
    let rhs = ber_a.powi(n as i32) * (w.upper / ber_a).powi(n as i32);
    let mut eval = ctx.eval(vec![Link::sup("ber(A^n) <= ber^n(A) (w(A)/ber(A))^n", s.value, rhs)], None);
    eval.diagnostics = vec![
        ("n".into(), n as f64),
        ("ber(A)".into(), ber_a),
        ("w_lower".into(), w.lower),
        ("w_upper".into(), w.upper),
    ];
    Ok(eval)
}

fn c23(ctx: &Ctx<'_>, ops: &Operands) -> Result<Evaluation> {
    let symbol = ops.symbol()?;
    if ctx.model.kind() != ModelKind::Hardy {
        return Ok(Evaluation::not_applicable("Toeplitz truncations live on the Hardy model"));
    }
    let t = toeplitz_matrix(symbol, ctx.model.dim());
    let s = ctx.lhs(&t)?;
    let w = numerical_radius(&t, ctx.plan.w_steps, ctx.plan.w_iters);
    let norm = op_norm(&t);
    let sup = symbol_sup_norm(symbol, CIRCLE_STEPS)?;
    let links = vec![
        Link::sup("ber(T_N) <= w(T_N)", s.value, w.upper),
        Link::sup("w(T_N) <= ||T_N||", w.lower, norm),
        Link::sup("||T_N|| <= ||phi||_inf", norm, sup.upper()),
    ];
    let mut eval = ctx.eval(links, None);
    eval.diagnostics = vec![
        ("ber".into(), s.value),
        ("w_lower".into(), w.lower),
        ("w_upper".into(), w.upper),
        ("norm".into(), norm),
        ("sup_norm".into(), sup.value),
        ("sup_norm_gap".into(), sup.gap),
        ("ber_over_sup".into(), super::ratio(s.value, sup.value)),
    ];
    Ok(eval)
}

/// Base ring radii of the plan.
fn ring_radii(ctx: &Ctx<'_>) -> Vec<f64> {
    ctx.grid.lattice().map_or_else(Vec::new, |lat| (0..lat.radial_count).map(|j| lat.ring_radius(j)).collect())
}

/// Index of the first outermost-ring point in the base grid; 0 for finite models.
fn outer_ring_start(ctx: &Ctx<'_>) -> usize {
    ctx.grid.lattice().map_or(0, |lat| ((lat.radial_count - 1) * lat.angular_count) as usize)
}

fn trend_code(trend: Trend) -> f64 {
    match trend {
        Trend::NonDecreasing => 1.0,
        Trend::NonIncreasing => -1.0,
        Trend::Mixed => 0.0,
    }
}

fn c24(ctx: &Ctx<'_>, ops: &Operands) -> Result<Evaluation> {
    let (a, n) = (ops.a()?, ops.power()?);
    if !ctx.model.is_disk() {
        return Ok(Evaluation::not_applicable("boundary diagnostics need a disk model"));
    }
    let radii = ring_radii(ctx);
    let curve = boundary_defect(ctx.model, a, &radii, ctx.plan.defect_angles)?;
    let floor = symbol_power_floor(ctx.model, a, n, &radii, ctx.plan.defect_angles)?;
    let s = ctx.lhs(&a.pow(n))?;
    let ber_a = ctx.rhs(a, &s.set)?;
    let conclusion = Link::sup("ber(A^n) <= ber^n(A)", s.value, ber_a.powi(n as i32));
    let mut eval = ctx.eval(vec![conclusion], None);
    eval.diagnostics = vec![
        ("n".into(), n as f64),
        ("defect_outer".into(), curve.outermost()),
        ("defect_trend".into(), trend_code(curve.trend())),
        ("power_floor".into(), floor),
        ("defect_threshold".into(), DEFECT_THRESHOLD),
        ("floor_threshold".into(), FLOOR_THRESHOLD),
    ];
    if !(curve.outermost() < DEFECT_THRESHOLD && floor > FLOOR_THRESHOLD) {
        eval.not_applicable = Some(String::from("boundary conditions not met at the outermost ring"));
    }
    Ok(eval)
}

fn c25(ctx: &Ctx<'_>, ops: &Operands) -> Result<Evaluation> {
    let (a, b) = (ops.a()?, ops.b()?);
    let Some(lattice) = ctx.grid.lattice() else {
        return Ok(Evaluation::not_applicable("boundary diagnostics need a disk model"));
    };
    let outer = lattice.ring_radius(lattice.radial_count - 1);
    let ab = a * b;
    let ring = &ctx.grid.points()[outer_ring_start(ctx)..];
    let mut ring_ab = 0.0f64;
    let mut ring_defect = 0.0f64;
    for gp in ring {
        ring_ab = ring_ab.max(berezin_symbol(ctx.model, &ab, gp.point)?.norm());
        ring_defect = ring_defect.max(point_defect(ctx.model, a, gp.point)?);
    }
    let sa = ctx.lhs(a)?;
    let sb = ctx.lhs(b)?;
    let rhs = sa.value * sb.value + op_norm(b) * ring_defect;
    let mut eval = ctx.eval(vec![Link::sup("outer |(AB)~| <= ber(A) ber(B) + ||B|| outer defect", ring_ab, rhs)], None);
    eval.diagnostics = vec![
        ("outer_radius".into(), outer),
        ("outer_symbol_ab".into(), ring_ab),
        ("ber_a_ber_b".into(), sa.value * sb.value),
        ("outer_defect".into(), ring_defect),
    ];
    Ok(eval)
}

fn c26(ctx: &Ctx<'_>, ops: &Operands) -> Result<Evaluation> {
    let (a, b) = (ops.a()?, ops.b()?);
    let ab = a * b;
    let s = ctx.lhs(&ab)?;
    let ber_a = ctx.rhs(a, &s.set)?;
    let ber_b = ctx.rhs(b, &s.set)?;
    let av = sample_symbols(ctx.model, a, &s.set)?;
    let cv = ctx.real_symbols(&a.cogram(), &s.set)?;
    let bv = ctx.real_symbols(&b.gram(), &s.set)?;
    let best = av
        .iter()
        .zip(&cv)
        .zip(&bv)
        .map(|((at, c), bb)| (bb.max(0.0) * (c - at.norm_sqr()).max(0.0)).sqrt())
        .fold(0.0f64, f64::max);
    let lhs = s.value - ber_a * ber_b;
    // base points come first in the sample set
    let hypothesis = s.values[outer_ring_start(ctx)..ctx.grid.len()].iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
    let mut eval = ctx.eval(vec![Link::sup("ber(AB) - ber(A) ber(B) <= max sqrt((B*B)~ defect_A^2)", lhs, best)], None);
    eval.diagnostics = vec![("outer_symbol_ab".into(), hypothesis), ("ber_ab".into(), s.value)];
    Ok(eval)
}

