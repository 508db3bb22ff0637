//! Berezin symbols, Berezin-number estimates, numerical radii and boundary
//! diagnostics.
//!
//! The Berezin symbol of `A` at `lambda` is `<A k_lambda, k_lambda>` for the
//! normalized kernel. Berezin numbers are estimated as maxima over a
//! [`SampleSet`]: a base [`DomainGrid`] plus refinement points. Such maxima are
//! always genuine lower bounds for the model's Berezin number.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::matrix::{max_eigenvalue, op_norm, ComplexMatrix};
use crate::optimize::angular_max;
use crate::rkhs::{normalized_kernel, DomainGrid, GridPoint, Point, PointKey, RkhsModel, FINE, MAX_REFINEMENT};
use crate::{Error, Result};

/// Number of highest-modulus samples whose neighbourhoods are subdivided per refinement round.
pub const REFINE_TOP: usize = 5;
/// Relative change below which a stability-driven refinement stops.
pub const STABILITY_TOL: f64 = 1e-6;
pub const DEFAULT_THETA_STEPS: u32 = 720;
pub const DEFAULT_THETA_LEVELS: u32 = 4;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn check_dim(model: &RkhsModel, a: &ComplexMatrix) -> Result<()> {
    if a.dim() != model.dim() {
        return Err(Error::DimMismatch { expected: model.dim(), found: a.dim() });
    }
    Ok(())
}

/// `A~(lambda) = <A k^_lambda, k^_lambda>`.
pub fn berezin_symbol(model: &RkhsModel, a: &ComplexMatrix, point: Point) -> Result<Complex64> {
    check_dim(model, a)?;
    let k = normalized_kernel(model, point)?;
    Ok(a.quadratic_form(&k))
}

/// Symbol at an admissible point, skipping the normalization allocation.
fn symbol_direct(model: &RkhsModel, a: &ComplexMatrix, point: Point) -> Complex64 {
    match point {
        Point::Label(i) => a[(i, i)],
        Point::Disk(z) => {
            let k = model.disk_kernel(z);
            let norm_sqr: f64 = k.iter().map(|v| v.norm_sqr()).sum();
            let mut acc = ZERO;
            for (i, ki) in k.iter().enumerate() {
                let row: Complex64 = a.row(i).iter().zip(&k).map(|(&aij, &kj)| aij * kj).sum();
                acc += ki.conj() * row;
            }
            acc / norm_sqr
        }
    }
}

/// Symbols on the base grid.
///
/// On a disk lattice every ring is handled at once: with `p_n = w_n r^n`,
/// `A~(r e^{i theta}) = sum_d c_d(r) e^{i d theta}` where
/// `c_d(r) = sum_{i - j = d} a_ij p_i p_j / ||k||^2`, folded modulo the angular count.
fn base_symbols(model: &RkhsModel, a: &ComplexMatrix, grid: &DomainGrid) -> Vec<Complex64> {
    let Some(lattice) = grid.lattice() else {
        return grid
            .points()
            .iter()
            .map(|gp| symbol_direct(model, a, gp.point))
            .collect();
    };
    let n = model.dim();
    let m_count = lattice.angular_count as usize;
    let roots = lattice.roots();
    let weights = model.weights();
    let mut out = Vec::with_capacity(grid.len());
    let mut diag_sums = vec![ZERO; 2 * n - 1];
    let mut folded = vec![ZERO; m_count];
    let mut powers = vec![0.0; n];
    // residues d mod M that receive at least one diagonal
    let mut residues: Vec<usize> = (0..2 * n - 1)
        .map(|idx| (idx as i64 - (n as i64 - 1)).rem_euclid(m_count as i64) as usize)
        .collect();
    residues.sort_unstable();
    residues.dedup();

    for j in 0..lattice.radial_count {
        let r = lattice.ring_radius(j);
        let mut rp = 1.0;
        for (p, &w) in powers.iter_mut().zip(weights) {
            *p = w * rp;
            rp *= r;
        }
        let norm_sqr = model.disk_kernel_norm_sqr(r);
        diag_sums.iter_mut().for_each(|z| *z = ZERO);
        for row in 0..n {
            let a_row = a.row(row);
            let pr = powers[row];
            for col in 0..n {
                diag_sums[row + n - 1 - col] += a_row[col] * (pr * powers[col]);
            }
        }
        folded.iter_mut().for_each(|z| *z = ZERO);
        for (idx, &c) in diag_sums.iter().enumerate() {
            let d = idx as i64 - (n as i64 - 1);
            folded[d.rem_euclid(m_count as i64) as usize] += c;
        }
        for m in 0..m_count {
            let mut acc = ZERO;
            for &k in &residues {
                acc += folded[k] * roots[(k * m) % m_count];
            }
            out.push(acc / norm_sqr);
        }
    }
    out
}

/// A base grid plus extra (refinement or injected) points.
#[derive(Debug, Clone)]
pub struct SampleSet<'g> {
    grid: &'g DomainGrid,
    extra: Vec<GridPoint>,
    extra_keys: BTreeSet<PointKey>,
}

impl<'g> SampleSet<'g> {
    pub fn new(grid: &'g DomainGrid) -> Self {
        Self { grid, extra: Vec::new(), extra_keys: BTreeSet::new() }
    }

    pub fn grid(&self) -> &'g DomainGrid {
        self.grid
    }

    pub fn len(&self) -> usize {
        self.grid.len() + self.extra.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn point(&self, index: usize) -> GridPoint {
        let base = self.grid.len();
        if index < base {
            self.grid.points()[index]
        } else {
            self.extra[index - base]
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = GridPoint> + '_ {
        self.grid.points().iter().copied().chain(self.extra.iter().copied())
    }

    pub fn extra_points(&self) -> &[GridPoint] {
        &self.extra
    }

    pub fn contains(&self, key: PointKey) -> bool {
        self.grid.contains_key(key) || self.extra_keys.contains(&key)
    }

    /// Adds a point unless already present; returns whether it was new.
    pub fn insert(&mut self, gp: GridPoint) -> bool {
        if self.contains(gp.key) {
            return false;
        }
        self.extra_keys.insert(gp.key);
        self.extra.push(gp);
        true
    }
}

/// Symbol values of `a` at every point of `set`, in set order.
pub fn sample_symbols(model: &RkhsModel, a: &ComplexMatrix, set: &SampleSet<'_>) -> Result<Vec<Complex64>> {
    check_dim(model, a)?;
    let mut values = base_symbols(model, a, set.grid());
    extend_symbols(model, a, set, &mut values);
    Ok(values)
}

/// Evaluates the points of `set` beyond `values.len()`.
fn extend_symbols(model: &RkhsModel, a: &ComplexMatrix, set: &SampleSet<'_>, values: &mut Vec<Complex64>) {
    for idx in values.len()..set.len() {
        values.push(symbol_direct(model, a, set.point(idx).point));
    }
}

/// Index of the largest modulus (first one on ties).
pub fn argmax_abs(values: &[Complex64]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in values.iter().enumerate() {
        let m = v.norm();
        if best.is_none_or(|(_, b)| m > b) {
            best = Some((i, m));
        }
    }
    best.map(|(i, _)| i)
}

pub fn max_abs(values: &[Complex64]) -> f64 {
    values.iter().fold(0.0, |acc, v| acc.max(v.norm()))
}

fn top_indices(values: &[Complex64], q: usize) -> Vec<usize> {
    let mut top: Vec<(f64, usize)> = Vec::with_capacity(q + 1);
    for (i, v) in values.iter().enumerate() {
        let m = v.norm();
        if top.len() == q && m <= top[q - 1].0 {
            continue;
        }
        let pos = top.iter().position(|&(t, _)| m > t).unwrap_or(top.len());
        top.insert(pos, (m, i));
        top.truncate(q);
    }
    top.into_iter().map(|(_, i)| i).collect()
}

/// How far a sampled maximum is refined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Refinement {
    /// Exactly this many rounds (capped at the lattice depth).
    Steps(u32),
    /// Rounds until two successive maxima differ by less than `rel_tol`, at most `max_depth`.
    Stable { rel_tol: f64, max_depth: u32 },
}

impl Refinement {
    pub fn stable() -> Self {
        Refinement::Stable { rel_tol: STABILITY_TOL, max_depth: MAX_REFINEMENT }
    }
}

/// Local subdivision around the current top samples of `values`.
///
/// Round `k` adds the eight lattice neighbours at spacing `2^-k` of the base
/// spacing around each of the top [`REFINE_TOP`] samples. Finite domains are
/// already exhausted by their grid, so nothing happens there. Returns the
/// number of rounds performed.
pub fn refine(
    model: &RkhsModel,
    a: &ComplexMatrix,
    set: &mut SampleSet<'_>,
    values: &mut Vec<Complex64>,
    policy: Refinement,
) -> Result<u32> {
    check_dim(model, a)?;
    extend_symbols(model, a, set, values);
    let Some(lattice) = set.grid().lattice() else {
        return Ok(0);
    };
    let rounds = match policy {
        Refinement::Steps(k) => k.min(MAX_REFINEMENT),
        Refinement::Stable { max_depth, .. } => max_depth.min(MAX_REFINEMENT),
    };
    let limit = lattice.radial_limit() as i64;
    let period = lattice.angular_period() as i64;
    let mut current = max_abs(values);
    let mut depth = 0;
    for round in 1..=rounds {
        let step = (FINE >> round) as i64;
        for idx in top_indices(values, REFINE_TOP) {
            let PointKey::Disk { radial, angular } = set.point(idx).key else {
                continue;
            };
            for dr in -1i64..=1 {
                for da in -1i64..=1 {
                    if dr == 0 && da == 0 {
                        continue;
                    }
                    let r = radial as i64 + dr * step;
                    if r < 0 || r > limit {
                        continue;
                    }
                    let t = (angular as i64 + da * step).rem_euclid(period);
                    set.insert(lattice.grid_point(r as u64, t as u64));
                }
            }
        }
        extend_symbols(model, a, set, values);
        depth = round;
        let next = max_abs(values);
        if let Refinement::Stable { rel_tol, .. } = policy {
            if next - current <= rel_tol * next.max(f64::MIN_POSITIVE) {
                break;
            }
        }
        current = next;
    }
    Ok(depth)
}

/// Refined sampled Berezin number of `a`, starting from `set` (which is extended in place).
pub fn ber_on(
    model: &RkhsModel,
    a: &ComplexMatrix,
    set: &mut SampleSet<'_>,
    policy: Refinement,
) -> Result<(f64, Vec<Complex64>)> {
    let mut values = sample_symbols(model, a, set)?;
    refine(model, a, set, &mut values, policy)?;
    Ok((max_abs(&values), values))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileSample {
    pub point: GridPoint,
    pub value: Complex64,
}

/// Sampled Berezin symbol of one operator.
#[derive(Debug, Clone, PartialEq)]
pub struct BerezinProfile {
    pub model_name: alloc::string::String,
    pub samples: Vec<ProfileSample>,
    /// Maximum of `|A~|` over `samples`; a lower bound of the model's Berezin number.
    pub ber_estimate: f64,
    pub argmax: GridPoint,
    pub refinement_depth: u32,
}

/// Symbols on `grid` followed by `refine_steps` rounds of local subdivision.
///
/// The estimate is nondecreasing in `refine_steps` since sample sets are nested.
pub fn berezin_profile(
    model: &RkhsModel,
    a: &ComplexMatrix,
    grid: &DomainGrid,
    refine_steps: u32,
) -> Result<BerezinProfile> {
    let mut set = SampleSet::new(grid);
    let mut values = sample_symbols(model, a, &set)?;
    let depth = refine(model, a, &mut set, &mut values, Refinement::Steps(refine_steps))?;
    let best = argmax_abs(&values).ok_or(Error::InvalidArgument("empty grid"))?;
    Ok(BerezinProfile {
        model_name: model.name().into(),
        ber_estimate: values[best].norm(),
        argmax: set.point(best),
        samples: set
            .iter()
            .zip(values)
            .map(|(point, value)| ProfileSample { point, value })
            .collect(),
        refinement_depth: depth,
    })
}

/// Certified enclosure `lower <= w(A) <= upper` of the numerical radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericalRadius {
    pub lower: f64,
    pub upper: f64,
}

impl NumericalRadius {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }
}

/// `w(A) = sup_theta lambda_max(Re(e^{i theta} A))`.
///
/// The supremum is sampled on `angular_steps` angles and the best angle is
/// refined by `refine_steps` golden-section iterations. The upper bound is the
/// smaller of two certified bounds from the grid values `f_m`: the Lipschitz
/// bound `(f_m + f_{m+1} + ||A|| h) / 2` on each cell (the map is
/// `||A||`-Lipschitz in theta) and the farthest vertex of the polygon cut out
/// by the support lines `Re(e^{i theta_m} z) = f_m` of the numerical range.
pub fn numerical_radius(a: &ComplexMatrix, angular_steps: u32, refine_steps: u32) -> NumericalRadius {
    assert!(angular_steps >= 8, "numerical_radius needs at least 8 angular steps");
    let adj = a.adjoint();
    let re_rot = |theta: f64| {
        let e = Complex64::from_polar(1.0, theta);
        let mut h = a.scale(e * 0.5);
        h += &adj.scale(e.conj() * 0.5);
        max_eigenvalue(&h)
    };
    let norm = op_norm(a);
    let m = angular_steps as usize;
    let h = 2.0 * PI / m as f64;
    let values: Vec<f64> = (0..m).map(|k| re_rot(h * k as f64)).collect();
    let mut lower = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let (cos_h, sin_h) = (h.cos(), h.sin());
    let mut lipschitz = f64::NEG_INFINITY;
    let mut polygon = f64::NEG_INFINITY;
    for k in 0..m {
        let (f1, f2) = (values[k], values[(k + 1) % m]);
        lipschitz = lipschitz.max(0.5 * (f1 + f2 + norm * h));
        let vertex = ((f1 * f1 + f2 * f2 - 2.0 * f1 * f2 * cos_h).max(0.0)).sqrt() / sin_h;
        polygon = polygon.max(vertex);
    }
    if refine_steps > 0 {
        let (_, refined) = angular_max(re_rot, angular_steps, refine_steps);
        lower = lower.max(refined);
    }
    lower = lower.max(0.0);
    // eigenvalue rounding
    let slack = 1e-13 * norm;
    let upper = (lipschitz.min(polygon) + slack).max(lower);
    NumericalRadius { lower, upper }
}

/// `||(A^* - conj(A~(lambda))) k^_lambda||`, which equals `sqrt((A A^*)~ - |A~|^2)`.
pub fn point_defect(model: &RkhsModel, a: &ComplexMatrix, point: Point) -> Result<f64> {
    check_dim(model, a)?;
    let k = normalized_kernel(model, point)?;
    let symbol = a.quadratic_form(&k);
    let n = a.dim();
    let mut acc = 0.0;
    for i in 0..n {
        // (A^* k)_i = sum_j conj(a_ji) k_j
        let v: Complex64 = (0..n).map(|j| a[(j, i)].conj() * k[j]).sum();
        acc += (v - symbol.conj() * k[i]).norm_sqr();
    }
    Ok(acc.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trend {
    NonDecreasing,
    NonIncreasing,
    Mixed,
}

/// Boundary-defect samples `d(r) = max_theta ||(A^* - conj(A~(lambda))) k^_lambda||`, `|lambda| = r`.
#[derive(Debug, Clone, PartialEq)]
pub struct DefectCurve {
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
}

impl DefectCurve {
    pub fn outermost(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// Monotonicity up to an absolute slack of `1e-12`.
    pub fn trend(&self) -> Trend {
        let up = self.values.windows(2).all(|w| w[1] >= w[0] - 1e-12);
        let down = self.values.windows(2).all(|w| w[1] <= w[0] + 1e-12);
        match (up, down) {
            (true, _) => Trend::NonDecreasing,
            (false, true) => Trend::NonIncreasing,
            _ => Trend::Mixed,
        }
    }
}

fn ring_points(radius: f64, angular_steps: u32) -> impl Iterator<Item = Point> {
    let h = 2.0 * PI / angular_steps as f64;
    (0..angular_steps).map(move |m| Point::Disk(Complex64::from_polar(radius, h * m as f64)))
}

fn check_radii(model: &RkhsModel, radii: &[f64], angular_steps: u32) -> Result<()> {
    if !model.is_disk() {
        return Err(Error::NotDiskModel);
    }
    if radii.is_empty() || angular_steps == 0 {
        return Err(Error::InvalidArgument("need at least one radius and one angle"));
    }
    if radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("radii must be strictly ascending"));
    }
    Ok(())
}

pub fn boundary_defect(
    model: &RkhsModel,
    a: &ComplexMatrix,
    radii: &[f64],
    angular_steps: u32,
) -> Result<DefectCurve> {
    check_radii(model, radii, angular_steps)?;
    let mut values = Vec::with_capacity(radii.len());
    for &r in radii {
        let mut worst: f64 = 0.0;
        for p in ring_points(r, angular_steps) {
            worst = worst.max(point_defect(model, a, p)?);
        }
        values.push(worst);
    }
    Ok(DefectCurve { radii: radii.to_vec(), values })
}

/// `min |(A^n)~(lambda)|` over the outermost ring of `radii`.
pub fn symbol_power_floor(
    model: &RkhsModel,
    a: &ComplexMatrix,
    n: u32,
    radii: &[f64],
    angular_steps: u32,
) -> Result<f64> {
    check_radii(model, radii, angular_steps)?;
    if n == 0 {
        return Err(Error::InvalidArgument("power must be at least 1"));
    }
    let power = a.pow(n);
    let outer = *radii.last().expect("checked non-empty");
    let mut floor = f64::INFINITY;
    for p in ring_points(outer, angular_steps) {
        floor = floor.min(berezin_symbol(model, &power, p)?.norm());
    }
    Ok(floor)
}
