//! Finite-dimensional reproducing kernel Hilbert space models.
//!
//! A model is described by its domain and by the coordinates of the
//! (unnormalized) reproducing kernel `k_lambda` in a fixed orthonormal basis.
//! The disk models are the polynomials of degree `< N` with the Hardy or the
//! Bergman inner product; both are genuine reproducing kernel spaces, so
//! Berezin-number inequalities hold in them exactly. The diagonal model has
//! orthonormal kernels `e_i` on a finite point set.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// Default outer radius of disk grids; the boundary circle itself is never sampled.
pub const DEFAULT_MAX_RADIUS: f64 = 0.995;

/// Lattice coordinates are stored at `2^MAX_REFINEMENT` times the base resolution
/// so refined points stay exact integers.
pub const MAX_REFINEMENT: u32 = 6;
pub(crate) const FINE: u64 = 1 << MAX_REFINEMENT;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Hardy,
    Bergman,
    Diagonal,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Hardy => "hardy",
            ModelKind::Bergman => "bergman",
            ModelKind::Diagonal => "diagonal",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    /// Closed disk `|lambda| <= max_radius` with `0 < max_radius < 1`.
    Disk { max_radius: f64 },
    FinitePoints { labels: Vec<String> },
}

/// A point of a model domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Point {
    Disk(Complex64),
    Label(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RkhsModel {
    name: String,
    kind: ModelKind,
    dim: usize,
    domain: Domain,
    /// Disk models: `k_lambda[n] = weights[n] * conj(lambda)^n`.
    weights: Vec<f64>,
}

fn check_radius(max_radius: f64) -> Result<()> {
    if max_radius > 0.0 && max_radius < 1.0 {
        Ok(())
    } else {
        Err(Error::BadRadius(max_radius))
    }
}

/// Polynomials of degree `< n` with the Hardy inner product; `k_lambda[j] = conj(lambda)^j`.
pub fn hardy_model(n: usize, max_radius: f64) -> Result<RkhsModel> {
    check_radius(max_radius)?;
    if n == 0 {
        return Err(Error::InvalidArgument("model dimension must be at least 1"));
    }
    Ok(RkhsModel {
        name: format!("hardy({n})"),
        kind: ModelKind::Hardy,
        dim: n,
        domain: Domain::Disk { max_radius },
        weights: alloc::vec![1.0; n],
    })
}

/// Polynomials of degree `< n` with the Bergman inner product; `k_lambda[j] = sqrt(j+1) conj(lambda)^j`.
pub fn bergman_model(n: usize, max_radius: f64) -> Result<RkhsModel> {
    check_radius(max_radius)?;
    if n == 0 {
        return Err(Error::InvalidArgument("model dimension must be at least 1"));
    }
    Ok(RkhsModel {
        name: format!("bergman({n})"),
        kind: ModelKind::Bergman,
        dim: n,
        domain: Domain::Disk { max_radius },
        weights: (0..n).map(|j| ((j + 1) as f64).sqrt()).collect(),
    })
}

/// `count` points with orthonormal kernels `e_i`; the Berezin symbol is the diagonal.
pub fn diagonal_model(count: usize) -> Result<RkhsModel> {
    if count == 0 {
        return Err(Error::InvalidArgument("diagonal model needs at least one point"));
    }
    Ok(RkhsModel {
        name: format!("diagonal({count})"),
        kind: ModelKind::Diagonal,
        dim: count,
        domain: Domain::FinitePoints { labels: (0..count).map(|i| format!("{i}")).collect() },
        weights: Vec::new(),
    })
}

impl RkhsModel {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn max_radius(&self) -> Option<f64> {
        match self.domain {
            Domain::Disk { max_radius } => Some(max_radius),
            Domain::FinitePoints { .. } => None,
        }
    }

    pub fn is_disk(&self) -> bool {
        matches!(self.domain, Domain::Disk { .. })
    }

    pub(crate) fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn is_admissible(&self, point: Point) -> bool {
        match (&self.domain, point) {
            (Domain::Disk { max_radius }, Point::Disk(z)) => {
                z.re.is_finite() && z.im.is_finite() && z.norm() <= max_radius * (1.0 + 1e-15)
            }
            (Domain::FinitePoints { labels }, Point::Label(i)) => i < labels.len(),
            _ => false,
        }
    }

    /// Coordinates of the unnormalized kernel `k_lambda`.
    pub fn kernel_coords(&self, point: Point) -> Result<Vec<Complex64>> {
        if !self.is_admissible(point) {
            return Err(Error::InadmissiblePoint);
        }
        Ok(match point {
            Point::Disk(z) => self.disk_kernel(z),
            Point::Label(i) => {
                let mut e = alloc::vec![Complex64::new(0.0, 0.0); self.dim];
                e[i] = Complex64::new(1.0, 0.0);
                e
            }
        })
    }

    pub(crate) fn disk_kernel(&self, z: Complex64) -> Vec<Complex64> {
        let zc = z.conj();
        let mut power = Complex64::new(1.0, 0.0);
        self.weights
            .iter()
            .map(|&w| {
                let v = power * w;
                power *= zc;
                v
            })
            .collect()
    }

    /// `||k_lambda||^2` for a disk model at radius `r`.
    pub(crate) fn disk_kernel_norm_sqr(&self, r: f64) -> f64 {
        let r2 = r * r;
        let mut power = 1.0;
        let mut acc = 0.0;
        for &w in &self.weights {
            acc += w * w * power;
            power *= r2;
        }
        acc
    }
}

/// `k_lambda / ||k_lambda||`.
pub fn normalized_kernel(model: &RkhsModel, point: Point) -> Result<Vec<Complex64>> {
    let mut k = model.kernel_coords(point)?;
    let norm = k.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut k {
        *z /= norm;
    }
    Ok(k)
}

/// Exact lattice coordinates of a grid point.
///
/// Disk points live on a polar lattice refined `2^MAX_REFINEMENT` times:
/// `r = max_radius * radial / (radial_count * FINE)` and
/// `theta = 2 pi * angular / (angular_count * FINE)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PointKey {
    Disk { radial: u64, angular: u64 },
    Label(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub key: PointKey,
    pub point: Point,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiskLattice {
    pub radial_count: u32,
    pub angular_count: u32,
    pub max_radius: f64,
    /// `exp(2 pi i m / angular_count)` for `m < angular_count`.
    roots: Vec<Complex64>,
}

impl DiskLattice {
    fn new(radial_count: u32, angular_count: u32, max_radius: f64) -> Self {
        let roots = (0..angular_count)
            .map(|m| Complex64::from_polar(1.0, 2.0 * PI * m as f64 / angular_count as f64))
            .collect();
        Self { radial_count, angular_count, max_radius, roots }
    }

    pub(crate) fn roots(&self) -> &[Complex64] {
        &self.roots
    }

    /// Base ring radii `max_radius * (j + 1) / radial_count`.
    pub fn ring_radius(&self, j: u32) -> f64 {
        self.max_radius * (j + 1) as f64 / self.radial_count as f64
    }

    pub fn radial_limit(&self) -> u64 {
        self.radial_count as u64 * FINE
    }

    pub fn angular_period(&self) -> u64 {
        self.angular_count as u64 * FINE
    }

    pub fn grid_point(&self, radial: u64, angular: u64) -> GridPoint {
        let period = self.angular_period();
        // the origin has a single representative
        let angular = if radial == 0 { 0 } else { angular % period };
        let r = self.max_radius * radial as f64 / self.radial_limit() as f64;
        let theta = 2.0 * PI * angular as f64 / period as f64;
        GridPoint {
            key: PointKey::Disk { radial, angular },
            point: Point::Disk(Complex64::from_polar(r, theta)),
        }
    }

    /// Whether the key is one of the base grid points.
    pub(crate) fn is_base(&self, radial: u64, angular: u64) -> bool {
        radial >= FINE && radial.is_multiple_of(FINE) && angular.is_multiple_of(FINE)
    }
}

/// Deterministic sample of a model domain.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainGrid {
    lattice: Option<DiskLattice>,
    points: Vec<GridPoint>,
    pub refinement_depth: u32,
}

impl DomainGrid {
    pub fn points(&self) -> &[GridPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn lattice(&self) -> Option<&DiskLattice> {
        self.lattice.as_ref()
    }

    /// Whether a key belongs to the base grid (as opposed to a refinement point).
    pub fn contains_key(&self, key: PointKey) -> bool {
        match (key, &self.lattice) {
            (PointKey::Disk { radial, angular }, Some(lat)) => {
                lat.is_base(radial, angular) && radial <= lat.radial_limit()
            }
            (PointKey::Label(i), None) => i < self.points.len(),
            _ => false,
        }
    }
}

/// Builds the base grid of a model.
///
/// Disk models get the polar product grid `r_j e^{i theta_m}` with
/// `r_j = max_radius (j+1)/radial_count`, `theta_m = 2 pi m / angular_count`, ring-major.
/// Finite models get all their points and ignore the counts.
pub fn make_grid(model: &RkhsModel, radial_count: u32, angular_count: u32) -> DomainGrid {
    match model.domain() {
        Domain::Disk { max_radius } => {
            assert!(radial_count >= 1 && angular_count >= 1, "grid counts must be positive");
            let lattice = DiskLattice::new(radial_count, angular_count, *max_radius);
            let mut points = Vec::with_capacity((radial_count * angular_count) as usize);
            for j in 0..radial_count as u64 {
                for m in 0..angular_count as u64 {
                    points.push(lattice.grid_point((j + 1) * FINE, m * FINE));
                }
            }
            DomainGrid { lattice: Some(lattice), points, refinement_depth: 0 }
        }
        Domain::FinitePoints { labels } => DomainGrid {
            lattice: None,
            points: (0..labels.len())
                .map(|i| GridPoint { key: PointKey::Label(i), point: Point::Label(i) })
                .collect(),
            refinement_depth: 0,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-14
    }

    #[test]
    fn hardy_kernel_examples() {
        let m1 = hardy_model(1, 0.9).unwrap();
        assert_eq!(m1.kernel_coords(Point::Disk(c(0.3, -0.4))).unwrap(), [c(1.0, 0.0)]);
        let m2 = hardy_model(2, 0.9).unwrap();
        assert_eq!(m2.kernel_coords(Point::Disk(c(0.0, 0.0))).unwrap(), [c(1.0, 0.0), c(0.0, 0.0)]);
        let m3 = hardy_model(3, 0.9).unwrap();
        let k = m3.kernel_coords(Point::Disk(c(0.0, 0.5))).unwrap();
        assert!(close(k[0], c(1.0, 0.0)) && close(k[1], c(0.0, -0.5)) && close(k[2], c(-0.25, 0.0)));
    }

    #[test]
    fn bergman_kernel_examples() {
        let m1 = bergman_model(1, 0.9).unwrap();
        assert_eq!(m1.kernel_coords(Point::Disk(c(0.5, 0.0))).unwrap(), [c(1.0, 0.0)]);
        let m2 = bergman_model(2, 0.9).unwrap();
        let k = m2.kernel_coords(Point::Disk(c(0.5, 0.0))).unwrap();
        assert!(close(k[1], c(2f64.sqrt() * 0.5, 0.0)));
        let m5 = bergman_model(5, 0.9).unwrap();
        let k = m5.kernel_coords(Point::Disk(c(0.0, 0.0))).unwrap();
        assert_eq!(k[0], c(1.0, 0.0));
        assert!(k[1..].iter().all(|z| *z == c(0.0, 0.0)));
    }

    #[test]
    fn bad_radius_is_rejected() {
        for r in [0.0, 1.0, -0.2, 1.5, f64::NAN] {
            assert!(matches!(hardy_model(4, r), Err(Error::BadRadius(_))));
            assert!(matches!(bergman_model(4, r), Err(Error::BadRadius(_))));
        }
    }

    #[test]
    fn normalized_kernel_examples() {
        let hardy = hardy_model(4, 0.9).unwrap();
        let k = normalized_kernel(&hardy, Point::Disk(c(0.0, 0.0))).unwrap();
        assert_eq!(k[0], c(1.0, 0.0));
        let diag = diagonal_model(3).unwrap();
        let k = normalized_kernel(&diag, Point::Label(2)).unwrap();
        assert_eq!(k, [c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let h2 = hardy_model(2, 0.9).unwrap();
        let k = normalized_kernel(&h2, Point::Disk(c(0.6, 0.0))).unwrap();
        let s = 1.36f64.sqrt();
        assert!(close(k[0], c(1.0 / s, 0.0)) && close(k[1], c(0.6 / s, 0.0)));
    }

    #[test]
    fn inadmissible_points() {
        let hardy = hardy_model(4, 0.9).unwrap();
        assert_eq!(normalized_kernel(&hardy, Point::Disk(c(0.95, 0.0))), Err(Error::InadmissiblePoint));
        assert_eq!(normalized_kernel(&hardy, Point::Label(0)), Err(Error::InadmissiblePoint));
        let diag = diagonal_model(2).unwrap();
        assert_eq!(normalized_kernel(&diag, Point::Label(2)), Err(Error::InadmissiblePoint));
        assert_eq!(normalized_kernel(&diag, Point::Disk(c(0.0, 0.0))), Err(Error::InadmissiblePoint));
    }

    #[test]
    fn hardy_kernel_norm_matches_untruncated_space() {
        let model = hardy_model(64, 0.7).unwrap();
        for (r, theta) in [(0.0, 0.0), (0.3, 1.0), (0.55, -2.0), (0.7, 3.0)] {
            let k = model.kernel_coords(Point::Disk(Complex64::from_polar(r, theta))).unwrap();
            let norm_sqr: f64 = k.iter().map(|z| z.norm_sqr()).sum();
            assert!((norm_sqr - 1.0 / (1.0 - r * r)).abs() <= 1e-6);
            assert!((norm_sqr - model.disk_kernel_norm_sqr(r)).abs() <= 1e-12);
        }
    }

    #[test]
    fn grid_sizes() {
        assert_eq!(make_grid(&diagonal_model(3).unwrap(), 24, 96).len(), 3);
        let hardy = hardy_model(8, DEFAULT_MAX_RADIUS).unwrap();
        let one_ring = make_grid(&hardy, 1, 4);
        assert_eq!(one_ring.len(), 4);
        for gp in one_ring.points() {
            let Point::Disk(z) = gp.point else { panic!("disk point expected") };
            assert!((z.norm() - DEFAULT_MAX_RADIUS).abs() < 1e-15);
        }
        assert_eq!(make_grid(&hardy, 24, 96).len(), 2304);
    }

    #[test]
    fn grid_is_deterministic_and_inside_the_disk() {
        let hardy = hardy_model(8, 0.9).unwrap();
        let a = make_grid(&hardy, 7, 13);
        let b = make_grid(&hardy, 7, 13);
        assert_eq!(a, b);
        assert!(a.points().iter().all(|gp| hardy.is_admissible(gp.point)));
        assert!(a.points().iter().all(|gp| a.contains_key(gp.key)));
    }
}
