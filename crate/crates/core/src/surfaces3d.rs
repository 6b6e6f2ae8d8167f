//! Boxes inscribed in the superellipsoids
//! `|x/A|^α + |y/B|^β + |z/C|^γ = 1`.
//!
//! A box is identified with its first-octant vertex `(x, y, z)`; the full box
//! spans `[-x, x] × [-y, y] × [-z, z]`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curves2d::{self, check_positive, GeometryError, MixedCurve2D};
use crate::numerics::{self, CubicRealRoots, NumericsError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SurfaceError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("operation needs equal exponents, got ({0}, {1}, {2})")]
    ExponentMismatch(f64, f64, f64),
    #[error("linear system has no positive solution: {0}")]
    SingularSystem(String),
    #[error("all exponents must exceed 1, got ({0}, {1}, {2})")]
    HypothesisViolation(f64, f64, f64),
    #[error("gradient vanishes at the given point")]
    DegenerateGradient,
}

/// The surface `|x|^α/A^α + |y|^β/B^β + |z|^γ/C^γ = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Superellipsoid3D {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl Superellipsoid3D {
    pub fn new(a: f64, b: f64, c: f64, alpha: f64, beta: f64, gamma: f64) -> Result<Self, SurfaceError> {
        Ok(Self {
            a: check_positive("A", a)?,
            b: check_positive("B", b)?,
            c: check_positive("C", c)?,
            alpha: check_positive("alpha", alpha)?,
            beta: check_positive("beta", beta)?,
            gamma: check_positive("gamma", gamma)?,
        })
    }

    pub fn symmetric(a: f64, b: f64, c: f64, alpha: f64) -> Result<Self, SurfaceError> {
        Self::new(a, b, c, alpha, alpha, alpha)
    }

    pub fn ellipsoid(a: f64, b: f64, c: f64) -> Result<Self, SurfaceError> {
        Self::symmetric(a, b, c, 2.0)
    }

    pub fn axes(&self) -> [f64; 3] {
        [self.a, self.b, self.c]
    }

    pub fn exponents(&self) -> [f64; 3] {
        [self.alpha, self.beta, self.gamma]
    }

    pub fn equal_exponents(&self) -> bool {
        self.alpha == self.beta && self.beta == self.gamma
    }

    /// `(x/A)^α + (y/B)^β + (z/C)^γ - 1`.
    pub fn residual(&self, bx: Box3) -> f64 {
        (bx.x / self.a).powf(self.alpha) + (bx.y / self.b).powf(self.beta) + (bx.z / self.c).powf(self.gamma)
            - 1.0
    }

    /// Height of the surface over `(x, y)`, or `None` outside its shadow.
    pub fn z_at(&self, x: f64, y: f64) -> Option<f64> {
        let rest = 1.0 - (x / self.a).powf(self.alpha) - (y / self.b).powf(self.beta);
        (rest >= 0.0).then(|| self.c * rest.powf(1.0 / self.gamma))
    }

    /// The three coordinate-plane sections `z = 0`, `y = 0`, `x = 0` as
    /// curves in `(x, y)`, `(x, z)`, `(y, z)`.
    pub fn faces(&self) -> [MixedCurve2D; 3] {
        [
            MixedCurve2D { a: self.a, b: self.b, alpha: self.alpha, beta: self.beta },
            MixedCurve2D { a: self.a, b: self.c, alpha: self.alpha, beta: self.gamma },
            MixedCurve2D { a: self.b, b: self.c, alpha: self.beta, beta: self.gamma },
        ]
    }

    fn require_equal(&self) -> Result<f64, SurfaceError> {
        if self.equal_exponents() {
            Ok(self.alpha)
        } else {
            Err(SurfaceError::ExponentMismatch(self.alpha, self.beta, self.gamma))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Box3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Box3 {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn cube(side: f64) -> Self {
        Self::new(side, side, side)
    }

    pub fn metrics(&self) -> BoxMetrics {
        BoxMetrics::of(*self)
    }
}

/// `surface_area` is `4(xy + xz + yz)`, half the geometric surface of the
/// box; the ratio helpers use the full surface `8(xy + xz + yz)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxMetrics {
    pub volume: f64,
    pub surface_area: f64,
    pub edge_sum: f64,
}

impl BoxMetrics {
    pub fn of(b: Box3) -> Self {
        Self {
            volume: 8.0 * b.x * b.y * b.z,
            surface_area: 4.0 * (b.x * b.y + b.x * b.z + b.y * b.z),
            edge_sum: 8.0 * (b.x + b.y + b.z),
        }
    }

    pub fn full_surface(&self) -> f64 {
        2.0 * self.surface_area
    }

    /// `V / S^{3/2}` with the full surface, at most `1/(6√6)`.
    pub fn v_over_s32(&self) -> f64 {
        self.volume / self.full_surface().powf(1.5)
    }

    /// `V / L³`, at most `1/1728`.
    pub fn v_over_l3(&self) -> f64 {
        self.volume / self.edge_sum.powi(3)
    }

    /// `S / L²` with the full surface, at most `1/24`.
    pub fn s_over_l2(&self) -> f64 {
        self.full_surface() / (self.edge_sum * self.edge_sum)
    }
}

/// The unique maximum-volume box,
/// `x = A (βγ/(αβ+αγ+βγ))^{1/α}` and cyclically.
pub fn max_volume_box(surface: &Superellipsoid3D) -> (Box3, BoxMetrics) {
    let (al, be, ga) = (surface.alpha, surface.beta, surface.gamma);
    let sum = al * be + al * ga + be * ga;
    let bx = Box3 {
        x: surface.a * (be * ga / sum).powf(1.0 / al),
        y: surface.b * (al * ga / sum).powf(1.0 / be),
        z: surface.c * (al * be / sum).powf(1.0 / ga),
    };
    (bx, bx.metrics())
}

/// Volume of the solid `|x/A|^α + |y/A|^α + |z/C|^α ≤ 1`,
/// `8ABC Γ(1+1/α)³ / Γ(1+3/α)`.
pub fn solid_volume(surface: &Superellipsoid3D) -> Result<f64, SurfaceError> {
    let alpha = surface.require_equal()?;
    let ln = 3.0 * numerics::ln_gamma(1.0 + 1.0 / alpha)? - numerics::ln_gamma(1.0 + 3.0 / alpha)?;
    Ok(8.0 * surface.a * surface.b * surface.c * ln.exp())
}

/// Largest inscribed box volume over the solid's volume; depends on `α` only.
pub fn volume_fill_ratio(surface: &Superellipsoid3D) -> Result<f64, SurfaceError> {
    let solid = solid_volume(surface)?;
    Ok(max_volume_box(surface).1.volume / solid)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EllipsoidSurfaceSolution {
    /// Unique positive root of `4λ³ - λ(a²b²+a²c²+b²c²) - a²b²c²`.
    pub lambda: f64,
    pub vertex: Box3,
    pub s_max: f64,
    pub cubic: CubicRealRoots,
    /// `Λ > max(ab, ac, bc)/2`: the interior box beats every flat one.
    pub boundary_ok: bool,
}

/// Largest surface area of a box inscribed in the ellipsoid with semi-axes
/// `a, b, c`, which equals `4Λ`.
pub fn max_surface_area_ellipsoid(a: f64, b: f64, c: f64) -> Result<EllipsoidSurfaceSolution, SurfaceError> {
    let (a, b, c) = (check_positive("a", a)?, check_positive("b", b)?, check_positive("c", c)?);
    let (a2, b2, c2) = (a * a, b * b, c * c);
    let cubic = numerics::solve_cubic_real(4.0, 0.0, -(a2 * b2 + a2 * c2 + b2 * c2), -a2 * b2 * c2)?;
    let lambda = cubic
        .largest_positive()
        .ok_or_else(|| SurfaceError::SingularSystem("cubic has no positive root".into()))?;

    // k x - y - z = 0 with k = 2Λ/axis²: pairwise differences give
    // (1 + k_x) x = (1 + k_y) y = (1 + k_z) z
    let (kx, ky, kz) = (2.0 * lambda / a2, 2.0 * lambda / b2, 2.0 * lambda / c2);
    let ray = Box3::new(1.0, (1.0 + kx) / (1.0 + ky), (1.0 + kx) / (1.0 + kz));
    let norm = (ray.x * ray.x / a2 + ray.y * ray.y / b2 + ray.z * ray.z / c2).sqrt();
    let vertex = Box3::new(ray.x / norm, ray.y / norm, ray.z / norm);
    if !(vertex.x > 0.0 && vertex.y > 0.0 && vertex.z > 0.0) {
        return Err(SurfaceError::SingularSystem(format!("{vertex:?}")));
    }
    let boundary_ok = lambda > (a * b).max(a * c).max(b * c) / 2.0;
    Ok(EllipsoidSurfaceSolution {
        lambda,
        vertex,
        s_max: 4.0 * lambda,
        cubic,
        boundary_ok,
    })
}

/// `b(b + √(8a² + b²))`, the largest inscribed-box surface area for the
/// ellipsoid of revolution with semi-axes `(a, b, b)`.
pub fn revolution_surface_area(a: f64, b: f64) -> Result<f64, SurfaceError> {
    let (a, b) = (check_positive("a", a)?, check_positive("b", b)?);
    Ok(b * (b + (8.0 * a * a + b * b).sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UniquenessFlag {
    /// Equal exponents: the stationary box is the global maximum.
    GlobalCertified,
    /// Mixed exponents: the stationary box is the only one, but global
    /// maximality is not established.
    Conditional,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeSumSolution {
    pub vertex: Box3,
    pub metrics: BoxMetrics,
    pub lambda: f64,
    /// Best `L` over flat boxes (largest perimeter on any coordinate face).
    pub boundary_supremum: f64,
    pub flag: UniquenessFlag,
}

/// The stationary box of the edge sum `8(x+y+z)` for exponents above 1.
///
/// Stationarity gives `y` and `z` as increasing powers of `x`; substituting
/// into the constraint leaves an increasing function of `x` whose root is
/// found by bisection.
pub fn max_edge_sum_box(surface: &Superellipsoid3D) -> Result<EdgeSumSolution, SurfaceError> {
    let s = *surface;
    if s.alpha <= 1.0 || s.beta <= 1.0 || s.gamma <= 1.0 {
        return Err(SurfaceError::HypothesisViolation(s.alpha, s.beta, s.gamma));
    }
    let ln_x_term = |ln_x: f64| s.alpha * (ln_x - s.a.ln());
    // ln of the coordinate tied to x through 1 = λ p t^{p-1}/T^p
    let partner = |ln_x: f64, p: f64, t: f64| {
        ((s.alpha / p).ln() + p * t.ln() - s.alpha * s.a.ln() + (s.alpha - 1.0) * ln_x) / (p - 1.0)
    };
    let phi = |x: f64| {
        let ln_x = x.ln();
        let ly = partner(ln_x, s.beta, s.b);
        let lz = partner(ln_x, s.gamma, s.c);
        ln_x_term(ln_x).exp() + (s.beta * (ly - s.b.ln())).exp() + (s.gamma * (lz - s.c.ln())).exp() - 1.0
    };
    let x = numerics::solve_bracketed(phi, 0.0, s.a)?;
    let vertex = Box3::new(x, partner(x.ln(), s.beta, s.b).exp(), partner(x.ln(), s.gamma, s.c).exp());
    let metrics = vertex.metrics();
    let lambda = s.a.powf(s.alpha) / (s.alpha * x.powf(s.alpha - 1.0));

    let boundary_supremum = s
        .faces()
        .iter()
        .filter_map(|face| curves2d::optimal_perimeter_rects(face).supremum())
        .fold(0.0, f64::max)
        * 2.0;
    let flag = if s.equal_exponents() && metrics.edge_sum > boundary_supremum {
        UniquenessFlag::GlobalCertified
    } else {
        UniquenessFlag::Conditional
    };
    Ok(EdgeSumSolution {
        vertex,
        metrics,
        lambda,
        boundary_supremum,
        flag,
    })
}

/// The cube `x = y = z = c` on the surface. It maximizes the scale-free
/// ratios `V/S^{3/2}`, `V/L³` and `S/L²`, whose values do not depend on `c`.
pub fn cube_for_ratio(surface: &Superellipsoid3D) -> Result<(Box3, BoxMetrics), SurfaceError> {
    let s = *surface;
    let hi = s.a.min(s.b).min(s.c);
    let c = numerics::solve_bracketed(|t| s.residual(Box3::cube(t)), 0.0, hi)?;
    let bx = Box3::cube(c);
    Ok((bx, bx.metrics()))
}

/// Below this exponent the surface `|x|^α + |y|^α + |z|^α = 1` has no box
/// of greatest surface area: `2(ln 3 - ln 2)/ln 3`.
pub fn surface_area_threshold() -> f64 {
    2.0 * (3f64.ln() - 2f64.ln()) / 3f64.ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SymmetricSurfaceOutcome {
    /// The cube with half-side `3^{-1/α}` and `S = 4·3^{1-2/α}`.
    CubeOptimal { half_side: f64, surface_area: f64 },
    /// Flat boxes approach `4·2^{-2/α}` but nothing attains it.
    NoMaximizer { supremum: f64 },
}

/// `(4·3^{1-2/α}, 4·2^{-2/α})`: the cube's surface area and the best flat
/// box value on `|x|^α + |y|^α + |z|^α = 1`.
pub fn symmetric_surface_values(alpha: f64) -> Result<(f64, f64), SurfaceError> {
    if !(alpha > 0.0) {
        return Err(NumericsError::DomainError(alpha).into());
    }
    Ok((4.0 * 3f64.powf(1.0 - 2.0 / alpha), 4.0 * 2f64.powf(-2.0 / alpha)))
}

/// Whether `|x|^α + |y|^α + |z|^α = 1` has a box of greatest surface area.
pub fn classify_symmetric_surface(alpha: f64) -> Result<SymmetricSurfaceOutcome, SurfaceError> {
    let (cube, flat) = symmetric_surface_values(alpha)?;
    Ok(if alpha >= surface_area_threshold() {
        SymmetricSurfaceOutcome::CubeOptimal {
            half_side: 3f64.powf(-1.0 / alpha),
            surface_area: cube,
        }
    } else {
        SymmetricSurfaceOutcome::NoMaximizer { supremum: flat }
    })
}

/// One summand `f(t)` of a separable surface `f(x) + g(y) + h(z) = 1`.
pub trait SurfaceTerm {
    fn d1(&self, t: f64) -> f64;
    fn d2(&self, t: f64) -> f64;
}

/// `(t/scale)^p` for `t ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerTerm {
    pub scale: f64,
    pub p: f64,
}

impl SurfaceTerm for PowerTerm {
    fn d1(&self, t: f64) -> f64 {
        self.p * t.powf(self.p - 1.0) / self.scale.powf(self.p)
    }

    fn d2(&self, t: f64) -> f64 {
        self.p * (self.p - 1.0) * t.powf(self.p - 2.0) / self.scale.powf(self.p)
    }
}

/// A term given by its first and second derivatives.
pub struct FnTerm<D1, D2>(pub D1, pub D2);

impl<D1: Fn(f64) -> f64, D2: Fn(f64) -> f64> SurfaceTerm for FnTerm<D1, D2> {
    fn d1(&self, t: f64) -> f64 {
        (self.0)(t)
    }

    fn d2(&self, t: f64) -> f64 {
        (self.1)(t)
    }
}

impl Superellipsoid3D {
    pub fn terms(&self) -> [PowerTerm; 3] {
        [
            PowerTerm { scale: self.a, p: self.alpha },
            PowerTerm { scale: self.b, p: self.beta },
            PowerTerm { scale: self.c, p: self.gamma },
        ]
    }
}

/// Gaussian curvature of `f(x) + g(y) + h(z) = 1` at a point on it.
pub fn gaussian_curvature(terms: [&dyn SurfaceTerm; 3], point: Box3) -> Result<f64, SurfaceError> {
    let [f, g, h] = terms;
    let (f1, g1, h1) = (f.d1(point.x), g.d1(point.y), h.d1(point.z));
    let (f2, g2, h2) = (f.d2(point.x), g.d2(point.y), h.d2(point.z));
    let grad2 = f1 * f1 + g1 * g1 + h1 * h1;
    let denom = grad2 * grad2;
    if !(denom >= 1e-30) {
        return Err(SurfaceError::DegenerateGradient);
    }
    Ok((f2 * g2 * h1 * h1 + f2 * h2 * g1 * g1 + g2 * h2 * f1 * f1) / denom)
}
