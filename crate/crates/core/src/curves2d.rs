//! Rectangles inscribed in the mixed-exponent Lamé curves
//! `|x/A|^α + |y/B|^β = 1` (superellipses when `α = β`, ellipses at 2).
//!
//! All rectangles are axis-aligned and symmetric about both axes, so a
//! rectangle is identified with its first-quadrant vertex `(x, y)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{self, Bracket, NumericsError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("parameter {name} must be positive and finite, got {value}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("operation needs equal exponents, got alpha = {alpha}, beta = {beta}")]
    ExponentMismatch { alpha: f64, beta: f64 },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<f64, GeometryError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(GeometryError::InvalidParameter { name, value })
    }
}

/// Anything symmetric about both axes whose first-quadrant arc is the graph
/// of a decreasing function `y = h(x)` on `[0, x_extent]`.
pub trait InscribingCurve {
    fn x_extent(&self) -> f64;
    fn y_extent(&self) -> f64;
    fn height_at(&self, x: f64) -> f64;

    /// Ordered first-quadrant arc from `(0, B)` to `(A, 0)`.
    fn first_quadrant_samples(&self, n: usize) -> Vec<(f64, f64)> {
        let n = n.max(2);
        let a = self.x_extent();
        (0..n)
            .map(|i| {
                let x = a * i as f64 / (n - 1) as f64;
                (x, self.height_at(x))
            })
            .collect()
    }
}

/// The curve `|x|^α/A^α + |y|^β/B^β = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixedCurve2D {
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl MixedCurve2D {
    pub fn new(a: f64, b: f64, alpha: f64, beta: f64) -> Result<Self, GeometryError> {
        Ok(Self {
            a: check_positive("A", a)?,
            b: check_positive("B", b)?,
            alpha: check_positive("alpha", alpha)?,
            beta: check_positive("beta", beta)?,
        })
    }

    pub fn superellipse(a: f64, b: f64, alpha: f64) -> Result<Self, GeometryError> {
        Self::new(a, b, alpha, alpha)
    }

    pub fn ellipse(a: f64, b: f64) -> Result<Self, GeometryError> {
        Self::new(a, b, 2.0, 2.0)
    }

    /// `1/β`.
    pub fn delta(&self) -> f64 {
        1.0 / self.beta
    }

    pub fn equal_exponents(&self) -> bool {
        self.alpha == self.beta
    }

    /// `(x/A)^α + (y/B)^β - 1`.
    pub fn residual(&self, x: f64, y: f64) -> f64 {
        (x / self.a).powf(self.alpha) + (y / self.b).powf(self.beta) - 1.0
    }

    /// Area of the region bounded by the curve,
    /// `4AB Γ(1+1/α) Γ(1+1/β) / Γ(1+1/α+1/β)`.
    pub fn enclosed_area(&self) -> Result<f64, GeometryError> {
        let (p, q) = (1.0 / self.alpha, 1.0 / self.beta);
        let ln = numerics::ln_gamma(1.0 + p)? + numerics::ln_gamma(1.0 + q)?
            - numerics::ln_gamma(1.0 + p + q)?;
        Ok(4.0 * self.a * self.b * ln.exp())
    }

    /// Residual of the perimeter Lagrange system `1 = λ ∂g/∂x = λ ∂g/∂y`.
    pub fn perimeter_stationarity(&self, rect: Rectangle, lambda: f64) -> f64 {
        let (gx, gy) = self.constraint_gradient(rect);
        (1.0 - lambda * gx).hypot(1.0 - lambda * gy)
    }

    /// Residual of the area Lagrange system `y = λ ∂g/∂x`, `x = λ ∂g/∂y`.
    pub fn area_stationarity(&self, rect: Rectangle, lambda: f64) -> f64 {
        let (gx, gy) = self.constraint_gradient(rect);
        (rect.y - lambda * gx).hypot(rect.x - lambda * gy)
    }

    fn constraint_gradient(&self, rect: Rectangle) -> (f64, f64) {
        (
            self.alpha * rect.x.powf(self.alpha - 1.0) / self.a.powf(self.alpha),
            self.beta * rect.y.powf(self.beta - 1.0) / self.b.powf(self.beta),
        )
    }

    fn rect_at_u(&self, u: f64) -> Rectangle {
        // 1 - u^α without cancellation near u = 1
        let w = -(self.alpha * u.ln()).exp_m1();
        Rectangle {
            x: self.a * u,
            y: self.b * w.powf(self.delta()),
        }
    }
}

impl InscribingCurve for MixedCurve2D {
    fn x_extent(&self) -> f64 {
        self.a
    }

    fn y_extent(&self) -> f64 {
        self.b
    }

    fn height_at(&self, x: f64) -> f64 {
        let u = (x / self.a).clamp(0.0, 1.0);
        self.b * (1.0 - u.powf(self.alpha)).max(0.0).powf(self.delta())
    }

    /// Samples through `(x/A)^α = cos²t`, `(y/B)^β = sin²t`, which stays
    /// exactly on the curve and spreads points along steep arcs.
    fn first_quadrant_samples(&self, n: usize) -> Vec<(f64, f64)> {
        let n = n.max(2);
        (0..n)
            .map(|i| {
                let t = std::f64::consts::FRAC_PI_2 * (1.0 - i as f64 / (n - 1) as f64);
                let (s, c) = t.sin_cos();
                let x = self.a * (c * c).powf(1.0 / self.alpha);
                let y = self.b * (s * s).powf(1.0 / self.beta);
                (x, y)
            })
            .collect()
    }
}

/// First-quadrant vertex of an inscribed rectangle spanning `[-x,x]×[-y,y]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rectangle {
    pub x: f64,
    pub y: f64,
}

impl Rectangle {
    pub fn new(x: f64, y: f64) -> Result<Self, GeometryError> {
        Ok(Self {
            x: check_positive("x", x)?,
            y: check_positive("y", y)?,
        })
    }

    pub fn metrics(&self) -> RectMetrics {
        RectMetrics::of(*self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RectMetrics {
    pub area: f64,
    pub perimeter: f64,
    pub ratio: f64,
}

impl RectMetrics {
    pub fn of(rect: Rectangle) -> Self {
        let area = 4.0 * rect.x * rect.y;
        let perimeter = 4.0 * (rect.x + rect.y);
        let ratio = if perimeter > 0.0 { area / (perimeter * perimeter) } else { 0.0 };
        Self { area, perimeter, ratio }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriticalKind {
    InteriorMax,
    InteriorMin,
    /// Degenerate rectangle with a zero side.
    Boundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub rect: Rectangle,
    pub lambda: f64,
    pub objective_value: f64,
    pub kind: CriticalKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExistenceNote {
    UniqueMaxNoMin,
    UniqueMinNoMax,
    BothExist,
    DegenerateAllEqual,
    /// Extremes are approached only by degenerate rectangles.
    NeitherExists,
    /// More than one rectangle attains the global maximum.
    MultipleMax,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub critical_points: Vec<CriticalPoint>,
    pub global_max: Option<CriticalPoint>,
    pub global_min: Option<CriticalPoint>,
    pub existence_note: ExistenceNote,
}

impl SolveReport {
    pub fn interior(&self, kind: CriticalKind) -> impl Iterator<Item = &CriticalPoint> {
        self.critical_points.iter().filter(move |c| c.kind == kind)
    }

    /// Largest objective value over all reported points, boundary included.
    pub fn supremum(&self) -> Option<f64> {
        self.critical_points.iter().map(|c| c.objective_value).reduce(f64::max)
    }

    pub fn infimum(&self) -> Option<f64> {
        self.critical_points.iter().map(|c| c.objective_value).reduce(f64::min)
    }
}

/// Picks the global extremes among interior candidates, keeping an interior
/// point only when it strictly beats every boundary value.
pub(crate) fn finish_report(critical_points: Vec<CriticalPoint>) -> SolveReport {
    let boundary: Vec<f64> = critical_points
        .iter()
        .filter(|c| c.kind == CriticalKind::Boundary)
        .map(|c| c.objective_value)
        .collect();
    let bmax = boundary.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let bmin = boundary.iter().copied().fold(f64::INFINITY, f64::min);

    let global_max = critical_points
        .iter()
        .filter(|c| c.kind == CriticalKind::InteriorMax && c.objective_value > bmax)
        .max_by(|a, b| a.objective_value.total_cmp(&b.objective_value))
        .copied();
    let global_min = critical_points
        .iter()
        .filter(|c| c.kind == CriticalKind::InteriorMin && c.objective_value < bmin)
        .min_by(|a, b| a.objective_value.total_cmp(&b.objective_value))
        .copied();
    let existence_note = match (global_max.is_some(), global_min.is_some()) {
        (true, true) => ExistenceNote::BothExist,
        (true, false) => ExistenceNote::UniqueMaxNoMin,
        (false, true) => ExistenceNote::UniqueMinNoMax,
        (false, false) => ExistenceNote::NeitherExists,
    };
    SolveReport {
        critical_points,
        global_max,
        global_min,
        existence_note,
    }
}

/// The unique maximum-area rectangle,
/// `x = A (β/(α+β))^{1/α}`, `y = B (α/(α+β))^{1/β}`.
pub fn max_area_rect(curve: &MixedCurve2D) -> (Rectangle, RectMetrics) {
    let (alpha, beta) = (curve.alpha, curve.beta);
    let rect = Rectangle {
        x: curve.a * (beta / (alpha + beta)).powf(1.0 / alpha),
        y: curve.b * (alpha / (alpha + beta)).powf(1.0 / beta),
    };
    (rect, rect.metrics())
}

/// [`max_area_rect`] as a classified critical point with its multiplier.
pub fn max_area_critical_point(curve: &MixedCurve2D) -> CriticalPoint {
    let (rect, metrics) = max_area_rect(curve);
    let lambda = rect.y * curve.a.powf(curve.alpha) / (curve.alpha * rect.x.powf(curve.alpha - 1.0));
    CriticalPoint {
        rect,
        lambda,
        objective_value: metrics.area,
        kind: CriticalKind::InteriorMax,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StationaryClass {
    Max,
    Min,
    Degenerate,
}

/// Bordered Hessian of the perimeter problem on an equal-exponent curve,
/// `α³(α-1)(xy)^{α-2}(x^α B^α + y^α A^α) / (A^{2α} B^{2α})`.
pub fn perimeter_bordered_hessian(curve: &MixedCurve2D, rect: Rectangle) -> Result<f64, GeometryError> {
    if !curve.equal_exponents() {
        return Err(GeometryError::ExponentMismatch {
            alpha: curve.alpha,
            beta: curve.beta,
        });
    }
    let MixedCurve2D { a, b, alpha, .. } = *curve;
    let Rectangle { x, y } = rect;
    // evaluated as a product of ratios so large exponents stay finite
    let lead = alpha.powi(3) * (alpha - 1.0);
    let xa = (x / a).powf(alpha);
    let yb = (y / b).powf(alpha);
    let xy = (x * y).powf(alpha - 2.0);
    Ok(lead * xy * (xa + yb) / (a * b).powf(alpha))
}

pub fn classify_perimeter_stationary(
    curve: &MixedCurve2D,
    rect: Rectangle,
) -> Result<StationaryClass, GeometryError> {
    let h = perimeter_bordered_hessian(curve, rect)?;
    Ok(if h > 0.0 {
        StationaryClass::Max
    } else if h < 0.0 {
        StationaryClass::Min
    } else {
        StationaryClass::Degenerate
    })
}

fn boundary_points(curve: &MixedCurve2D) -> [CriticalPoint; 2] {
    [
        CriticalPoint {
            rect: Rectangle { x: 0.0, y: curve.b },
            lambda: f64::NAN,
            objective_value: 4.0 * curve.b,
            kind: CriticalKind::Boundary,
        },
        CriticalPoint {
            rect: Rectangle { x: curve.a, y: 0.0 },
            lambda: f64::NAN,
            objective_value: 4.0 * curve.a,
            kind: CriticalKind::Boundary,
        },
    ]
}

fn perimeter_point(curve: &MixedCurve2D, rect: Rectangle, kind: CriticalKind) -> CriticalPoint {
    let lambda = curve.a.powf(curve.alpha) / (curve.alpha * rect.x.powf(curve.alpha - 1.0));
    CriticalPoint {
        rect,
        lambda,
        objective_value: 4.0 * (rect.x + rect.y),
        kind,
    }
}

/// Stationary rectangles of the perimeter `4(x + y)`.
///
/// Equal exponents use the closed form and the bordered Hessian. Mixed
/// exponents reduce to `F(u) = Au + B(1-u^α)^{1/β}` on `(0, 1)`; `F'` is
/// monotone on each side of the single possible inflection point of `F`, so
/// every zero of `F'` is bracketed exactly. The two degenerate rectangles
/// `(0, B)` and `(A, 0)` are always reported as boundary points.
pub fn optimal_perimeter_rects(curve: &MixedCurve2D) -> SolveReport {
    let mut points: Vec<CriticalPoint> = boundary_points(curve).to_vec();

    if curve.equal_exponents() {
        if curve.alpha == 1.0 {
            let existence_note = if curve.a == curve.b {
                ExistenceNote::DegenerateAllEqual
            } else {
                ExistenceNote::NeitherExists
            };
            return SolveReport {
                critical_points: points,
                global_max: None,
                global_min: None,
                existence_note,
            };
        }
        let rect = equal_exponent_perimeter_rect(curve);
        let kind = match classify_perimeter_stationary(curve, rect) {
            Ok(StationaryClass::Max) => CriticalKind::InteriorMax,
            Ok(StationaryClass::Min) => CriticalKind::InteriorMin,
            _ => unreachable!("alpha != 1 gives a non-zero bordered Hessian"),
        };
        points.insert(0, perimeter_point(curve, rect, kind));
        return finish_report(points);
    }

    let mut interior = mixed_perimeter_points(curve);
    interior.append(&mut points);
    finish_report(interior)
}

/// Stationary rectangle of the perimeter for `α = β ≠ 1`, written as
/// `x = m·r_A/(r_A + r_B)^{1/α}` with `r = (side/m)^{α/(α-1)}` so the large
/// powers near `α = 1` cannot overflow.
fn equal_exponent_perimeter_rect(curve: &MixedCurve2D) -> Rectangle {
    let alpha = curve.alpha;
    let k = alpha / (alpha - 1.0);
    let m = if k > 0.0 { curve.a.max(curve.b) } else { curve.a.min(curve.b) };
    let ra = (curve.a / m).powf(k);
    let rb = (curve.b / m).powf(k);
    let denom = (ra + rb).powf(1.0 / alpha);
    Rectangle {
        x: m * ra / denom,
        y: m * rb / denom,
    }
}

const EDGE_OFFSET: f64 = 1e-9;

fn mixed_perimeter_points(curve: &MixedCurve2D) -> Vec<CriticalPoint> {
    let MixedCurve2D { a, b, alpha, .. } = *curve;
    let delta = curve.delta();

    // F'(u) with the power term evaluated in log space
    let fprime = |u: f64| {
        let ln_u = u.ln();
        let ln_w = (-(alpha * ln_u).exp_m1()).ln();
        a - b * alpha * delta * ((alpha - 1.0) * ln_u + (delta - 1.0) * ln_w).exp()
    };
    // sign(F'') = -sign(g)
    let g = |u: f64| {
        let ua = u.powf(alpha);
        (alpha - 1.0) * (1.0 - ua) + (1.0 - delta) * alpha * ua
    };

    let mut cuts = vec![EDGE_OFFSET];
    let ratio = (alpha - 1.0) / (alpha * delta - 1.0);
    if ratio > 0.0 && ratio.is_finite() {
        let inflection = ratio.powf(1.0 / alpha);
        if inflection > EDGE_OFFSET && inflection < 1.0 - EDGE_OFFSET {
            cuts.push(inflection);
        }
    }
    cuts.push(1.0 - EDGE_OFFSET);

    let mut out = Vec::new();
    for pair in cuts.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        let Ok(bracket) = Bracket::new(fprime, lo, hi) else {
            continue;
        };
        let Ok(root) = numerics::find_root(fprime, bracket, numerics::DEFAULT_ATOL) else {
            continue;
        };
        let u = root.root;
        let kind = if g(u) > 0.0 {
            CriticalKind::InteriorMax
        } else {
            CriticalKind::InteriorMin
        };
        out.push(perimeter_point(curve, curve.rect_at_u(u), kind));
    }
    out
}

/// The square vertex `x = y = s` with `(s/A)^α + (s/B)^β = 1`; it has the
/// largest `S/P²` (always `1/16`).
pub fn best_ratio_rect(curve: &MixedCurve2D) -> Result<(Rectangle, RectMetrics), GeometryError> {
    let f = |s: f64| curve.residual(s, s);
    let s = numerics::solve_bracketed(f, 0.0, curve.a.min(curve.b))?;
    let rect = Rectangle { x: s, y: s };
    Ok((rect, rect.metrics()))
}

/// Ratio of the best inscribed rectangle area to the area enclosed by the
/// superellipse of exponent `α`: `α / (2^{2/α} B(1/α, 1/α + 1))`.
pub fn fill_ratio(alpha: f64) -> Result<f64, GeometryError> {
    let alpha = check_positive("alpha", alpha)?;
    let p = 1.0 / alpha;
    if 2.0 * p < 1000.0 {
        Ok(alpha / (2f64.powf(2.0 * p) * numerics::beta_fn(p, p + 1.0)?))
    } else {
        let ln_beta =
            numerics::ln_gamma(p)? + numerics::ln_gamma(p + 1.0)? - numerics::ln_gamma(2.0 * p + 1.0)?;
        Ok((alpha.ln() - 2.0 * p * std::f64::consts::LN_2 - ln_beta).exp())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn ellipse_max_area() {
        let c = MixedCurve2D::ellipse(4.0, 3.0).unwrap();
        let (r, m) = max_area_rect(&c);
        assert!(rel(r.x, 4.0 / 2f64.sqrt()) < 1e-15);
        assert!(rel(r.y, 3.0 / 2f64.sqrt()) < 1e-15);
        assert!(rel(m.area, 24.0) < 1e-14);
        let cp = max_area_critical_point(&c);
        assert!(c.area_stationarity(cp.rect, cp.lambda) < 1e-12);
    }

    #[test]
    fn symmetric_superellipse_max_area_is_square() {
        for alpha in [0.3, 1.0, 2.5, 7.0] {
            let c = MixedCurve2D::superellipse(1.0, 1.0, alpha).unwrap();
            let (r, _) = max_area_rect(&c);
            let side = 2f64.powf(-1.0 / alpha);
            assert!(rel(r.x, side) < 1e-14 && rel(r.y, side) < 1e-14);
        }
    }

    #[test]
    fn mixed_max_area() {
        let c = MixedCurve2D::new(3.0, 4.0, 3.0, 0.5).unwrap();
        let (r, m) = max_area_rect(&c);
        assert!(rel(r.x, 3.0 * (1f64 / 7.0).cbrt()) < 1e-14);
        assert!(rel(r.y, 4.0 * (6f64 / 7.0).powi(2)) < 1e-14);
        // 30-digit evaluation of the closed form
        assert!(rel(m.area, 18.435_219_437_083_658) < 1e-13);
        assert!(c.residual(r.x, r.y).abs() < 1e-12);
    }

    #[test]
    fn superellipse_cubic_max_perimeter() {
        let c = MixedCurve2D::superellipse(1.0, 2.0, 3.0).unwrap();
        let rep = optimal_perimeter_rects(&c);
        assert_eq!(rep.existence_note, ExistenceNote::UniqueMaxNoMin);
        let best = rep.global_max.unwrap();
        assert!(rel(best.rect.x, 0.6392340079) < 1e-9);
        assert!(rel(best.rect.y, 1.808026807) < 1e-9);
        assert!(rel(best.objective_value, 9.789043256) < 1e-9);
        assert!(c.perimeter_stationarity(best.rect, best.lambda) < 1e-12);
    }

    #[test]
    fn superellipse_cube_root_min_perimeter() {
        let c = MixedCurve2D::superellipse(1.0, 8.0, 1.0 / 3.0).unwrap();
        let rep = optimal_perimeter_rects(&c);
        assert_eq!(rep.existence_note, ExistenceNote::UniqueMinNoMax);
        let best = rep.global_min.unwrap();
        assert!(rel(best.rect.x, 0.4032494905) < 1e-8);
        assert!(rel(best.rect.y, 0.1425702245) < 1e-8);
        assert!(rel(best.objective_value, 2.183278859) < 1e-8);
        // closed form 1/(1 + 1/(2√2))^3
        let exact = 1.0 / (1.0 + 1.0 / (2.0 * 2f64.sqrt())).powi(3);
        assert!(rel(best.rect.x, exact) < 1e-14);
    }

    #[test]
    fn mixed_perimeter_has_max_and_min() {
        let c = MixedCurve2D::new(3.0, 4.0, 3.0, 0.5).unwrap();
        let rep = optimal_perimeter_rects(&c);
        assert_eq!(rep.existence_note, ExistenceNote::BothExist);
        let max = rep.global_max.unwrap();
        let min = rep.global_min.unwrap();
        assert!(rel(max.rect.x, 1.086810566) < 1e-8);
        assert!(rel(max.rect.y, 3.628687998) < 1e-8);
        assert!(rel(min.rect.x, 2.855105222) < 1e-8);
        assert!(rel(min.rect.y, 0.07618624391) < 1e-8);
        for cp in [max, min] {
            assert!(c.perimeter_stationarity(cp.rect, cp.lambda) < 1e-9);
            // the reduced quintic also vanishes at x
            let x = cp.rect.x;
            assert!((8.0 / 27.0 * x.powi(5) - 8.0 * x * x + 9.0).abs() < 1e-9);
        }
    }

    #[test]
    fn mixed_perimeter_without_interior_points() {
        // a wide curve: F' > 0 throughout, so the perimeter only grows toward (A, 0)
        let c = MixedCurve2D::new(100.0, 4.0, 3.0, 0.5).unwrap();
        let rep = optimal_perimeter_rects(&c);
        assert_eq!(rep.interior(CriticalKind::InteriorMax).count(), 0);
        assert_eq!(rep.existence_note, ExistenceNote::NeitherExists);
        assert_eq!(rep.supremum(), Some(400.0));
    }

    #[test]
    fn ellipse_perimeter_exact() {
        let c = MixedCurve2D::ellipse(4.0, 3.0).unwrap();
        let best = optimal_perimeter_rects(&c).global_max.unwrap();
        assert!((best.rect.x - 16.0 / 5.0).abs() < 1e-14);
        assert!((best.rect.y - 9.0 / 5.0).abs() < 1e-14);
        assert!((best.objective_value - 20.0).abs() < 1e-13);
    }

    #[test]
    fn linear_exponent_cases() {
        let square = MixedCurve2D::superellipse(2.0, 2.0, 1.0).unwrap();
        let rep = optimal_perimeter_rects(&square);
        assert_eq!(rep.existence_note, ExistenceNote::DegenerateAllEqual);
        assert!(rep.global_max.is_none() && rep.global_min.is_none());

        let rhombus = MixedCurve2D::superellipse(3.0, 2.0, 1.0).unwrap();
        let rep = optimal_perimeter_rects(&rhombus);
        assert_eq!(rep.existence_note, ExistenceNote::NeitherExists);
        assert!(rep.critical_points.iter().all(|c| c.kind == CriticalKind::Boundary));
        assert_eq!(rep.supremum(), Some(12.0));
        assert_eq!(rep.infimum(), Some(8.0));
    }

    #[test]
    fn near_unit_exponent_does_not_overflow() {
        let c = MixedCurve2D::superellipse(1.05, 1.0, 1.01).unwrap();
        let rep = optimal_perimeter_rects(&c);
        let best = rep.interior(CriticalKind::InteriorMax).next().unwrap();
        assert!(best.rect.x.is_finite() && best.rect.y > 0.0);
        assert!(c.residual(best.rect.x, best.rect.y).abs() < 1e-9);
    }

    #[test]
    fn bordered_hessian_matches_determinant() {
        // expand the 3x3 bordered determinant directly
        for (alpha, x, y, a, b) in [(3.0, 0.6, 1.8, 1.0, 2.0), (0.4, 0.3, 0.2, 1.0, 8.0), (2.0, 1.0, 1.5, 4.0, 3.0)] {
            let c = MixedCurve2D::superellipse(a, b, alpha).unwrap();
            let p = alpha * f64::powf(x, alpha - 1.0) / f64::powf(a, alpha);
            let q = alpha * f64::powf(y, alpha - 1.0) / f64::powf(b, alpha);
            let r = alpha * (1.0 - alpha) * f64::powf(x, alpha - 2.0) / f64::powf(a, alpha);
            let s = alpha * (1.0 - alpha) * f64::powf(y, alpha - 2.0) / f64::powf(b, alpha);
            let det = -p * p * s - q * q * r;
            let h = perimeter_bordered_hessian(&c, Rectangle { x, y }).unwrap();
            assert!(rel(h, det) < 1e-12, "{h} vs {det}");
        }
    }

    #[test]
    fn classifier() {
        let c = MixedCurve2D::superellipse(1.0, 2.0, 3.0).unwrap();
        let r = Rectangle::new(0.6392340079, 1.808026807).unwrap();
        assert_eq!(classify_perimeter_stationary(&c, r).unwrap(), StationaryClass::Max);
        let c = MixedCurve2D::superellipse(1.0, 8.0, 1.0 / 3.0).unwrap();
        let r = Rectangle::new(0.4032494905, 0.1425702245).unwrap();
        assert_eq!(classify_perimeter_stationary(&c, r).unwrap(), StationaryClass::Min);
        let c = MixedCurve2D::superellipse(1.0, 1.0, 1.0).unwrap();
        assert_eq!(
            classify_perimeter_stationary(&c, Rectangle::new(0.5, 0.5).unwrap()).unwrap(),
            StationaryClass::Degenerate
        );
        let c = MixedCurve2D::new(1.0, 1.0, 2.0, 3.0).unwrap();
        assert!(matches!(
            classify_perimeter_stationary(&c, Rectangle::new(0.5, 0.5).unwrap()),
            Err(GeometryError::ExponentMismatch { .. })
        ));
    }

    #[test]
    fn ratio_optimum_is_square() {
        let c = MixedCurve2D::ellipse(4.0, 3.0).unwrap();
        let (r, m) = best_ratio_rect(&c).unwrap();
        assert!((r.x - 2.4).abs() < 1e-12);
        assert!((m.ratio - 1.0 / 16.0).abs() < 1e-15);

        let c = MixedCurve2D::new(3.0, 4.0, 3.0, 0.5).unwrap();
        let (r, _) = best_ratio_rect(&c).unwrap();
        assert!((r.x.powi(3) / 27.0 + r.x.sqrt() / 2.0 - 1.0).abs() < 1e-12);
        assert!((r.x - 1.994_512_264_561_13).abs() < 1e-10);

        let c = MixedCurve2D::superellipse(5.0, 5.0, 3.0).unwrap();
        let (r, _) = best_ratio_rect(&c).unwrap();
        assert!(rel(r.x, 5.0 * 2f64.powf(-1.0 / 3.0)) < 1e-12);
    }

    #[test]
    fn fill_ratio_values() {
        assert!(rel(fill_ratio(2.0).unwrap(), 2.0 / std::f64::consts::PI) < 1e-14);
        assert!(rel(fill_ratio(1.0).unwrap(), 0.5) < 1e-14);
        let r10 = fill_ratio(10.0).unwrap();
        assert!(r10 > 0.88 && r10 < 1.0);
        assert!(rel(r10, 0.883_151_389_889_368_6) < 1e-12);
        assert!(rel(fill_ratio(0.1).unwrap(), 0.176_197_052_001_953_13) < 1e-12);
        assert!(fill_ratio(0.0).is_err());
        // log route for tiny exponents stays in (0, 1)
        let tiny = fill_ratio(1e-3).unwrap();
        assert!(tiny > 0.0 && tiny < fill_ratio(0.1).unwrap());
    }

    #[test]
    fn fill_ratio_matches_enclosed_area_route() {
        for alpha in [0.4, 1.0, 2.0, 3.0, 6.5] {
            let c = MixedCurve2D::superellipse(2.0, 3.0, alpha).unwrap();
            let via_area = max_area_rect(&c).1.area / c.enclosed_area().unwrap();
            assert!(rel(fill_ratio(alpha).unwrap(), via_area) < 1e-12);
        }
    }

    #[test]
    fn samples_lie_on_curve() {
        let c = MixedCurve2D::new(3.0, 4.0, 3.0, 0.5).unwrap();
        for (x, y) in c.first_quadrant_samples(200) {
            assert!(c.residual(x, y).abs() < 1e-12);
        }
    }

    #[test]
    fn invalid_parameters() {
        assert!(MixedCurve2D::new(0.0, 1.0, 2.0, 2.0).is_err());
        assert!(MixedCurve2D::new(1.0, 1.0, f64::NAN, 2.0).is_err());
        assert!(Rectangle::new(-1.0, 1.0).is_err());
    }
}
