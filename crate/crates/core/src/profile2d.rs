//! General symmetric curves `|y| = f(|x|)` with `f` continuous and strictly
//! decreasing on `[0, A]`, `f(0) = B`, `f(A) = 0`.
//!
//! Besides the solvers this module hosts two concrete families: the built-in
//! piecewise profile with two equal-area maximizers ([`twin_maximizer_profile`])
//! and profiles whose area maximizers are a prescribed finite union of
//! points and intervals ([`construct_profile`]).

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curves2d::{
    finish_report, CriticalKind, CriticalPoint, ExistenceNote, GeometryError, InscribingCurve,
    MixedCurve2D, Rectangle, SolveReport,
};
use crate::numerics::{self, NumericsError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProfileError {
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("profile does not provide first and second derivatives")]
    MissingDerivatives,
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Grid used by the scan-and-refine solvers.
pub const SCAN_POINTS: usize = 100_000;
/// Golden-section steps applied to every grid basin.
pub const REFINE_STEPS: usize = 40;
/// Relative gap under which two refined maxima count as equal.
pub const GLOBAL_TIE: f64 = 1e-9;
const VALIDATION_POINTS: usize = 10_000;

/// One closed-form piece of a [`PiecewisePoly`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Piece {
    /// `Σ coeffs[k] (x - center)^k`.
    Polynomial { center: f64, coeffs: Vec<f64> },
    /// `scale (offset - √x)²`.
    RootSquare { scale: f64, offset: f64 },
    /// `1/x`.
    Reciprocal,
    /// `1/x - eps (x - a)² (x - b)²`.
    ReciprocalBump { eps: f64, a: f64, b: f64 },
}

impl Piece {
    pub fn value(&self, x: f64) -> f64 {
        match self {
            Piece::Polynomial { center, coeffs } => {
                let t = x - center;
                coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
            }
            Piece::RootSquare { scale, offset } => {
                let r = offset - x.sqrt();
                scale * r * r
            }
            Piece::Reciprocal => 1.0 / x,
            Piece::ReciprocalBump { eps, a, b } => {
                let q = (x - a) * (x - b);
                1.0 / x - eps * q * q
            }
        }
    }

    pub fn deriv1(&self, x: f64) -> f64 {
        match self {
            Piece::Polynomial { center, coeffs } => {
                let t = x - center;
                coeffs
                    .iter()
                    .enumerate()
                    .skip(1)
                    .rev()
                    .fold(0.0, |acc, (k, &c)| acc * t + k as f64 * c)
            }
            Piece::RootSquare { scale, offset } => -scale * (offset - x.sqrt()) / x.sqrt(),
            Piece::Reciprocal => -1.0 / (x * x),
            Piece::ReciprocalBump { eps, a, b } => {
                -1.0 / (x * x) - eps * 2.0 * (x - a) * (x - b) * (2.0 * x - a - b)
            }
        }
    }

    pub fn deriv2(&self, x: f64) -> f64 {
        match self {
            Piece::Polynomial { center, coeffs } => {
                let t = x - center;
                coeffs
                    .iter()
                    .enumerate()
                    .skip(2)
                    .rev()
                    .fold(0.0, |acc, (k, &c)| acc * t + (k * (k - 1)) as f64 * c)
            }
            Piece::RootSquare { scale, offset } => scale * offset / (2.0 * x * x.sqrt()),
            Piece::Reciprocal => 2.0 / (x * x * x),
            Piece::ReciprocalBump { eps, a, b } => {
                let (u, v) = (x - a, x - b);
                2.0 / (x * x * x) - eps * 2.0 * (v * v + 4.0 * u * v + u * u)
            }
        }
    }
}

/// Pieces on `[bp0, bp1], (bp1, bp2], …`; `breakpoints` has one more entry
/// than `pieces`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewisePoly {
    pub breakpoints: Vec<f64>,
    pub pieces: Vec<Piece>,
}

/// Jumps of value and slope across an interior breakpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointDefect {
    pub at: f64,
    pub value_jump: f64,
    pub slope_jump: f64,
}

impl PiecewisePoly {
    pub fn new(breakpoints: Vec<f64>, pieces: Vec<Piece>) -> Result<Self, ProfileError> {
        if pieces.is_empty() || breakpoints.len() != pieces.len() + 1 {
            return Err(ProfileError::InvalidProfile(format!(
                "{} breakpoints for {} pieces",
                breakpoints.len(),
                pieces.len()
            )));
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(ProfileError::InvalidProfile("breakpoints must ascend".into()));
        }
        Ok(Self { breakpoints, pieces })
    }

    fn piece(&self, x: f64) -> &Piece {
        let idx = self.breakpoints[1..self.breakpoints.len() - 1].partition_point(|&bp| bp < x);
        &self.pieces[idx]
    }

    pub fn value(&self, x: f64) -> f64 {
        self.piece(x).value(x)
    }

    pub fn deriv1(&self, x: f64) -> f64 {
        self.piece(x).deriv1(x)
    }

    pub fn deriv2(&self, x: f64) -> f64 {
        self.piece(x).deriv2(x)
    }

    pub fn joint_defects(&self) -> Vec<JointDefect> {
        self.breakpoints[1..self.breakpoints.len() - 1]
            .iter()
            .enumerate()
            .map(|(i, &at)| {
                let (left, right) = (&self.pieces[i], &self.pieces[i + 1]);
                JointDefect {
                    at,
                    value_jump: right.value(at) - left.value(at),
                    slope_jump: right.deriv1(at) - left.deriv1(at),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileKind {
    AnalyticFormula,
    PiecewisePolynomial,
    Constructed,
}

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Repr {
    Mixed(MixedCurve2D),
    Piecewise(PiecewisePoly),
    Func {
        f: ScalarFn,
        d1: Option<ScalarFn>,
        d2: Option<ScalarFn>,
    },
}

/// A strictly decreasing profile `f` on `[0, A]` with `f(0) = B`, `f(A) = 0`.
#[derive(Clone)]
pub struct ProfileCurve {
    a: f64,
    b: f64,
    kind: ProfileKind,
    repr: Repr,
}

impl fmt::Debug for ProfileCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let repr = match &self.repr {
            Repr::Mixed(c) => format!("{c:?}"),
            Repr::Piecewise(p) => format!("{} pieces", p.pieces.len()),
            Repr::Func { .. } => "closure".to_string(),
        };
        f.debug_struct("ProfileCurve")
            .field("a", &self.a)
            .field("b", &self.b)
            .field("kind", &self.kind)
            .field("repr", &repr)
            .finish()
    }
}

impl ProfileCurve {
    /// First-quadrant arc of a mixed-exponent curve, with exact derivatives.
    pub fn from_mixed(curve: MixedCurve2D) -> Self {
        Self {
            a: curve.a,
            b: curve.b,
            kind: ProfileKind::AnalyticFormula,
            repr: Repr::Mixed(curve),
        }
    }

    /// Wraps closures; `B` is taken as `f(0)`. The invariants are checked.
    pub fn from_fn<F>(a: f64, f: F, d1: Option<ScalarFn>, d2: Option<ScalarFn>) -> Result<Self, ProfileError>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let a = crate::curves2d::check_positive("A", a)?;
        let b = f(0.0);
        let curve = Self {
            a,
            b,
            kind: ProfileKind::AnalyticFormula,
            repr: Repr::Func { f: Arc::new(f), d1, d2 },
        };
        curve.validate()?;
        Ok(curve)
    }

    pub fn from_piecewise(poly: PiecewisePoly, kind: ProfileKind) -> Result<Self, ProfileError> {
        let a = *poly.breakpoints.last().unwrap();
        let b = poly.value(poly.breakpoints[0]);
        let curve = Self {
            a,
            b,
            kind,
            repr: Repr::Piecewise(poly),
        };
        curve.validate()?;
        Ok(curve)
    }

    /// `A`, the end of the domain.
    pub fn a(&self) -> f64 {
        self.a
    }

    /// `B = f(0)`.
    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    pub fn piecewise(&self) -> Option<&PiecewisePoly> {
        match &self.repr {
            Repr::Piecewise(p) => Some(p),
            _ => None,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match &self.repr {
            Repr::Mixed(c) => c.height_at(x),
            Repr::Piecewise(p) => p.value(x),
            Repr::Func { f, .. } => f(x),
        }
    }

    pub fn deriv1(&self, x: f64) -> Option<f64> {
        match &self.repr {
            Repr::Mixed(c) => Some(mixed_derivs(c, x).0),
            Repr::Piecewise(p) => Some(p.deriv1(x)),
            Repr::Func { d1, .. } => d1.as_ref().map(|d| d(x)),
        }
    }

    pub fn deriv2(&self, x: f64) -> Option<f64> {
        match &self.repr {
            Repr::Mixed(c) => Some(mixed_derivs(c, x).1),
            Repr::Piecewise(p) => Some(p.deriv2(x)),
            Repr::Func { d2, .. } => d2.as_ref().map(|d| d(x)),
        }
    }

    pub fn has_derivatives(&self) -> bool {
        match &self.repr {
            Repr::Func { d1, d2, .. } => d1.is_some() && d2.is_some(),
            _ => true,
        }
    }

    /// Checks `f(0) = B`, `f(A) = 0` and strict decrease on a 10⁴-point grid.
    pub fn validate(&self) -> Result<(), ProfileError> {
        if !(self.b > 0.0) || !self.b.is_finite() {
            return Err(ProfileError::InvalidProfile(format!("f(0) = {} is not positive", self.b)));
        }
        let end = self.eval(self.a);
        if end.abs() > 1e-9 {
            return Err(ProfileError::InvalidProfile(format!("f(A) = {end}, expected 0")));
        }
        let mut prev = self.eval(0.0);
        for i in 1..=VALIDATION_POINTS {
            let x = self.a * i as f64 / VALIDATION_POINTS as f64;
            let v = self.eval(x);
            if !(v < prev) {
                return Err(ProfileError::InvalidProfile(format!(
                    "f not strictly decreasing near x = {x}"
                )));
            }
            prev = v;
        }
        Ok(())
    }

    /// JSON description (pieces and breakpoints, or the curve parameters).
    /// Closure-backed profiles have no description.
    pub fn to_json(&self) -> Option<serde_json::Value> {
        let body = match &self.repr {
            Repr::Mixed(c) => serde_json::json!({ "curve": c }),
            Repr::Piecewise(p) => serde_json::to_value(p).ok()?,
            Repr::Func { .. } => return None,
        };
        Some(serde_json::json!({
            "a": self.a,
            "b": self.b,
            "kind": self.kind,
            "definition": body,
        }))
    }

    /// Rebuilds a profile from [`ProfileCurve::to_json`] output.
    pub fn from_json(value: &serde_json::Value) -> Result<Self, ProfileError> {
        let bad = |e: serde_json::Error| ProfileError::InvalidProfile(e.to_string());
        let kind: ProfileKind = serde_json::from_value(value["kind"].clone()).map_err(bad)?;
        let def = &value["definition"];
        if let Some(curve) = def.get("curve") {
            let c: MixedCurve2D = serde_json::from_value(curve.clone()).map_err(bad)?;
            let c = MixedCurve2D::new(c.a, c.b, c.alpha, c.beta)?;
            return Ok(Self::from_mixed(c));
        }
        let poly: PiecewisePoly = serde_json::from_value(def.clone()).map_err(bad)?;
        let poly = PiecewisePoly::new(poly.breakpoints, poly.pieces)?;
        Self::from_piecewise(poly, kind)
    }
}

fn mixed_derivs(c: &MixedCurve2D, x: f64) -> (f64, f64) {
    let (alpha, delta) = (c.alpha, c.delta());
    let u = x / c.a;
    let w = 1.0 - u.powf(alpha);
    let w1 = -alpha * u.powf(alpha - 1.0) / c.a;
    let w2 = -alpha * (alpha - 1.0) * u.powf(alpha - 2.0) / (c.a * c.a);
    let d1 = c.b * delta * w.powf(delta - 1.0) * w1;
    let d2 = c.b * delta * ((delta - 1.0) * w.powf(delta - 2.0) * w1 * w1 + w.powf(delta - 1.0) * w2);
    (d1, d2)
}

impl InscribingCurve for ProfileCurve {
    fn x_extent(&self) -> f64 {
        self.a
    }

    fn y_extent(&self) -> f64 {
        self.b
    }

    fn height_at(&self, x: f64) -> f64 {
        self.eval(x.clamp(0.0, self.a))
    }

    fn first_quadrant_samples(&self, n: usize) -> Vec<(f64, f64)> {
        match &self.repr {
            Repr::Mixed(c) => c.first_quadrant_samples(n),
            _ => {
                let n = n.max(2);
                (0..n)
                    .map(|i| {
                        let x = self.a * i as f64 / (n - 1) as f64;
                        (x, self.eval(x))
                    })
                    .collect()
            }
        }
    }
}

fn scan(profile: &ProfileCurve, n: usize, g: impl Fn(f64) -> f64) -> (Vec<f64>, Vec<f64>) {
    let xs: Vec<f64> = (0..=n).map(|i| profile.a * i as f64 / n as f64).collect();
    let vs = xs.iter().map(|&x| g(x)).collect();
    (xs, vs)
}

/// Refines every grid-local maximum of `g` and returns `(x, g(x))` pairs.
fn refined_local_maxima(xs: &[f64], vs: &[f64], g: &impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
    (1..xs.len() - 1)
        .filter(|&i| vs[i] >= vs[i - 1] && vs[i] >= vs[i + 1])
        .map(|i| numerics::golden_section_max(g, xs[i - 1], xs[i + 1], REFINE_STEPS))
        .collect()
}

/// Sorts by `x` and keeps one representative (the best) per cluster of
/// points closer than `gap` to their neighbour.
fn cluster(mut pts: Vec<(f64, f64)>, gap: f64) -> Vec<(f64, f64)> {
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, f64)> = Vec::new();
    let mut last_x = f64::NEG_INFINITY;
    for p in pts {
        match out.last_mut() {
            Some(best) if p.0 - last_x <= gap => {
                if p.1 > best.1 {
                    *best = p;
                }
            }
            _ => out.push(p),
        }
        last_x = p.0;
    }
    out
}

/// All global maximizers of the area `4x f(x)`.
///
/// A 10⁵-point scan finds every basin, each basin is refined by golden
/// section, and refined values within `1e-9` (relative) of the best are all
/// reported. Maximizers closer than `max(tol, 2h)` are merged into one.
pub fn max_area_rects(profile: &ProfileCurve, tol: f64) -> SolveReport {
    let g = |x: f64| x * profile.eval(x);
    let (xs, vs) = scan(profile, SCAN_POINTS, g);
    let h = profile.a / SCAN_POINTS as f64;
    let maxima = refined_local_maxima(&xs, &vs, &g);
    let best = maxima.iter().map(|m| m.1).fold(f64::NEG_INFINITY, f64::max);
    let winners: Vec<(f64, f64)> = maxima
        .into_iter()
        .filter(|m| m.1 >= best - GLOBAL_TIE * best.abs())
        .collect();
    let winners = cluster(winners, tol.max(2.0 * h));

    let critical_points: Vec<CriticalPoint> = winners
        .iter()
        .map(|&(x, v)| CriticalPoint {
            rect: Rectangle { x, y: profile.eval(x) },
            // y - f(x) = 0 constraint: ∂/∂y gives λ = x
            lambda: x,
            objective_value: 4.0 * v,
            kind: CriticalKind::InteriorMax,
        })
        .collect();
    let global_max = critical_points
        .iter()
        .copied()
        .reduce(|a, b| if b.objective_value > a.objective_value { b } else { a });
    let existence_note = if critical_points.len() > 1 {
        ExistenceNote::MultipleMax
    } else {
        ExistenceNote::UniqueMaxNoMin
    };
    SolveReport {
        critical_points,
        global_max,
        global_min: None,
        existence_note,
    }
}

/// The set of `x` where `x f(x)` equals its maximum to within four ulps,
/// as closed intervals (isolated points have `lo == hi`).
///
/// Built from a scan with spacing at most `step` plus golden-section
/// refinement of every grid basin, so isolated maximizers between grid
/// points are still found.
pub fn area_maximizer_set(profile: &ProfileCurve, step: f64) -> Vec<(f64, f64)> {
    let n = ((profile.a / step).ceil() as usize).max(2);
    let h = profile.a / n as f64;
    let g = |x: f64| x * profile.eval(x);
    let (xs, vs) = scan(profile, n, g);
    let refined = refined_local_maxima(&xs, &vs, &g);
    let best = vs
        .iter()
        .copied()
        .chain(refined.iter().map(|r| r.1))
        .fold(f64::NEG_INFINITY, f64::max);
    let threshold = best - 4.0 * f64::EPSILON * best.abs();

    let mut members: Vec<f64> = xs
        .iter()
        .zip(&vs)
        .filter(|(_, &v)| v >= threshold)
        .map(|(&x, _)| x)
        .chain(refined.iter().filter(|r| r.1 >= threshold).map(|r| r.0))
        .collect();
    members.sort_by(f64::total_cmp);

    let mut out: Vec<(f64, f64)> = Vec::new();
    for x in members {
        match out.last_mut() {
            Some(last) if x - last.1 <= 1.5 * h => last.1 = last.1.max(x),
            _ => out.push((x, x)),
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UniquenessCertificate {
    CertifiedUnique,
    NotCertified,
}

/// Sufficient test for a unique maximum-area rectangle: `2f'(t) + t f''(t)`
/// keeps one sign (and stays above `1e-8` in magnitude) on a 10⁴-point grid.
pub fn uniqueness_certificate(profile: &ProfileCurve) -> Result<UniquenessCertificate, ProfileError> {
    if !profile.has_derivatives() {
        return Err(ProfileError::MissingDerivatives);
    }
    let mut sign = 0.0f64;
    for i in 0..VALIDATION_POINTS {
        let t = profile.a * (i as f64 + 0.5) / VALIDATION_POINTS as f64;
        let h = 2.0 * profile.deriv1(t).unwrap() + t * profile.deriv2(t).unwrap();
        if !(h.abs() > 1e-8) {
            return Ok(UniquenessCertificate::NotCertified);
        }
        if sign == 0.0 {
            sign = h.signum();
        } else if h.signum() != sign {
            return Ok(UniquenessCertificate::NotCertified);
        }
    }
    Ok(UniquenessCertificate::CertifiedUnique)
}

/// Which sufficient condition for a unique perimeter extremum holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PerimeterCase {
    /// Concave `f` with `f'(0+) > -1 > f'(A-)`: unique greatest perimeter.
    ConcaveUniqueMax,
    /// Convex `f` with `f'(0+) < -1 < f'(A-)`: unique smallest perimeter.
    ConvexUniqueMin,
    NotApplicable,
    NoDerivatives,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfilePerimeterReport {
    pub report: SolveReport,
    pub case: PerimeterCase,
}

/// Stationary rectangles of the perimeter `4(x + f(x))`, by the same
/// scan-and-refine scheme as [`max_area_rects`].
pub fn perimeter_rects(profile: &ProfileCurve, tol: f64) -> ProfilePerimeterReport {
    let p = |x: f64| x + profile.eval(x);
    let (xs, vs) = scan(profile, SCAN_POINTS, p);
    let h = profile.a / SCAN_POINTS as f64;
    let boundary = [
        CriticalPoint {
            rect: Rectangle { x: 0.0, y: profile.b },
            lambda: f64::NAN,
            objective_value: 4.0 * profile.b,
            kind: CriticalKind::Boundary,
        },
        CriticalPoint {
            rect: Rectangle { x: profile.a, y: 0.0 },
            lambda: f64::NAN,
            objective_value: 4.0 * profile.a,
            kind: CriticalKind::Boundary,
        },
    ];
    let case = perimeter_case(profile);

    let (lo, hi) = vs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if hi - lo <= 1e-12 * (profile.a + profile.b) {
        return ProfilePerimeterReport {
            report: SolveReport {
                critical_points: boundary.to_vec(),
                global_max: None,
                global_min: None,
                existence_note: ExistenceNote::DegenerateAllEqual,
            },
            case,
        };
    }

    let gap = tol.max(2.0 * h);
    let maxima = cluster(refined_local_maxima(&xs, &vs, &p), gap);
    let neg = |x: f64| -p(x);
    let neg_vs: Vec<f64> = vs.iter().map(|v| -v).collect();
    let minima = cluster(refined_local_maxima(&xs, &neg_vs, &neg), gap);

    // λ = 1 for the constraint y - f(x) = 0
    let to_point = |x: f64, kind| CriticalPoint {
        rect: Rectangle { x, y: profile.eval(x) },
        lambda: 1.0,
        objective_value: 4.0 * p(x),
        kind,
    };
    let mut points: Vec<CriticalPoint> = maxima
        .iter()
        .map(|&(x, _)| to_point(x, CriticalKind::InteriorMax))
        .chain(minima.iter().map(|&(x, _)| to_point(x, CriticalKind::InteriorMin)))
        .collect();
    points.extend(boundary);
    ProfilePerimeterReport {
        report: finish_report(points),
        case,
    }
}

fn perimeter_case(profile: &ProfileCurve) -> PerimeterCase {
    if !profile.has_derivatives() {
        return PerimeterCase::NoDerivatives;
    }
    let n = VALIDATION_POINTS;
    let curv: Vec<f64> = (0..n)
        .map(|i| profile.deriv2(profile.a * (i as f64 + 0.5) / n as f64).unwrap())
        .collect();
    let concave = curv.iter().all(|&c| c <= 0.0);
    let convex = curv.iter().all(|&c| c >= 0.0);
    let start = profile.deriv1(profile.a * 1e-9).unwrap();
    let end = profile.deriv1(profile.a * (1.0 - 1e-9)).unwrap();
    if concave && start > -1.0 && end < -1.0 {
        PerimeterCase::ConcaveUniqueMax
    } else if convex && start < -1.0 && end > -1.0 {
        PerimeterCase::ConvexUniqueMin
    } else {
        PerimeterCase::NotApplicable
    }
}

/// The square vertex: the fixed point `f(x) = x`.
pub fn best_ratio_rect(profile: &ProfileCurve) -> Result<Rectangle, ProfileError> {
    let x = numerics::solve_bracketed(|x| profile.eval(x) - x, 0.0, profile.a)?;
    Ok(Rectangle { x, y: x })
}

/// The built-in convex profile on `[0, 4]` with exactly two maximum-area
/// rectangles, at `x = 1/4` and `x = 1`.
pub fn twin_maximizer_profile() -> ProfileCurve {
    let poly = PiecewisePoly::new(
        vec![0.0, 9.0 / 25.0, 16.0 / 25.0, 4.0],
        vec![
            Piece::RootSquare { scale: 4.0, offset: 1.0 },
            Piece::Polynomial {
                center: 0.0,
                coeffs: vec![851.0 / 245.0, -17401.0 / 1176.0, 14125.0 / 588.0, -15625.0 / 1176.0],
            },
            Piece::RootSquare { scale: 0.25, offset: 2.0 },
        ],
    )
    .expect("static breakpoints");
    ProfileCurve::from_piecewise(poly, ProfileKind::PiecewisePolynomial).expect("static profile is valid")
}

/// Input for [`construct_profile`]: the target maximizer set `E` as a
/// finite union of closed intervals (points have `lo == hi`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileConstructionSpec {
    pub components: Vec<(f64, f64)>,
    /// `ε_n` per gap in ascending `x` order; chosen automatically when `None`.
    pub eps_list: Option<Vec<f64>>,
    /// Right-tail curvature `ε ≤ 1/(4M³)`; defaults to the bound.
    pub eps_tail: Option<f64>,
}

impl ProfileConstructionSpec {
    pub fn new(components: Vec<(f64, f64)>) -> Result<Self, ProfileError> {
        let spec = Self {
            components,
            eps_list: None,
            eps_tail: None,
        };
        spec.normalized()?;
        Ok(spec)
    }

    fn normalized(&self) -> Result<Vec<(f64, f64)>, ProfileError> {
        let mut comps = self.components.clone();
        if comps.is_empty() {
            return Err(ProfileError::InvalidProfile("E is empty".into()));
        }
        if comps.iter().any(|&(lo, hi)| !(lo > 0.0) || !(hi >= lo) || !hi.is_finite()) {
            return Err(ProfileError::InvalidProfile("E must be closed intervals in (0, ∞)".into()));
        }
        comps.sort_by(|a, b| a.0.total_cmp(&b.0));
        if comps.windows(2).any(|w| w[1].0 <= w[0].1) {
            return Err(ProfileError::InvalidProfile("components of E must be disjoint".into()));
        }
        Ok(comps)
    }

    /// `m = min E`.
    pub fn m(&self) -> f64 {
        self.components.iter().map(|c| c.0).fold(f64::INFINITY, f64::min)
    }

    /// `M = max E`.
    pub fn big_m(&self) -> f64 {
        self.components.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Open gaps `(a_n, b_n)` with `[m, M] \ E` as their union.
    pub fn gaps(&self) -> Vec<(f64, f64)> {
        let comps = self.normalized().unwrap_or_default();
        comps.windows(2).map(|w| (w[0].1, w[1].0)).collect()
    }

    pub fn eps_tail(&self) -> f64 {
        self.eps_tail.unwrap_or(0.25 / self.big_m().powi(3))
    }

    /// Where the right tail `1/M - (x-M)/M² + ε(x-M)²` first reaches zero.
    pub fn a_out(&self) -> f64 {
        let big_m = self.big_m();
        let eps = self.eps_tail();
        let disc = (1.0 - 4.0 * eps * big_m.powi(3)).max(0.0);
        big_m + (1.0 - disc.sqrt()) / (2.0 * eps * big_m * big_m)
    }
}

const MAX_HALVINGS: usize = 60;

/// Builds a continuously differentiable, strictly decreasing, strictly
/// convex profile whose maximum-area rectangles are exactly those with
/// vertex abscissa in `E`: `f = 1/x` on `E`, `1/x - ε_n (x-a_n)²(x-b_n)²` on
/// each gap, quadratic tails on `[0, m)` and `(M, A]`.
pub fn construct_profile(spec: &ProfileConstructionSpec) -> Result<ProfileCurve, ProfileError> {
    let comps = spec.normalized()?;
    let (m, big_m) = (comps[0].0, comps[comps.len() - 1].1);
    let eps_tail = spec.eps_tail();
    if !(eps_tail > 0.0) || eps_tail > 0.25 / big_m.powi(3) * (1.0 + 1e-12) {
        return Err(ProfileError::InvalidProfile(format!(
            "tail epsilon {eps_tail} outside (0, 1/(4M^3)]"
        )));
    }
    let gaps = spec.gaps();
    if let Some(list) = &spec.eps_list {
        if list.len() != gaps.len() || list.iter().any(|&e| !(e > 0.0)) {
            return Err(ProfileError::InvalidProfile("eps_list must give one positive value per gap".into()));
        }
    }

    // gap rank by decreasing length drives the default 2^{-n} schedule
    let mut order: Vec<usize> = (0..gaps.len()).collect();
    order.sort_by(|&i, &j| (gaps[j].1 - gaps[j].0).total_cmp(&(gaps[i].1 - gaps[i].0)));
    let mut eps = vec![0.0; gaps.len()];
    for (rank, &gi) in order.iter().enumerate() {
        let (a, b) = gaps[gi];
        let mut e = match &spec.eps_list {
            Some(list) => list[gi],
            None => (0.25f64).min(16.0 / (b - a).powi(4)) * 0.5f64.powi(rank as i32 + 1),
        };
        let mut ok = false;
        for _ in 0..MAX_HALVINGS {
            if bump_is_valid(e, a, b) {
                ok = true;
                break;
            }
            e *= 0.5;
        }
        if !ok {
            return Err(ProfileError::ConstructionFailed(format!("no epsilon works on gap ({a}, {b})")));
        }
        eps[gi] = e;
    }

    let a_out = spec.a_out();
    let mut breakpoints = vec![0.0, m];
    let mut pieces = vec![Piece::Polynomial {
        center: m,
        coeffs: vec![1.0 / m, -1.0 / (m * m), 1.0 / (m * m * m)],
    }];
    for (i, &(lo, hi)) in comps.iter().enumerate() {
        if hi > lo {
            breakpoints.push(hi);
            pieces.push(Piece::Reciprocal);
        }
        if let Some(&(a, b)) = gaps.get(i) {
            breakpoints.push(b);
            pieces.push(Piece::ReciprocalBump { eps: eps[i], a, b });
        }
    }
    breakpoints.push(a_out);
    pieces.push(Piece::Polynomial {
        center: big_m,
        coeffs: vec![1.0 / big_m, -1.0 / (big_m * big_m), eps_tail],
    });

    let poly = PiecewisePoly::new(breakpoints, pieces)?;
    let profile = ProfileCurve::from_piecewise(poly, ProfileKind::Constructed)
        .map_err(|e| ProfileError::ConstructionFailed(e.to_string()))?;
    check_convex(&profile).map_err(ProfileError::ConstructionFailed)?;
    Ok(profile)
}

fn bump_is_valid(eps: f64, a: f64, b: f64) -> bool {
    let piece = Piece::ReciprocalBump { eps, a, b };
    (0..=256).all(|i| {
        let x = a + (b - a) * i as f64 / 256.0;
        piece.deriv1(x) < 0.0 && piece.deriv2(x) > 0.0
    })
}

fn check_convex(profile: &ProfileCurve) -> Result<(), String> {
    let n = VALIDATION_POINTS;
    for i in 0..n {
        let x = profile.a * (i as f64 + 0.5) / n as f64;
        let (d1, d2) = (profile.deriv1(x).unwrap(), profile.deriv2(x).unwrap());
        if !(d1 < 0.0) || !(d2 > 0.0) {
            return Err(format!("f' = {d1}, f'' = {d2} at x = {x}"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ellipse(a: f64, b: f64) -> ProfileCurve {
        ProfileCurve::from_mixed(MixedCurve2D::ellipse(a, b).unwrap())
    }

    fn line() -> ProfileCurve {
        ProfileCurve::from_fn(
            1.0,
            |x| 1.0 - x,
            Some(Arc::new(|_| -1.0)),
            Some(Arc::new(|_| 0.0)),
        )
        .unwrap()
    }

    #[test]
    fn twin_profile_values_and_joints() {
        let f = twin_maximizer_profile();
        assert_eq!(f.eval(0.0), 4.0);
        assert_eq!(f.eval(4.0), 0.0);
        assert!((f.eval(9.0 / 25.0) - 0.64).abs() < 1e-12);
        for d in f.piecewise().unwrap().joint_defects() {
            assert!(d.value_jump.abs() < 1e-9, "{d:?}");
            assert!(d.slope_jump.abs() < 1e-9, "{d:?}");
        }
    }

    #[test]
    fn twin_profile_decreasing_but_not_convex_everywhere() {
        let f = twin_maximizer_profile();
        let n = 100_000;
        let mut concave_at = Vec::new();
        for i in 0..=n {
            let x = 1e-6 + (4.0 - 2e-6) * i as f64 / n as f64;
            assert!(f.deriv1(x).unwrap() < 0.0, "x = {x}");
            if f.deriv2(x).unwrap() <= 0.0 {
                concave_at.push(x);
            }
        }
        // the cubic middle piece has P'' < 0 beyond x ≈ 0.6026
        let inflection = 2.0 * 14125.0 / 588.0 / (6.0 * 15625.0 / 1176.0);
        assert!(!concave_at.is_empty());
        assert!(concave_at.iter().all(|&x| x > inflection - 1e-4 && x <= 16.0 / 25.0 + 1e-4));
    }

    #[test]
    fn ellipse_area_maximizer() {
        let rep = max_area_rects(&ellipse(4.0, 3.0), 1e-6);
        assert_eq!(rep.existence_note, ExistenceNote::UniqueMaxNoMin);
        let best = rep.global_max.unwrap();
        assert!((best.rect.x - 4.0 / 2f64.sqrt()).abs() < 1e-6);
        assert!((best.objective_value - 24.0).abs() < 1e-9);
    }

    #[test]
    fn twin_profile_two_maximizers() {
        let rep = max_area_rects(&twin_maximizer_profile(), 1e-6);
        assert_eq!(rep.existence_note, ExistenceNote::MultipleMax);
        assert_eq!(rep.critical_points.len(), 2);
        let (p, q) = (rep.critical_points[0], rep.critical_points[1]);
        assert!((p.rect.x - 0.25).abs() < 1e-6);
        assert!((q.rect.x - 1.0).abs() < 1e-6);
        assert!((p.objective_value - 1.0).abs() < 1e-9);
        assert!((p.objective_value - q.objective_value).abs() < 1e-9);
    }

    #[test]
    fn line_profile() {
        let rep = max_area_rects(&line(), 1e-6);
        assert!((rep.global_max.unwrap().rect.x - 0.5).abs() < 1e-7);
        assert_eq!(uniqueness_certificate(&line()).unwrap(), UniquenessCertificate::CertifiedUnique);
        let per = perimeter_rects(&line(), 1e-6);
        assert_eq!(per.report.existence_note, ExistenceNote::DegenerateAllEqual);
    }

    #[test]
    fn certificates() {
        assert_eq!(
            uniqueness_certificate(&ellipse(4.0, 3.0)).unwrap(),
            UniquenessCertificate::CertifiedUnique
        );
        assert_eq!(
            uniqueness_certificate(&twin_maximizer_profile()).unwrap(),
            UniquenessCertificate::NotCertified
        );
        let bare = ProfileCurve::from_fn(1.0, |x| 1.0 - x * x, None, None).unwrap();
        assert_eq!(uniqueness_certificate(&bare), Err(ProfileError::MissingDerivatives));
    }

    #[test]
    fn perimeter_cases() {
        let per = perimeter_rects(&ellipse(4.0, 3.0), 1e-7);
        assert_eq!(per.case, PerimeterCase::ConcaveUniqueMax);
        let best = per.report.global_max.unwrap();
        assert!((best.rect.x - 3.2).abs() < 1e-6);
        assert!((best.objective_value - 20.0).abs() < 1e-9);

        let curve = MixedCurve2D::superellipse(1.0, 8.0, 1.0 / 3.0).unwrap();
        let per = perimeter_rects(&ProfileCurve::from_mixed(curve), 1e-7);
        assert_eq!(per.case, PerimeterCase::ConvexUniqueMin);
        assert_eq!(per.report.existence_note, ExistenceNote::UniqueMinNoMax);
        assert!((per.report.global_min.unwrap().rect.x - 0.4032494899).abs() < 1e-6);
    }

    #[test]
    fn ratio_fixed_point() {
        let r = best_ratio_rect(&ellipse(4.0, 3.0)).unwrap();
        assert!((r.x - 2.4).abs() < 1e-12);
        let r = best_ratio_rect(&ellipse(2.0, 2.0)).unwrap();
        assert!((r.x - 2f64.sqrt()).abs() < 1e-12);
        let r = best_ratio_rect(&twin_maximizer_profile()).unwrap();
        assert!((twin_maximizer_profile().eval(r.x) - r.x).abs() < 1e-12);
    }

    #[test]
    fn mixed_derivatives_match_finite_differences() {
        let c = MixedCurve2D::new(3.0, 4.0, 3.0, 0.5).unwrap();
        let p = ProfileCurve::from_mixed(c);
        for x in [0.3, 1.0, 2.2, 2.8] {
            let h = 1e-5;
            let fd1 = (p.eval(x + h) - p.eval(x - h)) / (2.0 * h);
            let fd2 = (p.eval(x + h) - 2.0 * p.eval(x) + p.eval(x - h)) / (h * h);
            assert!((p.deriv1(x).unwrap() - fd1).abs() < 1e-6 * fd1.abs().max(1.0));
            assert!((p.deriv2(x).unwrap() - fd2).abs() < 1e-3 * fd2.abs().max(1.0));
        }
    }

    #[test]
    fn construction_single_point() {
        let spec = ProfileConstructionSpec::new(vec![(1.0, 1.0)]).unwrap();
        assert_eq!(spec.eps_tail(), 0.25);
        assert!((spec.a_out() - 3.0).abs() < 1e-15);
        let f = construct_profile(&spec).unwrap();
        assert!(f.eval(3.0).abs() < 1e-15);
        assert_eq!(f.b(), 3.0);
        let set = area_maximizer_set(&f, 1e-5);
        assert_eq!(set.len(), 1);
        assert!((set[0].0 - 1.0).abs() <= 1e-5 && (set[0].1 - 1.0).abs() <= 1e-5, "{set:?}");
    }

    #[test]
    fn construction_interval_and_points() {
        let f = construct_profile(&ProfileConstructionSpec::new(vec![(1.0, 2.0)]).unwrap()).unwrap();
        let set = area_maximizer_set(&f, 1e-5);
        assert_eq!(set.len(), 1, "{set:?}");
        assert!((set[0].0 - 1.0).abs() <= 1e-5 && (set[0].1 - 2.0).abs() <= 1e-5);

        let f = construct_profile(&ProfileConstructionSpec::new(vec![(2.0, 2.0), (1.0, 1.0)]).unwrap())
            .unwrap();
        let set = area_maximizer_set(&f, 1e-5);
        assert_eq!(set.len(), 2, "{set:?}");
        assert!((set[0].0 - 1.0).abs() <= 1e-5 && (set[1].1 - 2.0).abs() <= 1e-5);
        for d in f.piecewise().unwrap().joint_defects() {
            assert!(d.value_jump.abs() < 1e-12 && d.slope_jump.abs() < 1e-12, "{d:?}");
        }
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(ProfileConstructionSpec::new(vec![]).is_err());
        assert!(ProfileConstructionSpec::new(vec![(0.0, 1.0)]).is_err());
        assert!(ProfileConstructionSpec::new(vec![(1.0, 2.0), (1.5, 3.0)]).is_err());
        let mut spec = ProfileConstructionSpec::new(vec![(1.0, 1.0)]).unwrap();
        spec.eps_tail = Some(1.0);
        assert!(construct_profile(&spec).is_err());
    }

    #[test]
    fn smaller_tail_epsilon_keeps_profile_decreasing() {
        let mut spec = ProfileConstructionSpec::new(vec![(1.0, 1.0)]).unwrap();
        spec.eps_tail = Some(0.1);
        let f = construct_profile(&spec).unwrap();
        assert!(f.eval(spec.a_out()).abs() < 1e-12);
        assert!(spec.a_out() < 3.0);
    }

    #[test]
    fn json_round_trip() {
        let f = construct_profile(&ProfileConstructionSpec::new(vec![(1.0, 1.0), (2.0, 2.5)]).unwrap())
            .unwrap();
        let json = f.to_json().unwrap();
        let back = ProfileCurve::from_json(&json).unwrap();
        assert_eq!(back.piecewise(), f.piecewise());
        assert_eq!(back.kind(), ProfileKind::Constructed);
        let e = ProfileCurve::from_json(&ellipse(4.0, 3.0).to_json().unwrap()).unwrap();
        assert_eq!(e.eval(0.0), 3.0);
    }

    #[test]
    fn invalid_profiles() {
        assert!(ProfileCurve::from_fn(1.0, |x| 1.0 + x, None, None).is_err());
        assert!(ProfileCurve::from_fn(1.0, |x| 2.0 - x, None, None).is_err());
        assert!(PiecewisePoly::new(vec![0.0, 1.0], vec![]).is_err());
        assert!(PiecewisePoly::new(vec![1.0, 0.0], vec![Piece::Reciprocal]).is_err());
    }
}
