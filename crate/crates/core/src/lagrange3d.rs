//! Largest surface area `4(xy + xz + yz)` of a box inscribed in a general
//! superellipsoid.
//!
//! The constraint is solved for `z`, leaving a smooth objective of
//! `(u, v) = (x/A, y/B)` on the open region `u^α + v^β < 1`. Every seed of a
//! fixed lattice is pushed uphill by BFGS with backtracking, then polished by
//! Newton steps on the gradient. Flat boxes (one coordinate zero) are handled
//! separately through the three face problems.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curves2d;
use crate::surfaces3d::{self, Box3, Superellipsoid3D, SurfaceError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Lagrange3dError {
    #[error("no seed converged ({0} tried)")]
    NoConvergence(usize),
    #[error("degenerate surface: {0}")]
    DegenerateSurface(String),
    #[error("at least 8 seeds are needed, got {0}")]
    TooFewSeeds(usize),
}

impl From<SurfaceError> for Lagrange3dError {
    fn from(e: SurfaceError) -> Self {
        Lagrange3dError::DegenerateSurface(e.to_string())
    }
}

const MAX_ASCENT_STEPS: usize = 500;
const MAX_HALVINGS: usize = 40;
const MAX_POLISH_STEPS: usize = 30;
const ARMIJO: f64 = 1e-4;
/// Converged points closer than this (in `x, y, z`) are the same optimum.
pub const DEDUP_DISTANCE: f64 = 1e-7;
/// A seed ending this close to a face in normalized units counts as flat.
const BOUNDARY_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InteriorOptimum {
    pub vertex: Box3,
    pub lambda: f64,
    pub s: f64,
    /// Norm of the Lagrange system residual with the fitted `λ`.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GlobalOutcome {
    Interior { vertex: Box3, s: f64 },
    /// No interior box beats the best flat one.
    Boundary { supremum: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceAreaSolveReport {
    /// Distinct local maxima, best first.
    pub interior_optima: Vec<InteriorOptimum>,
    pub boundary_supremum: f64,
    pub global: GlobalOutcome,
    pub multistart_count: usize,
    /// Seeds that ran into a face of the octant.
    pub boundary_runs: usize,
}

/// The objective in normalized coordinates with its analytic gradient.
#[derive(Debug, Clone, Copy)]
struct Reduced {
    s: Superellipsoid3D,
}

impl Reduced {
    fn inside(&self, u: f64, v: f64) -> bool {
        u > 0.0 && v > 0.0 && 1.0 - u.powf(self.s.alpha) - v.powf(self.s.beta) > 0.0
    }

    fn vertex(&self, u: f64, v: f64) -> Box3 {
        let w = 1.0 - u.powf(self.s.alpha) - v.powf(self.s.beta);
        Box3::new(self.s.a * u, self.s.b * v, self.s.c * w.max(0.0).powf(1.0 / self.s.gamma))
    }

    /// `xy + xz + yz`, or `-∞` outside the region.
    fn value(&self, u: f64, v: f64) -> f64 {
        if !self.inside(u, v) {
            return f64::NEG_INFINITY;
        }
        let b = self.vertex(u, v);
        b.x * b.y + b.x * b.z + b.y * b.z
    }

    fn gradient(&self, u: f64, v: f64) -> [f64; 2] {
        let s = &self.s;
        let w = 1.0 - u.powf(s.alpha) - v.powf(s.beta);
        let b = self.vertex(u, v);
        // dz/dw = (C/γ) w^{1/γ - 1}
        let dz_dw = s.c / s.gamma * w.powf(1.0 / s.gamma - 1.0);
        let z_u = -dz_dw * s.alpha * u.powf(s.alpha - 1.0);
        let z_v = -dz_dw * s.beta * v.powf(s.beta - 1.0);
        [
            s.a * (b.y + b.z) + (b.x + b.y) * z_u,
            s.b * (b.x + b.z) + (b.x + b.y) * z_v,
        ]
    }

    /// Central differences of the analytic gradient.
    fn hessian(&self, u: f64, v: f64) -> [[f64; 2]; 2] {
        let (hu, hv) = (1e-6 * u, 1e-6 * v);
        let (gp, gm) = (self.gradient(u + hu, v), self.gradient(u - hu, v));
        let (gq, gn) = (self.gradient(u, v + hv), self.gradient(u, v - hv));
        let huu = (gp[0] - gm[0]) / (2.0 * hu);
        let hvv = (gq[1] - gn[1]) / (2.0 * hv);
        let huv = 0.5 * ((gp[1] - gm[1]) / (2.0 * hu) + (gq[0] - gn[0]) / (2.0 * hv));
        [[huu, huv], [huv, hvv]]
    }

    fn near_boundary(&self, u: f64, v: f64) -> bool {
        let w = 1.0 - u.powf(self.s.alpha) - v.powf(self.s.beta);
        u < BOUNDARY_MARGIN || v < BOUNDARY_MARGIN || w < BOUNDARY_MARGIN
    }
}

fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn norm(a: [f64; 2]) -> f64 {
    a[0].hypot(a[1])
}

#[derive(Debug, Clone, PartialEq)]
enum RunEnd {
    Stationary { u: f64, v: f64 },
    Boundary,
    Stalled,
}

/// BFGS ascent from `(u, v)`; every accepted step strictly increases the
/// objective. Returns the end state and the objective after each step.
fn ascend(r: &Reduced, mut u: f64, mut v: f64) -> (RunEnd, Vec<f64>) {
    let mut f = r.value(u, v);
    let mut g = r.gradient(u, v);
    let mut trace = vec![f];
    // inverse Hessian of -F, started as a scaled identity
    let scale = 0.1 / norm(g).max(1e-300);
    let mut hinv = [[scale, 0.0], [0.0, scale]];
    for _ in 0..MAX_ASCENT_STEPS {
        if r.near_boundary(u, v) {
            return (RunEnd::Boundary, trace);
        }
        if norm(g) <= 1e-10 * f.abs().max(1.0) {
            return (RunEnd::Stationary { u, v }, trace);
        }
        let mut d = [
            hinv[0][0] * g[0] + hinv[0][1] * g[1],
            hinv[1][0] * g[0] + hinv[1][1] * g[1],
        ];
        if dot(d, g) <= 0.0 {
            // lost positive definiteness: restart along the gradient
            let s = 0.1 / norm(g);
            hinv = [[s, 0.0], [0.0, s]];
            d = [s * g[0], s * g[1]];
        }
        let slope = dot(d, g);
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let (nu, nv) = (u + t * d[0], v + t * d[1]);
            let nf = r.value(nu, nv);
            if nf > f && nf >= f + ARMIJO * t * slope {
                accepted = Some((nu, nv, nf));
                break;
            }
            t *= 0.5;
        }
        let Some((nu, nv, nf)) = accepted else {
            // no uphill progress at float resolution: treat as converged
            // when the gradient is small on the objective's own scale
            return if norm(g) <= 1e-6 * f.abs().max(1.0) {
                (RunEnd::Stationary { u, v }, trace)
            } else if r.near_boundary(u, v) {
                (RunEnd::Boundary, trace)
            } else {
                (RunEnd::Stalled, trace)
            };
        };
        let ng = r.gradient(nu, nv);
        // descent-form update for -F: s = step, y = -(g_new - g_old)
        let s = [nu - u, nv - v];
        let y = [g[0] - ng[0], g[1] - ng[1]];
        let sy = dot(s, y);
        if sy > 1e-300 {
            let hy = [
                hinv[0][0] * y[0] + hinv[0][1] * y[1],
                hinv[1][0] * y[0] + hinv[1][1] * y[1],
            ];
            let yhy = dot(y, hy);
            for i in 0..2 {
                for j in 0..2 {
                    hinv[i][j] += (sy + yhy) * s[i] * s[j] / (sy * sy) - (hy[i] * s[j] + s[i] * hy[j]) / sy;
                }
            }
        }
        u = nu;
        v = nv;
        f = nf;
        g = ng;
        trace.push(f);
    }
    (RunEnd::Stalled, trace)
}

/// Newton iterations on `∇F = 0`, kept only while the gradient shrinks.
fn polish(r: &Reduced, mut u: f64, mut v: f64) -> (f64, f64) {
    let mut gn = norm(r.gradient(u, v));
    for _ in 0..MAX_POLISH_STEPS {
        if gn == 0.0 {
            break;
        }
        let g = r.gradient(u, v);
        let h = r.hessian(u, v);
        let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let du = (h[1][1] * g[0] - h[0][1] * g[1]) / det;
        let dv = (h[0][0] * g[1] - h[1][0] * g[0]) / det;
        let (nu, nv) = (u - du, v - dv);
        if !r.inside(nu, nv) {
            break;
        }
        let ngn = norm(r.gradient(nu, nv));
        if !(ngn < gn) {
            break;
        }
        u = nu;
        v = nv;
        gn = ngn;
    }
    (u, v)
}

/// Fitted multiplier and residual of
/// `y+z = λ αx^{α-1}/A^α`, `x+z = λ βy^{β-1}/B^β`, `x+y = λ γz^{γ-1}/C^γ`.
pub fn lagrange_residual(surface: &Superellipsoid3D, b: Box3) -> (f64, f64) {
    let s = surface;
    let lhs = [b.y + b.z, b.x + b.z, b.x + b.y];
    let grad = [
        s.alpha * b.x.powf(s.alpha - 1.0) / s.a.powf(s.alpha),
        s.beta * b.y.powf(s.beta - 1.0) / s.b.powf(s.beta),
        s.gamma * b.z.powf(s.gamma - 1.0) / s.c.powf(s.gamma),
    ];
    let gg: f64 = grad.iter().map(|g| g * g).sum();
    let lambda = lhs.iter().zip(&grad).map(|(l, g)| l * g).sum::<f64>() / gg;
    let res = lhs
        .iter()
        .zip(&grad)
        .map(|(l, g)| (l - lambda * g).powi(2))
        .sum::<f64>()
        .sqrt();
    (lambda, res)
}

/// Starting points in normalized coordinates: `u^α = p`, `v^β = q(1 - p)`
/// over a lattice of quantiles, then the max-volume box and the cube.
pub fn seed_lattice(surface: &Superellipsoid3D, seeds: usize) -> Vec<(f64, f64)> {
    let n = ((seeds.saturating_sub(2)) as f64).sqrt().ceil().max(3.0) as usize;
    let q: Vec<f64> = (0..n).map(|i| 0.2 + 0.6 * i as f64 / (n - 1) as f64).collect();
    let mut out = Vec::with_capacity(n * n + 2);
    for &p in &q {
        for &r in &q {
            out.push((p.powf(1.0 / surface.alpha), (r * (1.0 - p)).powf(1.0 / surface.beta)));
        }
    }
    let (vol, _) = surfaces3d::max_volume_box(surface);
    out.push((vol.x / surface.a, vol.y / surface.b));
    if let Ok((cube, _)) = surfaces3d::cube_for_ratio(surface) {
        out.push((cube.x / surface.a, cube.y / surface.b));
    }
    out
}

/// Objective values `S = 4(xy+xz+yz)` along the accepted ascent steps from
/// a normalized starting point.
pub fn ascent_trace(surface: &Superellipsoid3D, u: f64, v: f64) -> Vec<f64> {
    let r = Reduced { s: *surface };
    ascend(&r, u, v).1.into_iter().map(|f| 4.0 * f).collect()
}

/// Best flat box: the largest face rectangle area.
pub fn boundary_supremum(surface: &Superellipsoid3D) -> f64 {
    surface
        .faces()
        .iter()
        .map(|face| curves2d::max_area_rect(face).1.area)
        .fold(0.0, f64::max)
}

/// Multistart maximization of the box surface area `4(xy + xz + yz)`.
pub fn max_surface_area_box(surface: &Superellipsoid3D, seeds: usize) -> Result<SurfaceAreaSolveReport, Lagrange3dError> {
    if seeds < 8 {
        return Err(Lagrange3dError::TooFewSeeds(seeds));
    }
    let s = Superellipsoid3D::new(surface.a, surface.b, surface.c, surface.alpha, surface.beta, surface.gamma)?;
    let r = Reduced { s };
    let starts = seed_lattice(&s, seeds);

    let mut optima: Vec<InteriorOptimum> = Vec::new();
    let mut boundary_runs = 0;
    let mut stalled = 0;
    for &(u0, v0) in &starts {
        let (u, v) = match ascend(&r, u0, v0).0 {
            RunEnd::Stationary { u, v } => polish(&r, u, v),
            RunEnd::Boundary => {
                boundary_runs += 1;
                continue;
            }
            RunEnd::Stalled => {
                stalled += 1;
                continue;
            }
        };
        let h = r.hessian(u, v);
        let local_max = h[0][0] < 0.0 && h[0][0] * h[1][1] - h[0][1] * h[1][0] > 0.0;
        if !local_max {
            continue;
        }
        let vertex = r.vertex(u, v);
        let (lambda, residual) = lagrange_residual(&s, vertex);
        let cand = InteriorOptimum {
            vertex,
            lambda,
            s: vertex.metrics().surface_area,
            residual,
        };
        let dup = optima.iter_mut().find(|o| {
            let d = (o.vertex.x - vertex.x).hypot(o.vertex.y - vertex.y).hypot(o.vertex.z - vertex.z);
            d <= DEDUP_DISTANCE
        });
        match dup {
            Some(o) if cand.residual < o.residual => *o = cand,
            Some(_) => {}
            None => optima.push(cand),
        }
    }
    if optima.is_empty() && boundary_runs == 0 && stalled == starts.len() {
        return Err(Lagrange3dError::NoConvergence(starts.len()));
    }
    optima.sort_by(|a, b| b.s.total_cmp(&a.s));

    let sup = boundary_supremum(&s);
    let global = match optima.first() {
        Some(best) if best.s > sup => GlobalOutcome::Interior {
            vertex: best.vertex,
            s: best.s,
        },
        _ => GlobalOutcome::Boundary { supremum: sup },
    };
    Ok(SurfaceAreaSolveReport {
        interior_optima: optima,
        boundary_supremum: sup,
        global,
        multistart_count: starts.len(),
        boundary_runs,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum UniquenessCheck {
    Unique,
    Failed { detail: String },
}

/// For `α = β = γ > 1` the interior maximum is unique and beats every flat
/// box; checks that the report agrees.
pub fn verify_uniqueness_equal_exponents(surface: &Superellipsoid3D, report: &SurfaceAreaSolveReport) -> UniquenessCheck {
    if !surface.equal_exponents() || surface.alpha <= 1.0 {
        return UniquenessCheck::Failed {
            detail: format!("needs equal exponents above 1, got {:?}", surface.exponents()),
        };
    }
    match report.interior_optima.len() {
        1 if matches!(report.global, GlobalOutcome::Interior { .. }) => UniquenessCheck::Unique,
        1 => UniquenessCheck::Failed {
            detail: "interior optimum does not beat the flat boxes".into(),
        },
        n => UniquenessCheck::Failed {
            detail: format!("{n} distinct interior optima"),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    fn interior(rep: &SurfaceAreaSolveReport) -> InteriorOptimum {
        assert!(matches!(rep.global, GlobalOutcome::Interior { .. }), "{rep:?}");
        rep.interior_optima[0]
    }

    #[test]
    fn cubic_three_axis_surface() {
        let s = Superellipsoid3D::symmetric(1.0, 2.0, 3.0, 3.0).unwrap();
        let rep = max_surface_area_box(&s, 16).unwrap();
        let best = interior(&rep);
        assert!(rel(best.vertex.x, 0.5842341045671398) < 1e-10);
        assert!(rel(best.vertex.y, 1.446885927591976) < 1e-10);
        assert!(rel(best.vertex.z, 2.250143153415199) < 1e-10);
        assert!(rel(best.s, 21.66252375377916) < 1e-12);
        assert!(best.residual <= 1e-9);
        assert!(rel(3.0 * best.lambda, best.s / 2.0) < 1e-9);
        assert_eq!(verify_uniqueness_equal_exponents(&s, &rep), UniquenessCheck::Unique);
    }

    #[test]
    fn mixed_surface() {
        let s = Superellipsoid3D::new(1.0, 1.0, 1.0, 2.0, 2.0, 3.0).unwrap();
        let best = interior(&max_surface_area_box(&s, 16).unwrap());
        assert!(rel(best.vertex.x, 0.6110454827840076) < 1e-10);
        assert!(rel(best.vertex.y, 0.6110454827840076) < 1e-10);
        assert!(rel(best.vertex.z, 0.6326759744603964) < 1e-10);
        assert!(rel(best.s, 4.586256698202927) < 1e-12);
        assert!(best.residual <= 1e-9);
    }

    #[test]
    fn matches_ellipsoid_closed_form() {
        let s = Superellipsoid3D::ellipsoid(2.0, 1.0, 1.0).unwrap();
        let best = interior(&max_surface_area_box(&s, 8).unwrap());
        assert!(rel(best.s, 1.0 + 33f64.sqrt()) < 1e-12);
        let s = Superellipsoid3D::ellipsoid(4.0, 3.0, 1.0).unwrap();
        let best = interior(&max_surface_area_box(&s, 8).unwrap());
        assert!(rel(best.s, 27.56078789764696) < 1e-12);
    }

    #[test]
    fn sphere_and_mild_exponent_unique() {
        let s = Superellipsoid3D::ellipsoid(1.0, 1.0, 1.0).unwrap();
        let rep = max_surface_area_box(&s, 8).unwrap();
        assert_eq!(verify_uniqueness_equal_exponents(&s, &rep), UniquenessCheck::Unique);
        assert!((interior(&rep).vertex.x - 1.0 / 3f64.sqrt()).abs() < 1e-10);

        let s = Superellipsoid3D::symmetric(1.0, 2.0, 3.0, 1.5).unwrap();
        let rep = max_surface_area_box(&s, 64).unwrap();
        assert_eq!(rep.multistart_count, 66);
        assert_eq!(verify_uniqueness_equal_exponents(&s, &rep), UniquenessCheck::Unique);
    }

    #[test]
    fn below_threshold_selects_boundary() {
        let alpha = surfaces3d::surface_area_threshold() - 0.1;
        let s = Superellipsoid3D::symmetric(1.0, 1.0, 1.0, alpha).unwrap();
        let rep = max_surface_area_box(&s, 16).unwrap();
        let (cube, flat) = surfaces3d::symmetric_surface_values(alpha).unwrap();
        assert!(cube < flat);
        assert!((rep.boundary_supremum - flat).abs() < 1e-12);
        assert!(matches!(rep.global, GlobalOutcome::Boundary { .. }));
    }

    #[test]
    fn ascent_is_monotone() {
        let s = Superellipsoid3D::new(1.0, 2.0, 0.5, 3.0, 1.5, 2.5).unwrap();
        for (u, v) in seed_lattice(&s, 16) {
            let t = ascent_trace(&s, u, v);
            assert!(t.windows(2).all(|w| w[1] > w[0]), "{t:?}");
        }
    }

    #[test]
    fn rejects_bad_input() {
        let s = Superellipsoid3D::ellipsoid(1.0, 1.0, 1.0).unwrap();
        assert_eq!(max_surface_area_box(&s, 4), Err(Lagrange3dError::TooFewSeeds(4)));
        let bad = Superellipsoid3D { a: -1.0, ..s };
        assert!(matches!(max_surface_area_box(&bad, 8), Err(Lagrange3dError::DegenerateSurface(_))));
    }
}
