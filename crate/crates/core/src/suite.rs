//! Regression table of published reference values.

use serde::Serialize;

use crate::curves2d::{self, CriticalKind, MixedCurve2D};
use crate::lagrange3d::{self, GlobalOutcome};
use crate::oracle;
use crate::profile2d::{self, ProfileConstructionSpec};
use crate::surfaces3d::{self, Superellipsoid3D};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Criterion {
    Absolute { expected: f64, tol: f64 },
    Relative { expected: f64, tol: f64 },
    AtMost { bound: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub computed: f64,
    pub criterion: Criterion,
    pub passed: bool,
}

impl Check {
    fn new(name: &'static str, computed: f64, criterion: Criterion) -> Self {
        let passed = match criterion {
            Criterion::Absolute { expected, tol } => (computed - expected).abs() <= tol,
            Criterion::Relative { expected, tol } => (computed - expected).abs() <= tol * expected.abs(),
            Criterion::AtMost { bound } => computed <= bound,
        };
        Self {
            name,
            computed,
            criterion,
            passed,
        }
    }

    pub fn expected(&self) -> f64 {
        match self.criterion {
            Criterion::Absolute { expected, .. } | Criterion::Relative { expected, .. } => expected,
            Criterion::AtMost { bound } => bound,
        }
    }
}

fn rel(expected: f64, tol: f64) -> Criterion {
    Criterion::Relative { expected, tol }
}

fn abs(expected: f64, tol: f64) -> Criterion {
    Criterion::Absolute { expected, tol }
}

fn interior_x(report: &curves2d::SolveReport, kind: CriticalKind) -> f64 {
    report.interior(kind).next().map_or(f64::NAN, |c| c.rect.x)
}

/// Runs every check; a check that cannot be computed shows up as NaN and
/// fails.
pub fn run() -> Vec<Check> {
    let mut out = Vec::new();

    let ellipse = MixedCurve2D::ellipse(4.0, 3.0).unwrap();
    out.push(Check::new("ellipse max area", curves2d::max_area_rect(&ellipse).1.area, rel(24.0, 1e-12)));
    out.push(Check::new(
        "ellipse max perimeter",
        curves2d::optimal_perimeter_rects(&ellipse).supremum().unwrap_or(f64::NAN),
        rel(20.0, 1e-12),
    ));
    let sq = curves2d::best_ratio_rect(&ellipse).map_or(f64::NAN, |r| r.1.ratio);
    out.push(Check::new("ellipse best ratio", sq, abs(1.0 / 16.0, 1e-12)));
    out.push(Check::new(
        "ellipse area fill ratio",
        curves2d::fill_ratio(2.0).unwrap_or(f64::NAN),
        rel(2.0 / std::f64::consts::PI, 1e-12),
    ));

    let cubic = MixedCurve2D::superellipse(1.0, 2.0, 3.0).unwrap();
    out.push(Check::new(
        "cubic superellipse max perimeter",
        curves2d::optimal_perimeter_rects(&cubic).supremum().unwrap_or(f64::NAN),
        rel(9.789043256, 1e-8),
    ));
    let cube_root = MixedCurve2D::superellipse(1.0, 8.0, 1.0 / 3.0).unwrap();
    out.push(Check::new(
        "cube-root superellipse min perimeter",
        curves2d::optimal_perimeter_rects(&cube_root).infimum().unwrap_or(f64::NAN),
        rel(2.183278859, 1e-8),
    ));

    let mixed = curves2d::optimal_perimeter_rects(&MixedCurve2D::new(3.0, 4.0, 3.0, 0.5).unwrap());
    out.push(Check::new(
        "mixed curve perimeter maximum x",
        interior_x(&mixed, CriticalKind::InteriorMax),
        rel(1.086810566, 1e-7),
    ));
    out.push(Check::new(
        "mixed curve perimeter minimum x",
        interior_x(&mixed, CriticalKind::InteriorMin),
        rel(2.855105222, 1e-7),
    ));

    let twin = profile2d::max_area_rects(&profile2d::twin_maximizer_profile(), 1e-6);
    out.push(Check::new("twin profile maximizer count", twin.critical_points.len() as f64, abs(2.0, 0.0)));

    let spec = ProfileConstructionSpec::new(vec![(1.0, 1.0)]).unwrap();
    out.push(Check::new("constructed profile end point", spec.a_out(), abs(3.0, 1e-12)));

    let s3 = Superellipsoid3D::symmetric(1.0, 1.0, 1.0, 3.0).unwrap();
    out.push(Check::new(
        "cubic solid volume fill ratio",
        surfaces3d::volume_fill_ratio(&s3).unwrap_or(f64::NAN),
        abs(0.4681168362, 1e-9),
    ));
    out.push(Check::new("surface area threshold exponent", surfaces3d::surface_area_threshold(), abs(0.7381404932, 1e-9)));

    out.push(Check::new(
        "sphere max surface area",
        surfaces3d::max_surface_area_ellipsoid(1.0, 1.0, 1.0).map_or(f64::NAN, |s| s.s_max),
        abs(4.0, 1e-12),
    ));
    out.push(Check::new(
        "prolate ellipsoid max surface area",
        surfaces3d::revolution_surface_area(2.0, 1.0).unwrap_or(f64::NAN),
        rel(1.0 + 33f64.sqrt(), 1e-12),
    ));

    let interior_s = |s: Superellipsoid3D| match lagrange3d::max_surface_area_box(&s, 16) {
        Ok(rep) => match rep.global {
            GlobalOutcome::Interior { s, .. } => s,
            GlobalOutcome::Boundary { .. } => f64::NAN,
        },
        Err(_) => f64::NAN,
    };
    out.push(Check::new(
        "cubic three-axis surface max surface area",
        interior_s(Superellipsoid3D::symmetric(1.0, 2.0, 3.0, 3.0).unwrap()),
        rel(21.66252376, 1e-6),
    ));
    out.push(Check::new(
        "mixed surface max surface area",
        interior_s(Superellipsoid3D::new(1.0, 1.0, 1.0, 2.0, 2.0, 3.0).unwrap()),
        rel(4.586252, 1e-5),
    ));

    let explored = oracle::explore_quadrilaterals(4.0, 3.0, 10_000, 30, 1);
    out.push(Check::new(
        "ellipse quadrilateral perimeter",
        explored.as_ref().map_or(f64::NAN, |r| r.best_perimeter),
        Criterion::AtMost { bound: 20.0 + 1e-9 },
    ));
    out.push(Check::new(
        "ellipse quadrilateral ratio",
        explored.as_ref().map_or(f64::NAN, |r| r.best_ratio),
        Criterion::AtMost { bound: 1.0 / 16.0 + 1e-9 },
    ));
    out
}

/// Fixed-width text table, one row per check.
pub fn format_table(checks: &[Check]) -> String {
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut s = String::new();
    for c in checks {
        s.push_str(&format!(
            "{:<4}  {:<width$}  computed {:>18.10e}  expected {:>18.10e}\n",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.computed,
            c.expected(),
        ));
    }
    let passed = checks.iter().filter(|c| c.passed).count();
    s.push_str(&format!("{passed}/{} checks passed\n", checks.len()));
    s
}
