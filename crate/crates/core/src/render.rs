//! Deterministic SVG pictures of a curve with inscribed rectangles.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curves2d::{self, CriticalKind, InscribingCurve, MixedCurve2D, Rectangle};
use crate::profile2d;

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;
pub const MARGIN: f64 = 0.05;
pub const DEFAULT_SAMPLES: usize = 800;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("scene has no curve samples")]
    EmptyScene,
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Style {
    Maximum,
    Minimum,
    Neutral,
}

impl Style {
    fn stroke(self) -> &'static str {
        match self {
            Style::Maximum => "#c0392b",
            Style::Minimum => "#2471a3",
            Style::Neutral => "#7d3c98",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StyledRect {
    pub rect: Rectangle,
    pub style: Style,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polygon {
    pub points: Vec<(f64, f64)>,
    pub style: Style,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    /// Closed polyline through all four quadrants.
    pub curve: Vec<(f64, f64)>,
    pub rects: Vec<StyledRect>,
    pub polygons: Vec<Polygon>,
}

/// Mirrors an ordered arc from `(0, B)` to `(A, 0)` into a closed loop.
pub fn mirror_quadrants(arc: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(4 * arc.len());
    let q1 = arc.iter().copied();
    let q4 = arc.iter().rev().map(|&(x, y)| (x, -y));
    let q3 = arc.iter().map(|&(x, y)| (-x, -y));
    let q2 = arc.iter().rev().map(|&(x, y)| (-x, y));
    for p in q1.chain(q4).chain(q3).chain(q2) {
        if out.last() != Some(&p) {
            out.push(p);
        }
    }
    if out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    out
}

impl Scene {
    pub fn new<C: InscribingCurve + ?Sized>(curve: &C, samples: usize) -> Self {
        Self {
            curve: mirror_quadrants(&curve.first_quadrant_samples(samples)),
            rects: Vec::new(),
            polygons: Vec::new(),
        }
    }

    pub fn with_rect(mut self, rect: Rectangle, style: Style) -> Self {
        self.rects.push(StyledRect { rect, style });
        self
    }

    pub fn with_polygon(mut self, points: Vec<(f64, f64)>, style: Style) -> Self {
        self.polygons.push(Polygon { points, style });
        self
    }

    /// Half-widths of the symmetric box holding everything, before margin.
    fn extent(&self) -> (f64, f64) {
        let pts = self
            .curve
            .iter()
            .chain(self.polygons.iter().flat_map(|p| p.points.iter()))
            .copied()
            .chain(self.rects.iter().map(|r| (r.rect.x, r.rect.y)));
        pts.fold((0.0f64, 0.0f64), |(mx, my), (x, y)| (mx.max(x.abs()), my.max(y.abs())))
    }
}

struct Frame {
    scale: f64,
}

impl Frame {
    fn map(&self, (x, y): (f64, f64)) -> (f64, f64) {
        (WIDTH / 2.0 + self.scale * x, HEIGHT / 2.0 - self.scale * y)
    }
}

fn fmt6(v: f64) -> String {
    // avoid "-0.000000"
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".to_string()
    } else {
        s
    }
}

fn points_attr(frame: &Frame, pts: &[(f64, f64)]) -> String {
    pts.iter()
        .map(|&p| {
            let (x, y) = frame.map(p);
            format!("{},{}", fmt6(x), fmt6(y))
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// SVG 1.1 text: axes through the origin, the curve as one path, one `rect`
/// per non-degenerate rectangle and one `polygon` per polygon.
pub fn render_scene(scene: &Scene) -> Result<String, RenderError> {
    if scene.curve.is_empty() {
        return Err(RenderError::EmptyScene);
    }
    let (ex, ey) = scene.extent();
    let sx = if ex > 0.0 { WIDTH / (2.0 * ex) } else { f64::INFINITY };
    let sy = if ey > 0.0 { HEIGHT / (2.0 * ey) } else { f64::INFINITY };
    let mut scale = sx.min(sy) * (1.0 - 2.0 * MARGIN);
    if !scale.is_finite() {
        scale = 1.0;
    }
    let frame = Frame { scale };

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        WIDTH, HEIGHT, WIDTH, HEIGHT
    );
    let _ = writeln!(svg, r##"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>"##);
    let _ = writeln!(
        svg,
        r##"<line x1="0" y1="{}" x2="{}" y2="{}" stroke="#999999" stroke-width="1"/>"##,
        fmt6(HEIGHT / 2.0),
        fmt6(WIDTH),
        fmt6(HEIGHT / 2.0)
    );
    let _ = writeln!(
        svg,
        r##"<line x1="{}" y1="0" x2="{}" y2="{}" stroke="#999999" stroke-width="1"/>"##,
        fmt6(WIDTH / 2.0),
        fmt6(WIDTH / 2.0),
        fmt6(HEIGHT)
    );

    let mut d = String::new();
    for (i, &p) in scene.curve.iter().enumerate() {
        let (x, y) = frame.map(p);
        let _ = write!(d, "{}{},{} ", if i == 0 { "M" } else { "L" }, fmt6(x), fmt6(y));
    }
    d.push('Z');
    let _ = writeln!(svg, r##"<path d="{d}" fill="none" stroke="#000000" stroke-width="1.5"/>"##);

    for r in &scene.rects {
        let Rectangle { x, y } = r.rect;
        if !(x > 0.0 && y > 0.0) {
            continue;
        }
        let (left, top) = frame.map((-x, y));
        let _ = writeln!(
            svg,
            r#"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="{}" stroke-width="1.5"/>"#,
            fmt6(left),
            fmt6(top),
            fmt6(2.0 * x * scale),
            fmt6(2.0 * y * scale),
            r.style.stroke()
        );
    }
    for p in &scene.polygons {
        let _ = writeln!(
            svg,
            r#"<polygon points="{}" fill="none" stroke="{}" stroke-width="1.5" stroke-dasharray="6,4"/>"#,
            points_attr(&frame, &p.points),
            p.style.stroke()
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Names accepted by [`preset_scene`].
pub const PRESETS: [&str; 5] = [
    "ellipse-perimeter",
    "cubic-max-perimeter",
    "cube-root-min-perimeter",
    "mixed-perimeter",
    "twin-area",
];

/// Ready-made scenes for the classic configurations.
pub fn preset_scene(name: &str) -> Result<Scene, RenderError> {
    let n = DEFAULT_SAMPLES;
    let perimeter_scene = |curve: MixedCurve2D| {
        let report = curves2d::optimal_perimeter_rects(&curve);
        report
            .critical_points
            .iter()
            .filter(|c| c.kind != CriticalKind::Boundary)
            .fold(Scene::new(&curve, n), |s, c| {
                let style = if c.kind == CriticalKind::InteriorMax {
                    Style::Maximum
                } else {
                    Style::Minimum
                };
                s.with_rect(c.rect, style)
            })
    };
    match name {
        "ellipse-perimeter" => {
            let (a, b) = (4.0, 3.0);
            Ok(perimeter_scene(MixedCurve2D::ellipse(a, b).unwrap())
                .with_polygon(vec![(a, 0.0), (0.0, b), (-a, 0.0), (0.0, -b)], Style::Neutral))
        }
        "cubic-max-perimeter" => Ok(perimeter_scene(MixedCurve2D::superellipse(1.0, 2.0, 3.0).unwrap())),
        "cube-root-min-perimeter" => Ok(perimeter_scene(MixedCurve2D::superellipse(1.0, 8.0, 1.0 / 3.0).unwrap())),
        "mixed-perimeter" => Ok(perimeter_scene(MixedCurve2D::new(3.0, 4.0, 3.0, 0.5).unwrap())),
        "twin-area" => {
            let profile = profile2d::twin_maximizer_profile();
            let report = profile2d::max_area_rects(&profile, 1e-6);
            Ok(report
                .critical_points
                .iter()
                .fold(Scene::new(&profile, n), |s, c| s.with_rect(c.rect, Style::Maximum)))
        }
        other => Err(RenderError::UnknownPreset(other.to_string())),
    }
}
