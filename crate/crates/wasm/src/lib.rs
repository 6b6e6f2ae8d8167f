//! Browser bindings: every export takes plain numbers and returns a string
//! (SVG markup or JSON), so the page needs no glue beyond `wasm-bindgen`.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use inscribe_core::curves2d::{self, CriticalKind, MixedCurve2D};
use inscribe_core::render::{self, Scene, Style};
use inscribe_core::surfaces3d::{self, Superellipsoid3D};

fn error_json(msg: impl ToString) -> String {
    json!({ "error": msg.to_string() }).to_string()
}

fn curve(a: f64, b: f64, alpha: f64, beta: f64) -> Result<MixedCurve2D, String> {
    MixedCurve2D::new(a, b, alpha, beta).map_err(|e| e.to_string())
}

fn rect_json(x: f64, y: f64) -> Value {
    let m = curves2d::Rectangle { x, y }.metrics();
    json!({ "x": x, "y": y, "area": m.area, "perimeter": m.perimeter, "ratio": m.ratio })
}

/// SVG of the curve with its maximum-area rectangle and the perimeter
/// critical rectangles drawn in.
pub fn curve_svg_impl(a: f64, b: f64, alpha: f64, beta: f64) -> Result<String, String> {
    let c = curve(a, b, alpha, beta)?;
    let (area_rect, _) = curves2d::max_area_rect(&c);
    let per = curves2d::optimal_perimeter_rects(&c);
    let mut scene = Scene::new(&c, render::DEFAULT_SAMPLES).with_rect(area_rect, Style::Neutral);
    for p in &per.critical_points {
        let style = match p.kind {
            CriticalKind::InteriorMax => Style::Maximum,
            CriticalKind::InteriorMin => Style::Minimum,
            CriticalKind::Boundary => continue,
        };
        scene = scene.with_rect(p.rect, style);
    }
    render::render_scene(&scene).map_err(|e| e.to_string())
}

/// Area, perimeter and ratio optima of a curve as JSON.
pub fn solve2d_impl(a: f64, b: f64, alpha: f64, beta: f64) -> Result<String, String> {
    let c = curve(a, b, alpha, beta)?;
    let (area_rect, _) = curves2d::max_area_rect(&c);
    let per = curves2d::optimal_perimeter_rects(&c);
    let (sq, _) = curves2d::best_ratio_rect(&c).map_err(|e| e.to_string())?;
    let points: Vec<Value> = per
        .critical_points
        .iter()
        .map(|p| json!({ "kind": p.kind, "rect": rect_json(p.rect.x, p.rect.y) }))
        .collect();
    Ok(json!({
        "max_area": rect_json(area_rect.x, area_rect.y),
        "perimeter": {
            "existence": per.existence_note,
            "max": per.global_max.map(|p| rect_json(p.rect.x, p.rect.y)),
            "min": per.global_min.map(|p| rect_json(p.rect.x, p.rect.y)),
            "critical_points": points,
        },
        "best_ratio": rect_json(sq.x, sq.y),
        "enclosed_area": c.enclosed_area().ok(),
    })
    .to_string())
}

/// Volume and surface-area optima of an ellipsoid as JSON.
pub fn ellipsoid_impl(a: f64, b: f64, c: f64) -> Result<String, String> {
    let s = Superellipsoid3D::ellipsoid(a, b, c).map_err(|e| e.to_string())?;
    let (vbox, vm) = surfaces3d::max_volume_box(&s);
    let sol = surfaces3d::max_surface_area_ellipsoid(a, b, c).map_err(|e| e.to_string())?;
    let (ebox, em) = (sol.vertex, sol.vertex.metrics());
    Ok(json!({
        "max_volume": { "vertex": [vbox.x, vbox.y, vbox.z], "volume": vm.volume },
        "volume_fill_ratio": surfaces3d::volume_fill_ratio(&s).ok(),
        "max_surface_area": {
            "vertex": [ebox.x, ebox.y, ebox.z],
            "surface_area": em.surface_area,
            "lambda": sol.lambda,
            "beats_flat_boxes": sol.boundary_ok,
        },
    })
    .to_string())
}

#[wasm_bindgen]
pub fn curve_svg(a: f64, b: f64, alpha: f64, beta: f64) -> String {
    curve_svg_impl(a, b, alpha, beta).unwrap_or_else(error_json)
}

#[wasm_bindgen]
pub fn solve2d(a: f64, b: f64, alpha: f64, beta: f64) -> String {
    solve2d_impl(a, b, alpha, beta).unwrap_or_else(error_json)
}

#[wasm_bindgen]
pub fn ellipsoid(a: f64, b: f64, c: f64) -> String {
    ellipsoid_impl(a, b, c).unwrap_or_else(error_json)
}
