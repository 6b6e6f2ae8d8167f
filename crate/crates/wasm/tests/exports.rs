use inscribe_wasm::{curve_svg, ellipsoid, solve2d};
use serde_json::Value;

#[test]
fn svg_for_ellipse() {
    let svg = curve_svg(4.0, 3.0, 2.0, 2.0);
    assert!(svg.starts_with("<?xml"));
    assert!(svg.matches("<rect").count() >= 3);
}

#[test]
fn solve2d_ellipse_values() {
    let v: Value = serde_json::from_str(&solve2d(4.0, 3.0, 2.0, 2.0)).unwrap();
    assert!((v["max_area"]["area"].as_f64().unwrap() - 24.0).abs() < 1e-10);
    assert!((v["perimeter"]["max"]["perimeter"].as_f64().unwrap() - 20.0).abs() < 1e-10);
    assert!((v["best_ratio"]["ratio"].as_f64().unwrap() - 1.0 / 16.0).abs() < 1e-12);
}

#[test]
fn sphere_values() {
    let v: Value = serde_json::from_str(&ellipsoid(1.0, 1.0, 1.0)).unwrap();
    assert!((v["max_surface_area"]["surface_area"].as_f64().unwrap() - 4.0).abs() < 1e-12);
    assert_eq!(v["max_surface_area"]["beats_flat_boxes"], true);
}

#[test]
fn bad_input_is_an_error_object() {
    let v: Value = serde_json::from_str(&solve2d(-1.0, 3.0, 2.0, 2.0)).unwrap();
    assert!(v["error"].is_string());
    assert!(curve_svg(1.0, 1.0, 0.0, 2.0).contains("error"));
}
