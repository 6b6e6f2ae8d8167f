use std::process::{Command, Output};

use serde_json::Value;

fn inscribe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_inscribe")).args(args).output().expect("spawn inscribe")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn keys(v: &Value) -> Vec<String> {
    v.as_object().unwrap().keys().cloned().collect()
}

const ENVELOPE: [&str; 6] = ["classification", "critical_points", "inputs", "optimum", "paper_reference_tag", "residuals"];

#[test]
fn cubic_superellipse_perimeter() {
    let out = inscribe(&["solve2d", "--A", "1", "--B", "2", "--alpha", "3", "--objective", "perimeter"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    let p = v["optimum"]["metrics"]["perimeter"].as_f64().unwrap();
    assert!((p - 9.789043256).abs() < 1e-8 * 9.8, "{p}");
    assert_eq!(v["classification"], "unique_max_no_min");
    assert!(v["residuals"]["on_curve"].as_f64().unwrap() < 1e-12);
}

#[test]
fn unit_sphere_surface_area() {
    let out = inscribe(&["solve3d", "--ellipsoid", "1,1,1", "--objective", "surface"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["optimum"]["metrics"]["surface_area"].as_f64(), Some(4.0));
    let x = v["optimum"]["vertex"][0].as_f64().unwrap();
    assert!((x - 1.0 / 3f64.sqrt()).abs() < 1e-9);
}

#[test]
fn key_set_is_stable() {
    let runs: [&[&str]; 5] = [
        &["solve2d", "--ellipse", "4,3"],
        &["solve2d", "--ellipse", "4,3", "--objective", "ratio"],
        &["solve2d", "--profile", "twin"],
        &["solve3d", "--A", "1", "--B", "2", "--C", "3", "--alpha", "3", "--objective", "volume"],
        &["solve3d", "--ellipsoid", "2,1,1", "--objective", "edge"],
    ];
    for args in runs {
        let out = inscribe(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        let v = json_of(&out);
        assert_eq!(keys(&v), ENVELOPE, "{args:?}");
        assert_eq!(keys(&v["optimum"]), ["metrics", "vertex"], "{args:?}");
    }
    let a = json_of(&inscribe(&["solve2d", "--A", "3", "--B", "4", "--alpha", "3", "--beta", "0.5", "--objective", "perimeter"]));
    let b = json_of(&inscribe(&["solve2d", "--A", "1", "--B", "8", "--alpha", "0.3333333333333333", "--objective", "perimeter"]));
    assert_eq!(keys(&a), keys(&b));
}

#[test]
fn twin_profile_has_two_maximizers() {
    let v = json_of(&inscribe(&["solve2d", "--profile", "twin"]));
    assert_eq!(v["classification"], "multiple_max");
    assert_eq!(v["critical_points"].as_array().unwrap().len(), 2);
}

#[test]
fn argument_errors_exit_2() {
    for args in [
        &["solve2d", "--A", "1"][..],
        &["solve2d", "--ellipse", "4"],
        &["solve2d", "--ellipse", "4,3", "--A", "1"],
        &["solve2d", "--A", "-1", "--B", "1", "--alpha", "2"],
        &["solve3d", "--ellipse", "1,1"],
        &["bogus"],
        &["render", "--preset", "nope"],
    ] {
        let out = inscribe(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn solver_errors_exit_1_with_json() {
    // A flat superellipse direction violates the edge-sum hypothesis.
    let out = inscribe(&["solve3d", "--A", "1", "--B", "1", "--C", "1", "--alpha", "0.5", "--objective", "edge"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    assert!(v["error"]["message"].is_string());
}

#[test]
fn reference_suite_passes() {
    let out = inscribe(&["paper-suite"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.contains("FAIL"));
    assert!(text.lines().last().unwrap().ends_with("checks passed"));
}

#[test]
fn render_writes_svg() {
    let path = std::env::temp_dir().join(format!("inscribe-{}.svg", std::process::id()));
    let out = inscribe(&["render", "--A", "1", "--B", "2", "--alpha", "3", "--objective", "perimeter", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let svg = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert!(svg.starts_with("<?xml"));
    assert!(svg.contains("<path"));
}

#[test]
fn oracle_agrees_with_closed_form() {
    let v = json_of(&inscribe(&["oracle", "--ellipse", "4,3", "--objective", "area", "--resolution", "400"]));
    let area = v["optimum"]["value"].as_f64().unwrap();
    assert!((area - 24.0).abs() < 1e-6, "{area}");
}

#[test]
fn explore_respects_bounds() {
    let v = json_of(&inscribe(&["explore", "--samples", "10000", "--local-steps", "10"]));
    assert_eq!(v["classification"], "no_violation");
    assert!(v["residuals"]["perimeter_excess"].as_f64().unwrap() <= 1e-9);
}
