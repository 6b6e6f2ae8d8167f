//! Argument parsing and dispatch for the `inscribe` binary.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use inscribe_core::curves2d::{self, CriticalKind, CriticalPoint, MixedCurve2D, Rectangle, SolveReport};
use inscribe_core::lagrange3d::{self, GlobalOutcome};
use inscribe_core::oracle::{self, BoxObjective, GridSpec, RectObjective};
use inscribe_core::profile2d::{self, ProfileConstructionSpec, ProfileCurve};
use inscribe_core::render::{self, Scene, Style};
use inscribe_core::surfaces3d::{self, Box3, Superellipsoid3D};
use inscribe_core::suite;

#[derive(Debug, Parser)]
#[command(name = "inscribe", version, about = "Optimal rectangles and boxes inscribed in symmetric curves and surfaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimal rectangle inscribed in a plane curve.
    Solve2d {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long, value_enum, default_value = "area")]
        objective: Objective2d,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Optimal box inscribed in a superellipsoid.
    Solve3d {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long, value_enum, default_value = "volume")]
        objective: Objective3d,
        /// Multistart seeds for the surface-area solver.
        #[arg(long, default_value_t = 16)]
        seeds: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Brute-force grid search; 3D when any of --C, --gamma, --ellipsoid is given.
    Oracle {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long, default_value = "area")]
        objective: String,
        #[arg(long)]
        resolution: Option<usize>,
        #[arg(long)]
        rounds: Option<usize>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Random search over quadrilaterals inscribed in an ellipse.
    Explore {
        #[arg(long, value_parser = parse_pair, default_value = "4,3")]
        ellipse: (f64, f64),
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 30)]
        local_steps: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// SVG picture of a curve and its optimal rectangles.
    Render {
        /// One of the named scenes; otherwise the curve flags are used.
        #[arg(long)]
        preset: Option<String>,
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long, value_enum, default_value = "area")]
        objective: Objective2d,
        /// Write the SVG here instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Runs the table of reference values.
    PaperSuite {
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct ShapeArgs {
    #[arg(long = "A")]
    pub a: Option<f64>,
    #[arg(long = "B")]
    pub b: Option<f64>,
    #[arg(long = "C")]
    pub c: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Ellipse semi-axes `a,b`.
    #[arg(long, value_parser = parse_pair)]
    pub ellipse: Option<(f64, f64)>,
    /// Ellipsoid semi-axes `a,b,c`.
    #[arg(long, value_parser = parse_triple)]
    pub ellipsoid: Option<(f64, f64, f64)>,
    /// Built-in profile curve.
    #[arg(long, value_enum)]
    pub profile: Option<ProfilePreset>,
    /// Profile whose area maximizers are the given set, e.g. `1,1;2,3`.
    #[arg(long)]
    pub construct: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write the result here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Objective2d {
    Area,
    Perimeter,
    Ratio,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Objective3d {
    Volume,
    Surface,
    Edge,
    Ratio,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProfilePreset {
    /// Piecewise profile with two maximum-area rectangles.
    Twin,
}

fn parse_list(s: &str, n: usize) -> Result<Vec<f64>, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<_, _>>()?;
    if v.len() != n {
        return Err(format!("expected {n} comma-separated numbers, got {}", v.len()));
    }
    Ok(v)
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let v = parse_list(s, 2)?;
    Ok((v[0], v[1]))
}

fn parse_triple(s: &str) -> Result<(f64, f64, f64), String> {
    let v = parse_list(s, 3)?;
    Ok((v[0], v[1], v[2]))
}

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Bad or inconsistent flags; exit code 2.
    Usage(String),
    /// The solver rejected the input or failed; exit code 1.
    Solver { kind: &'static str, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Solver { .. } => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            CliError::Usage(m) => json!({ "error": { "kind": "usage", "message": m } }),
            CliError::Solver { kind, message } => json!({ "error": { "kind": kind, "message": message } }),
        }
    }
}

fn solver<E: std::fmt::Display>(kind: &'static str) -> impl Fn(E) -> CliError {
    move |e| CliError::Solver {
        kind,
        message: e.to_string(),
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

enum Curve {
    Mixed(MixedCurve2D),
    Profile(ProfileCurve, &'static str),
}

impl ShapeArgs {
    fn is_3d(&self) -> bool {
        self.c.is_some() || self.gamma.is_some() || self.ellipsoid.is_some()
    }

    fn curve(&self) -> Result<Curve, CliError> {
        let explicit = self.a.is_some() || self.b.is_some() || self.alpha.is_some() || self.beta.is_some();
        let sources = [explicit, self.ellipse.is_some(), self.profile.is_some(), self.construct.is_some()];
        if sources.iter().filter(|&&s| s).count() != 1 {
            return Err(usage(
                "give exactly one of: --A/--B/--alpha[/--beta], --ellipse, --profile, --construct",
            ));
        }
        if self.is_3d() {
            return Err(usage("--C, --gamma and --ellipsoid describe surfaces, not curves"));
        }
        if let Some((a, b)) = self.ellipse {
            return MixedCurve2D::ellipse(a, b).map(Curve::Mixed).map_err(|e| usage(e.to_string()));
        }
        if let Some(ProfilePreset::Twin) = self.profile {
            return Ok(Curve::Profile(profile2d::twin_maximizer_profile(), "twin"));
        }
        if let Some(spec) = &self.construct {
            let components = spec
                .split(';')
                .map(|c| {
                    let v = parse_list(c, 2).or_else(|_| parse_list(c, 1).map(|v| vec![v[0], v[0]]))?;
                    Ok((v[0], v[1]))
                })
                .collect::<Result<Vec<_>, String>>()
                .map_err(usage)?;
            let spec = ProfileConstructionSpec::new(components).map_err(|e| usage(e.to_string()))?;
            let profile = profile2d::construct_profile(&spec).map_err(solver("construction"))?;
            return Ok(Curve::Profile(profile, "constructed"));
        }
        let (Some(a), Some(b), Some(alpha)) = (self.a, self.b, self.alpha) else {
            return Err(usage("--A, --B and --alpha are required (--beta defaults to --alpha)"));
        };
        MixedCurve2D::new(a, b, alpha, self.beta.unwrap_or(alpha))
            .map(Curve::Mixed)
            .map_err(|e| usage(e.to_string()))
    }

    fn surface(&self) -> Result<Superellipsoid3D, CliError> {
        if self.ellipse.is_some() || self.profile.is_some() || self.construct.is_some() {
            return Err(usage("--ellipse, --profile and --construct describe curves, not surfaces"));
        }
        let explicit = [self.a, self.b, self.c, self.alpha, self.beta, self.gamma]
            .iter()
            .any(Option::is_some);
        let s = match (self.ellipsoid, explicit) {
            (Some((a, b, c)), false) => Superellipsoid3D::ellipsoid(a, b, c),
            (None, true) => {
                let (Some(a), Some(b), Some(c), Some(alpha)) = (self.a, self.b, self.c, self.alpha) else {
                    return Err(usage("--A, --B, --C and --alpha are required (--beta, --gamma default to --alpha)"));
                };
                Superellipsoid3D::new(a, b, c, alpha, self.beta.unwrap_or(alpha), self.gamma.unwrap_or(alpha))
            }
            _ => return Err(usage("give either --ellipsoid or --A/--B/--C/--alpha[/--beta/--gamma]")),
        };
        s.map_err(|e| usage(e.to_string()))
    }
}

fn rect_metrics(r: Rectangle) -> Value {
    let m = r.metrics();
    json!({ "area": m.area, "perimeter": m.perimeter, "ratio": m.ratio })
}

fn box_metrics(b: Box3) -> Value {
    let m = b.metrics();
    json!({
        "volume": m.volume,
        "surface_area": m.surface_area,
        "edge_sum": m.edge_sum,
        "v_over_s32": m.v_over_s32(),
        "v_over_l3": m.v_over_l3(),
        "s_over_l2": m.s_over_l2(),
    })
}

fn critical_json(c: &CriticalPoint) -> Value {
    json!({
        "vertex": [c.rect.x, c.rect.y],
        "lambda": c.lambda,
        "objective_value": c.objective_value,
        "kind": c.kind,
    })
}

fn curve_inputs(curve: &Curve) -> Value {
    match curve {
        Curve::Mixed(c) => json!({ "A": c.a, "B": c.b, "alpha": c.alpha, "beta": c.beta }),
        Curve::Profile(p, name) => json!({ "profile": name, "A": p.a(), "B": p.b(), "definition": p.to_json() }),
    }
}

fn surface_inputs(s: &Superellipsoid3D) -> Value {
    json!({ "A": s.a, "B": s.b, "C": s.c, "alpha": s.alpha, "beta": s.beta, "gamma": s.gamma })
}

fn envelope(
    inputs: Value,
    optimum: Value,
    critical_points: Vec<Value>,
    classification: impl Into<String>,
    residuals: Value,
    tag: &str,
) -> Value {
    json!({
        "inputs": inputs,
        "optimum": optimum,
        "critical_points": critical_points,
        "classification": classification.into(),
        "residuals": residuals,
        "paper_reference_tag": tag,
    })
}

fn rect_optimum(r: Option<Rectangle>) -> Value {
    match r {
        Some(r) => json!({ "vertex": [r.x, r.y], "metrics": rect_metrics(r) }),
        None => Value::Null,
    }
}

fn report_optimum(report: &SolveReport) -> Option<Rectangle> {
    report.global_max.or(report.global_min).map(|c| c.rect)
}

fn snake(v: impl serde::Serialize) -> String {
    serde_json::to_value(v)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

fn solve2d(shape: &ShapeArgs, objective: Objective2d) -> Result<Value, CliError> {
    let curve = shape.curve()?;
    let inputs = json!({ "command": "solve2d", "curve": curve_inputs(&curve), "objective": format!("{objective:?}").to_lowercase() });
    match (&curve, objective) {
        (Curve::Mixed(c), Objective2d::Area) => {
            let cp = curves2d::max_area_critical_point(c);
            Ok(envelope(
                inputs,
                rect_optimum(Some(cp.rect)),
                vec![critical_json(&cp)],
                "unique_max_no_min",
                json!({ "on_curve": c.residual(cp.rect.x, cp.rect.y).abs(), "stationarity": c.area_stationarity(cp.rect, cp.lambda) }),
                if c.alpha == 2.0 && c.beta == 2.0 { "ellipse-max-area" } else { "mixed-curve-max-area" },
            ))
        }
        (Curve::Mixed(c), Objective2d::Perimeter) => {
            let report = curves2d::optimal_perimeter_rects(c);
            let interior: Vec<&CriticalPoint> = report.critical_points.iter().filter(|p| p.kind != CriticalKind::Boundary).collect();
            let on_curve = interior.iter().map(|p| c.residual(p.rect.x, p.rect.y).abs()).fold(0.0, f64::max);
            let stat = interior.iter().map(|p| c.perimeter_stationarity(p.rect, p.lambda)).fold(0.0, f64::max);
            let tag = if !c.equal_exponents() {
                "mixed-curve-perimeter"
            } else if c.alpha == 2.0 {
                "ellipse-max-perimeter"
            } else {
                "superellipse-perimeter"
            };
            Ok(envelope(
                inputs,
                rect_optimum(report_optimum(&report)),
                report.critical_points.iter().map(critical_json).collect(),
                snake(report.existence_note),
                json!({ "on_curve": on_curve, "stationarity": stat }),
                tag,
            ))
        }
        (Curve::Mixed(c), Objective2d::Ratio) => {
            let (r, _) = curves2d::best_ratio_rect(c).map_err(solver("root_finding"))?;
            let cp = CriticalPoint { rect: r, lambda: 0.0, objective_value: r.metrics().ratio, kind: CriticalKind::InteriorMax };
            Ok(envelope(
                inputs,
                rect_optimum(Some(r)),
                vec![critical_json(&cp)],
                "square",
                json!({ "on_curve": c.residual(r.x, r.y).abs(), "stationarity": (r.x - r.y).abs() }),
                "square-best-ratio",
            ))
        }
        (Curve::Profile(p, _), Objective2d::Area) => {
            let report = profile2d::max_area_rects(p, 1e-6);
            let on_curve = report.critical_points.iter().map(|c| (c.rect.y - p.eval(c.rect.x)).abs()).fold(0.0, f64::max);
            let stat = report
                .critical_points
                .iter()
                .filter_map(|c| p.deriv1(c.rect.x).map(|d| (p.eval(c.rect.x) + c.rect.x * d).abs()))
                .fold(0.0, f64::max);
            Ok(envelope(
                inputs,
                rect_optimum(report.global_max.map(|c| c.rect)),
                report.critical_points.iter().map(critical_json).collect(),
                snake(report.existence_note),
                json!({ "on_curve": on_curve, "stationarity": stat }),
                "profile-max-area",
            ))
        }
        (Curve::Profile(p, _), Objective2d::Perimeter) => {
            let per = profile2d::perimeter_rects(p, 1e-6);
            let interior: Vec<&CriticalPoint> = per.report.critical_points.iter().filter(|c| c.kind != CriticalKind::Boundary).collect();
            let on_curve = interior.iter().map(|c| (c.rect.y - p.eval(c.rect.x)).abs()).fold(0.0, f64::max);
            let stat = interior
                .iter()
                .filter_map(|c| p.deriv1(c.rect.x).map(|d| (1.0 + d).abs()))
                .fold(0.0, f64::max);
            Ok(envelope(
                inputs,
                rect_optimum(report_optimum(&per.report)),
                per.report.critical_points.iter().map(critical_json).collect(),
                format!("{}/{}", snake(per.report.existence_note), snake(per.case)),
                json!({ "on_curve": on_curve, "stationarity": stat }),
                "profile-perimeter",
            ))
        }
        (Curve::Profile(p, _), Objective2d::Ratio) => {
            let r = profile2d::best_ratio_rect(p).map_err(solver("root_finding"))?;
            let cp = CriticalPoint { rect: r, lambda: 0.0, objective_value: r.metrics().ratio, kind: CriticalKind::InteriorMax };
            Ok(envelope(
                inputs,
                rect_optimum(Some(r)),
                vec![critical_json(&cp)],
                "square",
                json!({ "on_curve": (p.eval(r.x) - r.y).abs(), "stationarity": 0.0 }),
                "square-best-ratio",
            ))
        }
    }
}

fn box_point(vertex: Box3, lambda: f64, value: f64, kind: &str) -> Value {
    json!({ "vertex": [vertex.x, vertex.y, vertex.z], "lambda": lambda, "objective_value": value, "kind": kind })
}

fn box_optimum(b: Box3) -> Value {
    json!({ "vertex": [b.x, b.y, b.z], "metrics": box_metrics(b) })
}

fn solve3d(shape: &ShapeArgs, objective: Objective3d, seeds: usize) -> Result<Value, CliError> {
    let s = shape.surface()?;
    let inputs = json!({ "command": "solve3d", "surface": surface_inputs(&s), "objective": format!("{objective:?}").to_lowercase() });
    let on_surface = |b: Box3| s.residual(b).abs();
    match objective {
        Objective3d::Volume => {
            let (b, m) = surfaces3d::max_volume_box(&s);
            Ok(envelope(
                inputs,
                box_optimum(b),
                vec![box_point(b, f64::NAN, m.volume, "interior_max")],
                "unique_max",
                json!({ "on_surface": on_surface(b) }),
                "superellipsoid-max-volume",
            ))
        }
        Objective3d::Surface if s.exponents() == [2.0; 3] => {
            let sol = surfaces3d::max_surface_area_ellipsoid(s.a, s.b, s.c).map_err(solver("cubic"))?;
            let b = sol.vertex;
            Ok(envelope(
                inputs,
                box_optimum(b),
                vec![box_point(b, sol.lambda, sol.s_max, "interior_max")],
                if sol.boundary_ok { "unique_max" } else { "boundary_check_failed" },
                json!({
                    "on_surface": on_surface(b),
                    "cubic": sol.cubic.eval(sol.lambda).abs(),
                    "lagrange": lagrange3d::lagrange_residual(&s, b).1,
                }),
                "ellipsoid-max-surface-area",
            ))
        }
        Objective3d::Surface => {
            let rep = lagrange3d::max_surface_area_box(&s, seeds).map_err(solver("lagrange"))?;
            let points = rep
                .interior_optima
                .iter()
                .map(|o| box_point(o.vertex, o.lambda, o.s, "interior_max"))
                .collect();
            let (optimum, class, res) = match rep.global {
                GlobalOutcome::Interior { vertex, .. } => {
                    let best = rep.interior_optima[0];
                    (box_optimum(vertex), "interior_max", json!({ "on_surface": on_surface(vertex), "lagrange": best.residual }))
                }
                GlobalOutcome::Boundary { .. } => (Value::Null, "boundary_supremum", json!({ "on_surface": 0.0, "lagrange": 0.0 })),
            };
            let mut out = envelope(inputs, optimum, points, class, res, "superellipsoid-max-surface-area");
            out["boundary_supremum"] = json!(rep.boundary_supremum);
            Ok(out)
        }
        Objective3d::Edge => {
            let sol = surfaces3d::max_edge_sum_box(&s).map_err(solver("hypothesis"))?;
            Ok(envelope(
                inputs,
                box_optimum(sol.vertex),
                vec![box_point(sol.vertex, sol.lambda, sol.metrics.edge_sum, "interior_max")],
                snake(sol.flag),
                json!({ "on_surface": on_surface(sol.vertex) }),
                "superellipsoid-max-edge-sum",
            ))
        }
        Objective3d::Ratio => {
            let (b, m) = surfaces3d::cube_for_ratio(&s).map_err(solver("root_finding"))?;
            Ok(envelope(
                inputs,
                box_optimum(b),
                vec![box_point(b, 0.0, m.v_over_s32(), "interior_max")],
                "cube",
                json!({ "on_surface": on_surface(b) }),
                "cube-best-ratio",
            ))
        }
    }
}

fn oracle_cmd(shape: &ShapeArgs, objective: &str, resolution: Option<usize>, rounds: Option<usize>) -> Result<Value, CliError> {
    if shape.is_3d() || shape.ellipsoid.is_some() {
        let s = shape.surface()?;
        let obj = match objective {
            "volume" => BoxObjective::Volume,
            "surface" | "surface_area" => BoxObjective::SurfaceArea,
            "edge" | "edge_sum" => BoxObjective::EdgeSum,
            "v_over_s32" => BoxObjective::VOverS32,
            "v_over_l3" => BoxObjective::VOverL3,
            "s_over_l2" => BoxObjective::SOverL2,
            other => return Err(usage(format!("unknown 3D objective {other:?}"))),
        };
        let d = GridSpec::default_3d();
        let grid = GridSpec::new(resolution.unwrap_or(d.resolution()), rounds.unwrap_or(d.refinement_rounds())).map_err(|e| usage(e.to_string()))?;
        let r = oracle::grid_best_box(&s, obj, grid);
        let mut opt = box_optimum(r.vertex);
        opt["value"] = json!(r.value);
        return Ok(envelope(
            json!({ "command": "oracle", "surface": surface_inputs(&s), "objective": objective, "resolution": grid.resolution(), "rounds": grid.refinement_rounds() }),
            opt,
            vec![],
            "grid_optimum",
            json!({ "on_surface": s.residual(r.vertex).abs(), "round_values": r.round_values }),
            "grid-oracle-3d",
        ));
    }
    let curve = shape.curve()?;
    let obj = match objective {
        "area" => RectObjective::Area,
        "perimeter" => RectObjective::Perimeter,
        "ratio" => RectObjective::Ratio,
        "minus_perimeter" | "min_perimeter" => RectObjective::MinusPerimeter,
        other => return Err(usage(format!("unknown 2D objective {other:?}"))),
    };
    let d = GridSpec::default_2d();
    let grid = GridSpec::new(resolution.unwrap_or(d.resolution()), rounds.unwrap_or(d.refinement_rounds())).map_err(|e| usage(e.to_string()))?;
    let (r, resid) = match &curve {
        Curve::Mixed(c) => {
            let r = oracle::grid_best_rect(c, obj, grid);
            let res = c.residual(r.rect.x, r.rect.y).abs();
            (r, res)
        }
        Curve::Profile(p, _) => {
            let r = oracle::grid_best_rect(p, obj, grid);
            let res = (p.eval(r.rect.x) - r.rect.y).abs();
            (r, res)
        }
    };
    let mut opt = rect_optimum(Some(r.rect));
    opt["value"] = json!(r.value);
    Ok(envelope(
        json!({ "command": "oracle", "curve": curve_inputs(&curve), "objective": objective, "resolution": grid.resolution(), "rounds": grid.refinement_rounds() }),
        opt,
        vec![],
        "grid_optimum",
        json!({ "on_curve": resid, "round_values": r.round_values }),
        "grid-oracle-2d",
    ))
}

fn explore_cmd((a, b): (f64, f64), samples: usize, local_steps: usize, seed: u64) -> Result<Value, CliError> {
    let r = oracle::explore_quadrilaterals(a, b, samples, local_steps, seed).map_err(|e| usage(e.to_string()))?;
    let q = r.best_perimeter_quad;
    let violation = r.perimeter_violation || r.ratio_violation;
    Ok(envelope(
        json!({ "command": "explore", "ellipse": [a, b], "samples": samples, "local_steps": local_steps, "seed": seed }),
        json!({
            "vertex": q.vertices(a, b).iter().map(|v| json!([v.0, v.1])).collect::<Vec<_>>(),
            "metrics": { "perimeter": q.perimeter(a, b), "area": q.area(a, b), "ratio": q.ratio(a, b) },
        }),
        vec![],
        if violation { "bound_exceeded" } else { "no_violation" },
        json!({
            "best_perimeter": r.best_perimeter,
            "perimeter_bound": r.perimeter_bound,
            "perimeter_excess": r.best_perimeter - r.perimeter_bound,
            "best_ratio": r.best_ratio,
            "ratio_excess": r.best_ratio - r.ratio_bound,
            "rhombus_perimeter": r.rhombus_perimeter,
        }),
        "ellipse-quadrilateral-explorer",
    ))
}

fn render_cmd(preset: Option<&str>, shape: &ShapeArgs, objective: Objective2d) -> Result<String, CliError> {
    let scene = match preset {
        Some(name) => render::preset_scene(name).map_err(|e| usage(format!("{e}; presets: {}", render::PRESETS.join(", "))))?,
        None => {
            let solved = solve2d(shape, objective)?;
            let rects: Vec<(Rectangle, Style)> = solved["critical_points"]
                .as_array()
                .into_iter()
                .flatten()
                .filter_map(|c| {
                    let v = c["vertex"].as_array()?;
                    let rect = Rectangle { x: v[0].as_f64()?, y: v[1].as_f64()? };
                    let style = match c["kind"].as_str()? {
                        "interior_max" => Style::Maximum,
                        "interior_min" => Style::Minimum,
                        _ => return None,
                    };
                    Some((rect, style))
                })
                .collect();
            let base = match shape.curve()? {
                Curve::Mixed(c) => Scene::new(&c, render::DEFAULT_SAMPLES),
                Curve::Profile(p, _) => Scene::new(&p, render::DEFAULT_SAMPLES),
            };
            rects.into_iter().fold(base, |s, (r, st)| s.with_rect(r, st))
        }
    };
    render::render_scene(&scene).map_err(solver("render"))
}

/// Rounds every number to 10 significant digits; non-finite numbers become
/// `null`.
pub fn round_numbers(v: Value) -> Value {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(f) if n.is_f64() => {
                if f.is_finite() {
                    json!(format!("{f:.9e}").parse::<f64>().unwrap())
                } else {
                    Value::Null
                }
            }
            _ => Value::Number(n),
        },
        Value::Array(a) => Value::Array(a.into_iter().map(round_numbers).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_numbers(v))).collect()),
        other => other,
    }
}

fn text_view(v: &Value) -> String {
    let mut s = String::new();
    if let Some(tag) = v["paper_reference_tag"].as_str() {
        s.push_str(&format!("case: {tag}\n"));
    }
    s.push_str(&format!("classification: {}\n", v["classification"].as_str().unwrap_or("")));
    if let Some(opt) = v.get("optimum").filter(|o| !o.is_null()) {
        s.push_str(&format!("vertex: {}\n", opt["vertex"]));
        if let Some(m) = opt["metrics"].as_object() {
            for (k, val) in m {
                s.push_str(&format!("{k}: {val}\n"));
            }
        }
    } else {
        s.push_str("optimum: none\n");
    }
    for c in v["critical_points"].as_array().into_iter().flatten() {
        s.push_str(&format!("critical point {} {} value {}\n", c["kind"].as_str().unwrap_or(""), c["vertex"], c["objective_value"]));
    }
    if let Some(r) = v["residuals"].as_object() {
        for (k, val) in r {
            s.push_str(&format!("residual {k}: {val}\n"));
        }
    }
    s
}

/// Output of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn emit(value: Value, out: &OutputArgs) -> Result<String, CliError> {
    let value = round_numbers(value);
    let body = match out.format {
        Format::Json => serde_json::to_string_pretty(&value).unwrap() + "\n",
        Format::Text => text_view(&value),
    };
    write_or_return(body, out.output.as_ref())
}

fn write_or_return(body: String, path: Option<&PathBuf>) -> Result<String, CliError> {
    match path {
        Some(p) => {
            std::fs::write(p, body).map_err(solver("io"))?;
            Ok(String::new())
        }
        None => Ok(body),
    }
}

fn dispatch(cli: Cli) -> Result<(String, i32), CliError> {
    match cli.command {
        Command::Solve2d { shape, objective, out } => Ok((emit(solve2d(&shape, objective)?, &out)?, 0)),
        Command::Solve3d { shape, objective, seeds, out } => Ok((emit(solve3d(&shape, objective, seeds)?, &out)?, 0)),
        Command::Oracle { shape, objective, resolution, rounds, out } => {
            Ok((emit(oracle_cmd(&shape, &objective, resolution, rounds)?, &out)?, 0))
        }
        Command::Explore { ellipse, samples, local_steps, seed, out } => {
            Ok((emit(explore_cmd(ellipse, samples, local_steps, seed)?, &out)?, 0))
        }
        Command::Render { preset, shape, objective, output } => {
            let svg = render_cmd(preset.as_deref(), &shape, objective)?;
            Ok((write_or_return(svg, output.as_ref())?, 0))
        }
        Command::PaperSuite { format } => {
            let checks = suite::run();
            let code = if checks.iter().all(|c| c.passed) { 0 } else { 1 };
            let body = match format {
                Format::Text => suite::format_table(&checks),
                Format::Json => serde_json::to_string_pretty(&round_numbers(json!({ "checks": checks }))).unwrap() + "\n",
            };
            Ok((body, code))
        }
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code: 2, stdout: String::new(), stderr: text }
            };
        }
    };
    match dispatch(cli) {
        Ok((stdout, code)) => Outcome { code, stdout, stderr: String::new() },
        Err(e @ CliError::Usage(_)) => Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {}\n\nFor more information, try '--help'.\n", match &e {
                CliError::Usage(m) => m,
                _ => unreachable!(),
            }),
        },
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: serde_json::to_string_pretty(&e.to_json()).unwrap() + "\n",
            stderr: String::new(),
        },
    }
}
