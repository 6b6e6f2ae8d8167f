//! Brute-force checks that share no code with the solvers: grid search over
//! inscribed rectangles and boxes, and a random search over quadrilaterals
//! inscribed in an ellipse.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};
use thiserror::Error;

use crate::curves2d::{InscribingCurve, Rectangle};
use crate::surfaces3d::{Box3, Superellipsoid3D};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("grid resolution must be at least 100, got {0}")]
    ResolutionTooLow(usize),
    #[error("explorer needs at least 10^4 samples, got {0}")]
    TooFewSamples(usize),
    #[error("ellipse semi-axes must be positive, got ({0}, {1})")]
    InvalidEllipse(f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    resolution: usize,
    refinement_rounds: usize,
}

impl GridSpec {
    pub fn new(resolution: usize, refinement_rounds: usize) -> Result<Self, OracleError> {
        if resolution < 100 {
            return Err(OracleError::ResolutionTooLow(resolution));
        }
        Ok(Self {
            resolution,
            refinement_rounds,
        })
    }

    /// 2000 points, 3 refinement rounds.
    pub fn default_2d() -> Self {
        Self::new(2000, 3).unwrap()
    }

    /// 700 points per axis, 2 refinement rounds.
    pub fn default_3d() -> Self {
        Self::new(700, 2).unwrap()
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn refinement_rounds(&self) -> usize {
        self.refinement_rounds
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RectObjective {
    Area,
    Perimeter,
    Ratio,
    /// `-P`, so that maximizing finds the smallest perimeter.
    MinusPerimeter,
}

impl RectObjective {
    pub fn eval(self, r: Rectangle) -> f64 {
        let m = r.metrics();
        match self {
            RectObjective::Area => m.area,
            RectObjective::Perimeter => m.perimeter,
            RectObjective::Ratio => {
                if m.perimeter > 0.0 {
                    m.ratio
                } else {
                    0.0
                }
            }
            RectObjective::MinusPerimeter => -m.perimeter,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoxObjective {
    Volume,
    SurfaceArea,
    EdgeSum,
    VOverS32,
    VOverL3,
    SOverL2,
}

impl BoxObjective {
    pub fn eval(self, b: Box3) -> f64 {
        let m = b.metrics();
        let ratio = |num: f64, den: f64| if den > 0.0 { num / den } else { 0.0 };
        match self {
            BoxObjective::Volume => m.volume,
            BoxObjective::SurfaceArea => m.surface_area,
            BoxObjective::EdgeSum => m.edge_sum,
            BoxObjective::VOverS32 => ratio(m.volume, m.full_surface().powf(1.5)),
            BoxObjective::VOverL3 => ratio(m.volume, m.edge_sum.powi(3)),
            BoxObjective::SOverL2 => ratio(m.full_surface(), m.edge_sum * m.edge_sum),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridRect {
    pub rect: Rectangle,
    pub value: f64,
    /// Incumbent value after the coarse scan and each refinement round.
    pub round_values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridBox {
    pub vertex: Box3,
    pub value: f64,
    pub round_values: Vec<f64>,
}

/// First index of the largest value; NaN never wins.
fn argmax(values: impl Iterator<Item = f64>) -> Option<(usize, f64)> {
    values
        .enumerate()
        .fold(None, |best, (i, v)| match best {
            Some((_, bv)) if !(v > bv) => best,
            _ if v.is_nan() => best,
            _ => Some((i, v)),
        })
}

fn window(center: f64, half: f64, lo: f64, hi: f64) -> (f64, f64) {
    ((center - half).max(lo), (center + half).min(hi))
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> + Clone {
    (0..=n).map(move |i| if i == n { hi } else { lo + (hi - lo) * i as f64 / n as f64 })
}

/// Exhaustive scan of the first-quadrant vertex `x ∈ [0, A]`, `y` from the
/// curve, followed by rounds on windows shrunk 10× around the incumbent.
pub fn grid_best_rect<C: InscribingCurve + ?Sized>(curve: &C, objective: RectObjective, grid: GridSpec) -> GridRect {
    let a = curve.x_extent();
    let eval = |x: f64| objective.eval(Rectangle { x, y: curve.height_at(x) });
    let n = grid.resolution;
    let (mut lo, mut hi) = (0.0, a);
    let mut best: Option<(f64, f64)> = None;
    let mut round_values = Vec::with_capacity(grid.refinement_rounds + 1);
    for _ in 0..=grid.refinement_rounds {
        let xs = linspace(lo, hi, n);
        if let Some((i, v)) = argmax(xs.clone().map(eval)) {
            let x = xs.clone().nth(i).unwrap();
            if best.is_none_or(|(_, bv)| v > bv) {
                best = Some((x, v));
            }
        }
        let (bx, bv) = best.expect("grid has finite values");
        round_values.push(bv);
        (lo, hi) = window(bx, (hi - lo) / 20.0, 0.0, a);
    }
    let (x, value) = best.unwrap();
    GridRect {
        rect: Rectangle { x, y: curve.height_at(x) },
        value,
        round_values,
    }
}

fn scan_rows(
    surface: &Superellipsoid3D,
    objective: BoxObjective,
    (ulo, uhi): (f64, f64),
    (vlo, vhi): (f64, f64),
    n: usize,
) -> Option<(Box3, f64)> {
    let us: Vec<f64> = linspace(ulo, uhi, n).collect();
    let row = |&u: &f64| {
        let x = surface.a * u;
        let cells = linspace(vlo, vhi, n).map(|v| {
            let y = surface.b * v;
            match surface.z_at(x, y) {
                Some(z) => objective.eval(Box3::new(x, y, z)),
                None => f64::NAN,
            }
        });
        argmax(cells)
    };
    #[cfg(feature = "parallel")]
    let rows: Vec<Option<(usize, f64)>> = {
        use rayon::prelude::*;
        us.par_iter().map(row).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<Option<(usize, f64)>> = us.iter().map(row).collect();

    let (i, val) = argmax(rows.iter().map(|r| r.map_or(f64::NAN, |r| r.1)))?;
    let j = rows[i].unwrap().0;
    let v = linspace(vlo, vhi, n).nth(j).unwrap();
    let (x, y) = (surface.a * us[i], surface.b * v);
    Some((Box3::new(x, y, surface.z_at(x, y).unwrap()), val))
}

/// Scan over `(x, y)` with `z` from the surface, refined like
/// [`grid_best_rect`].
pub fn grid_best_box(surface: &Superellipsoid3D, objective: BoxObjective, grid: GridSpec) -> GridBox {
    let n = grid.resolution;
    let (mut ur, mut vr) = ((0.0, 1.0), (0.0, 1.0));
    let mut best: Option<(Box3, f64)> = None;
    let mut round_values = Vec::with_capacity(grid.refinement_rounds + 1);
    for _ in 0..=grid.refinement_rounds {
        if let Some((b, v)) = scan_rows(surface, objective, ur, vr, n) {
            if best.is_none_or(|(_, bv)| v > bv) {
                best = Some((b, v));
            }
        }
        let (bb, bv) = best.expect("grid has points on the surface");
        round_values.push(bv);
        ur = window(bb.x / surface.a, (ur.1 - ur.0) / 20.0, 0.0, 1.0);
        vr = window(bb.y / surface.b, (vr.1 - vr.0) / 20.0, 0.0, 1.0);
    }
    let (vertex, value) = best.unwrap();
    GridBox {
        vertex,
        value,
        round_values,
    }
}

/// Quadrilateral with vertices `(a cos t, b sin t)` at increasing angles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quadrilateral {
    pub angles: [f64; 4],
}

impl Quadrilateral {
    pub fn new(mut angles: [f64; 4]) -> Self {
        for t in &mut angles {
            *t = t.rem_euclid(TAU);
        }
        angles.sort_by(f64::total_cmp);
        Self { angles }
    }

    pub fn vertices(&self, a: f64, b: f64) -> [(f64, f64); 4] {
        self.angles.map(|t| (a * t.cos(), b * t.sin()))
    }

    pub fn perimeter(&self, a: f64, b: f64) -> f64 {
        let v = self.vertices(a, b);
        (0..4)
            .map(|i| {
                let (p, q) = (v[i], v[(i + 1) % 4]);
                (q.0 - p.0).hypot(q.1 - p.1)
            })
            .sum()
    }

    /// Shoelace area; positive for counter-clockwise vertex order.
    pub fn area(&self, a: f64, b: f64) -> f64 {
        let v = self.vertices(a, b);
        0.5 * (0..4)
            .map(|i| {
                let (p, q) = (v[i], v[(i + 1) % 4]);
                p.0 * q.1 - q.0 * p.1
            })
            .sum::<f64>()
    }

    pub fn ratio(&self, a: f64, b: f64) -> f64 {
        let p = self.perimeter(a, b);
        self.area(a, b) / (p * p)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExplorerReport {
    pub samples: usize,
    pub best_perimeter: f64,
    pub best_perimeter_quad: Quadrilateral,
    pub best_ratio: f64,
    pub best_ratio_quad: Quadrilateral,
    /// `4√(a² + b²)`.
    pub perimeter_bound: f64,
    pub ratio_bound: f64,
    pub perimeter_violation: bool,
    pub ratio_violation: bool,
    /// The rhombus through the axis endpoints and its perimeter.
    pub rhombus: Quadrilateral,
    pub rhombus_perimeter: f64,
}

fn polish_quad(q: Quadrilateral, steps: usize, f: &impl Fn(&Quadrilateral) -> f64) -> (Quadrilateral, f64) {
    let mut cur = q;
    let mut val = f(&cur);
    let mut delta = 0.1;
    for _ in 0..steps {
        let mut improved = false;
        for i in 0..4 {
            for sign in [1.0, -1.0] {
                let mut angles = cur.angles;
                angles[i] += sign * delta;
                let cand = Quadrilateral::new(angles);
                let cv = f(&cand);
                if cv > val {
                    cur = cand;
                    val = cv;
                    improved = true;
                }
            }
        }
        if !improved {
            delta *= 0.5;
        }
    }
    (cur, val)
}

/// Random quadrilaterals inscribed in `x²/a² + y²/b² = 1`, each polished by
/// coordinate ascent on its four angles, once for the perimeter and once
/// for `R = S/P²`. Identical inputs give identical output.
pub fn explore_quadrilaterals(
    a: f64,
    b: f64,
    samples: usize,
    local_steps: usize,
    rng_seed: u64,
) -> Result<ExplorerReport, OracleError> {
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(OracleError::InvalidEllipse(a, b));
    }
    if samples < 10_000 {
        return Err(OracleError::TooFewSamples(samples));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let starts: Vec<Quadrilateral> = (0..samples)
        .map(|_| Quadrilateral::new(std::array::from_fn(|_| rng.random::<f64>() * TAU)))
        .collect();

    let perim = |q: &Quadrilateral| q.perimeter(a, b);
    let ratio = |q: &Quadrilateral| q.ratio(a, b);
    let run = |q: &Quadrilateral| (polish_quad(*q, local_steps, &perim), polish_quad(*q, local_steps, &ratio));
    #[cfg(feature = "parallel")]
    let results: Vec<_> = {
        use rayon::prelude::*;
        starts.par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<_> = starts.iter().map(run).collect();

    let (pi, best_perimeter) = argmax(results.iter().map(|r| r.0 .1)).unwrap();
    let (ri, best_ratio) = argmax(results.iter().map(|r| r.1 .1)).unwrap();
    let perimeter_bound = 4.0 * a.hypot(b);
    let ratio_bound = 1.0 / 16.0;
    let rhombus = Quadrilateral::new([0.0, PI / 2.0, PI, 1.5 * PI]);
    Ok(ExplorerReport {
        samples,
        best_perimeter,
        best_perimeter_quad: results[pi].0 .0,
        best_ratio,
        best_ratio_quad: results[ri].1 .0,
        perimeter_bound,
        ratio_bound,
        perimeter_violation: best_perimeter > perimeter_bound + 1e-9,
        ratio_violation: best_ratio > ratio_bound + 1e-9,
        rhombus,
        rhombus_perimeter: rhombus.perimeter(a, b),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves2d::MixedCurve2D;

    #[test]
    fn grid_spec_validation() {
        assert_eq!(GridSpec::new(99, 1), Err(OracleError::ResolutionTooLow(99)));
        assert_eq!(GridSpec::default_2d().resolution(), 2000);
        assert_eq!(GridSpec::default_3d().refinement_rounds(), 2);
    }

    #[test]
    fn argmax_takes_first_and_skips_nan() {
        let v = [1.0, f64::NAN, 3.0, 3.0, 2.0];
        assert_eq!(argmax(v.into_iter()), Some((2, 3.0)));
        assert_eq!(argmax([f64::NAN].into_iter()), None);
    }

    #[test]
    fn rect_oracle_values() {
        let e = MixedCurve2D::ellipse(4.0, 3.0).unwrap();
        let r = grid_best_rect(&e, RectObjective::Area, GridSpec::default_2d());
        assert!((r.value - 24.0).abs() < 1e-4);
        assert!(r.round_values.windows(2).all(|w| w[1] >= w[0]));

        let c = MixedCurve2D::superellipse(1.0, 2.0, 3.0).unwrap();
        let r = grid_best_rect(&c, RectObjective::Perimeter, GridSpec::default_2d());
        assert!((r.value - 9.789043259085902).abs() < 1e-4);

        let c = MixedCurve2D::superellipse(1.0, 8.0, 1.0 / 3.0).unwrap();
        let r = grid_best_rect(&c, RectObjective::MinusPerimeter, GridSpec::default_2d());
        assert!((-r.value - 2.18327885747436).abs() < 1e-4);
        let r = grid_best_rect(&c, RectObjective::Ratio, GridSpec::default_2d());
        assert!((r.value - 1.0 / 16.0).abs() < 1e-6);
    }

    #[test]
    fn box_oracle_values() {
        let g = GridSpec::new(300, 2).unwrap();
        let sphere = Superellipsoid3D::ellipsoid(1.0, 1.0, 1.0).unwrap();
        let r = grid_best_box(&sphere, BoxObjective::SurfaceArea, g);
        assert!((r.value - 4.0).abs() < 1e-3);

        let s = Superellipsoid3D::symmetric(1.0, 2.0, 3.0, 3.0).unwrap();
        let r = grid_best_box(&s, BoxObjective::SurfaceArea, g);
        assert!((r.value - 21.66252375377916).abs() < 1e-3);
        assert!(r.round_values.windows(2).all(|w| w[1] >= w[0]));

        let s = Superellipsoid3D::symmetric(1.0, 1.0, 1.0, 3.0).unwrap();
        let r = grid_best_box(&s, BoxObjective::Volume, g);
        assert!((r.value - 8.0 / 3.0).abs() < 1e-4);
    }

    #[test]
    fn quadrilateral_geometry() {
        let sq = Quadrilateral::new([PI / 4.0, 3.0 * PI / 4.0, 5.0 * PI / 4.0, 7.0 * PI / 4.0]);
        assert!((sq.perimeter(1.0, 1.0) - 4.0 * 2f64.sqrt()).abs() < 1e-14);
        assert!((sq.area(1.0, 1.0) - 2.0).abs() < 1e-14);
        assert!((sq.ratio(1.0, 1.0) - 1.0 / 16.0).abs() < 1e-15);
        let q = Quadrilateral::new([7.0, -1.0, 2.0, 0.5]);
        assert!(q.angles.windows(2).all(|w| w[0] <= w[1]));
        assert!(q.angles.iter().all(|&t| (0.0..TAU).contains(&t)));
    }

    #[test]
    fn explorer_circle_and_determinism() {
        let r = explore_quadrilaterals(1.0, 1.0, 10_000, 30, 7).unwrap();
        assert!(!r.perimeter_violation && !r.ratio_violation);
        assert!((r.best_perimeter - 4.0 * 2f64.sqrt()).abs() < 1e-6);
        let again = explore_quadrilaterals(1.0, 1.0, 10_000, 30, 7).unwrap();
        assert_eq!(r, again);
        assert!(explore_quadrilaterals(1.0, 1.0, 100, 30, 7).is_err());
    }
}
