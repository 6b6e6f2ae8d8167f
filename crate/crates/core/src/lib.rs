//! Optimal axis-aligned rectangles inscribed in symmetric plane curves and
//! optimal boxes inscribed in symmetric surfaces.
//!
//! The crate is organised by problem family:
//!
//! * [`numerics`]: bracketed root finding, the real cubic solver, Gamma/Beta.
//! * [`curves2d`]: closed forms for superellipses and mixed-exponent Lamé curves.
//! * [`profile2d`]: general decreasing profiles `|y| = f(|x|)`.
//! * [`surfaces3d`]: closed forms for superellipsoids.
//! * [`lagrange3d`]: numerical surface-area maximiser on mixed superellipsoids.
//! * [`oracle`]: brute-force grid search and the quadrilateral explorer.
//! * [`render`]: deterministic SVG scenes.
//! * [`suite`]: the regression table behind `inscribe paper-suite`.

// NaN-rejecting guards are written as negated comparisons on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod curves2d;
pub mod lagrange3d;
pub mod numerics;
pub mod oracle;
pub mod profile2d;
pub mod render;
pub mod suite;
pub mod surfaces3d;

pub use curves2d::{
    CriticalKind, CriticalPoint, ExistenceNote, MixedCurve2D, RectMetrics, Rectangle, SolveReport,
};


pub use profile2d::{PiecewisePoly, ProfileCurve};
pub use surfaces3d::{Box3, BoxMetrics, Superellipsoid3D};
