//! Closed curves in ℝ² and closed surfaces in ℝ³ with their fundamental
//! forms and curvatures.

mod curve;
mod shapes;
mod surface;

pub use curve::{ClosedCurve, CurveGeometry};
pub use shapes::{Circle, Ellipse, FnCurve, PerturbedCircle, PerturbedSphere, Sphere, Torus};
pub use surface::{
    fd_jet, metric_tensor, surface_point, weingarten_and_curvatures, AxisKind, ChartJet, SurfaceChart, SurfaceGeometry,
    SurfacePoint,
};

use crate::scalar::{lit, Real};

/// `−k(s)²/4` at every curve node.
pub fn curve_effective_potential<T: Real>(curve: &CurveGeometry<T>) -> Vec<T> {
    curve.curvature().iter().map(|&k| -(k * k) * lit(0.25)).collect()
}

/// `K − M²` at every surface node.
pub fn surface_effective_potential<T: Real>(surface: &SurfaceGeometry<T>) -> Vec<T> {
    surface.effective_potential()
}
