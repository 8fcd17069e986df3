//! Closed planar curves resampled at uniform arc length.

use nalgebra::Vector2;

use crate::error::{Error, Result};
use crate::quadrature::integrate;
use crate::scalar::{from_usize, lit, to_f64, Real};

/// A closed C² curve in the plane, parametrized on `[0, period)`.
pub trait ClosedCurve<T: Real>: Send + Sync {
    fn period(&self) -> T;

    fn point(&self, t: T) -> Vector2<T>;

    /// First and second parameter derivatives, when known in closed form.
    fn derivatives(&self, _t: T) -> Option<(Vector2<T>, Vector2<T>)> {
        None
    }
}

/// Fourth-order central differences with step `period * 1e-4`.
fn fd_derivatives<T: Real>(curve: &dyn ClosedCurve<T>, t: T) -> (Vector2<T>, Vector2<T>) {
    let h = curve.period() * lit(1e-4);
    let p = |k: f64| curve.point(t + h * lit(k));
    let (m2, m1, c, p1, p2) = (p(-2.0), p(-1.0), p(0.0), p(1.0), p(2.0));
    let d1: Vector2<T> = (m2 - p2 + (p1 - m1) * lit::<T>(8.0)) / (h * lit::<T>(12.0));
    let d2: Vector2<T> = ((p1 + m1) * lit::<T>(16.0) - (p2 + m2) - c * lit::<T>(30.0)) / (h * h * lit::<T>(12.0));
    (d1, d2)
}

fn derivatives<T: Real>(curve: &dyn ClosedCurve<T>, t: T) -> (Vector2<T>, Vector2<T>) {
    curve.derivatives(t).unwrap_or_else(|| fd_derivatives(curve, t))
}

/// Samples of a closed curve at `N` uniformly spaced arc-length nodes.
#[derive(Clone, Debug)]
pub struct CurveGeometry<T: Real> {
    period: T,
    length: T,
    params: Vec<T>,
    points: Vec<Vector2<T>>,
    tangents: Vec<Vector2<T>>,
    curvature: Vec<T>,
}

impl<T: Real> CurveGeometry<T> {
    /// Resamples `curve` at `n` nodes equally spaced in arc length.
    ///
    /// The length is computed by adaptive quadrature; node parameters solve
    /// `s(t_k) = k L / n` by Newton's method on the arc-length integral.
    pub fn resample_arclength(curve: &dyn ClosedCurve<T>, n: usize) -> Result<Self> {
        if n < 4 {
            return Err(Error::InvalidInput(format!("at least 4 curve nodes required, got {n}")));
        }
        let period = curve.period();
        if !(period > T::zero()) {
            return Err(Error::InvalidInput("curve period must be positive".into()));
        }
        let speed = |t: T| derivatives(curve, t).0.norm();
        let tol = lit::<T>(1e-13).max(T::eps() * lit(64.0));
        let length = integrate(speed, T::zero(), period, T::zero(), tol)?.value;
        if !(length > T::zero()) {
            return Err(Error::UnsupportedGeometry("curve has zero length".into()));
        }

        let gap = (curve.point(period) - curve.point(T::zero())).norm();
        let (d0, _) = derivatives(curve, T::zero());
        let (d1, _) = derivatives(curve, period);
        let seam_tol = length * lit::<T>(1e-8).max(T::eps() * lit(100.0));
        if gap > seam_tol || (d1 - d0).norm() > lit::<T>(1e-6) * d0.norm() {
            return Err(Error::UnsupportedGeometry(format!(
                "curve is not closed: seam gap {:e}",
                to_f64(gap)
            )));
        }

        let nf: T = from_usize(n);
        let step = length / nf;
        let mut params = Vec::with_capacity(n);
        params.push(T::zero());
        let mut t_prev = T::zero();
        let mut s_prev = T::zero();
        for k in 1..n {
            let target = step * from_usize::<T>(k);
            let mut t = t_prev + (target - s_prev) / speed(t_prev);
            let mut s_t = s_prev;
            for _ in 0..50 {
                s_t = s_prev + integrate(speed, t_prev, t, T::zero(), tol)?.value;
                let dt = (s_t - target) / speed(t);
                t -= dt;
                if dt.abs() <= T::eps() * lit::<T>(8.0) * period {
                    s_t = s_prev + integrate(speed, t_prev, t, T::zero(), tol)?.value;
                    break;
                }
            }
            params.push(t);
            t_prev = t;
            s_prev = s_t;
        }

        let mut points = Vec::with_capacity(n);
        let mut tangents = Vec::with_capacity(n);
        let mut curvature = Vec::with_capacity(n);
        for &t in &params {
            let (d1, d2) = derivatives(curve, t);
            let sp = d1.norm();
            points.push(curve.point(t));
            tangents.push(d1 / sp);
            curvature.push((d1.x * d2.y - d1.y * d2.x) / (sp * sp * sp));
        }

        let geometry = CurveGeometry {
            period,
            length,
            params,
            points,
            tangents,
            curvature,
        };
        geometry.check_self_intersection()?;
        Ok(geometry)
    }

    /// Pairwise minimum-distance heuristic: non-adjacent nodes closer than
    /// half the node spacing are treated as a crossing.
    fn check_self_intersection(&self) -> Result<()> {
        let n = self.len();
        let threshold = self.spacing() * lit(0.5);
        for i in 0..n {
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let d = (self.points[i] - self.points[j]).norm();
                if d < threshold {
                    return Err(Error::UnsupportedGeometry(format!(
                        "self-intersection: nodes {i} and {j} are {:e} apart",
                        to_f64(d)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn period(&self) -> T {
        self.period
    }

    pub fn length(&self) -> T {
        self.length
    }

    /// Arc-length spacing `L / N`.
    pub fn spacing(&self) -> T {
        self.length / from_usize(self.len())
    }

    pub fn params(&self) -> &[T] {
        &self.params
    }

    pub fn points(&self) -> &[Vector2<T>] {
        &self.points
    }

    pub fn tangents(&self) -> &[Vector2<T>] {
        &self.tangents
    }

    /// Signed curvature at each node.
    pub fn curvature(&self) -> &[T] {
        &self.curvature
    }

    /// `∮ k ds`, equal to `2π` times the winding number.
    pub fn total_turning(&self) -> T {
        self.curvature.iter().fold(T::zero(), |s, &k| s + k) * self.spacing()
    }

    /// Largest distance between two nodes.
    pub fn diameter(&self) -> T {
        let mut d = T::zero();
        for (i, a) in self.points.iter().enumerate() {
            for b in &self.points[i + 1..] {
                d = d.max((a - b).norm());
            }
        }
        d
    }

    /// Returns a copy translated by `offset`.
    pub fn translated(&self, offset: Vector2<T>) -> Self {
        let mut g = self.clone();
        for p in &mut g.points {
            *p += offset;
        }
        g
    }

    /// `(min, max)` of node coordinates along `axis` (0 = x, 1 = y).
    pub fn extent(&self, axis: usize) -> (T, T) {
        self.points
            .iter()
            .fold((self.points[0][axis], self.points[0][axis]), |(lo, hi), p| {
                (lo.min(p[axis]), hi.max(p[axis]))
            })
    }
}
