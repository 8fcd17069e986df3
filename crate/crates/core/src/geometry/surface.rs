//! Chart-based closed surfaces in ℝ³: fundamental forms, curvatures and
//! tensor-product quadrature grids.

use std::cell::Cell;
use std::sync::{Arc, OnceLock};

use nalgebra::{Matrix2, Vector3};

use crate::error::{Error, Result};
use crate::quadrature::{fejer_first, integrate};
use crate::scalar::{from_usize, lit, to_f64, Real};

/// How the first chart coordinate closes up.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AxisKind {
    /// `u` is periodic over its range.
    Periodic,
    /// `u` runs between two poles where the chart degenerates (√g → 0).
    PoleCapped,
}

/// Chart point with first and second partial derivatives.
#[derive(Clone, Copy, Debug)]
pub struct ChartJet<T: Real> {
    pub p: Vector3<T>,
    pub pu: Vector3<T>,
    pub pv: Vector3<T>,
    pub puu: Vector3<T>,
    pub puv: Vector3<T>,
    pub pvv: Vector3<T>,
}

/// A single global chart `(u, v) ↦ p(u, v)` of a closed surface. The second
/// coordinate is always periodic on `[0, v_period)`.
///
/// Orientation: `p_u × p_v` must point away from the enclosed volume.
pub trait SurfaceChart<T: Real>: Send + Sync {
    fn u_range(&self) -> (T, T);

    fn u_kind(&self) -> AxisKind;

    fn v_period(&self) -> T;

    fn point(&self, u: T, v: T) -> Vector3<T>;

    fn jet(&self, _u: T, _v: T) -> Option<ChartJet<T>> {
        None
    }

    /// True when the geometry is invariant under shifts in `v`.
    fn v_invariant(&self) -> bool {
        false
    }
}

fn diff_steps<T: Real>(chart: &dyn SurfaceChart<T>) -> (T, T) {
    let (u0, u1) = chart.u_range();
    ((u1 - u0) * lit(1e-4), chart.v_period() * lit(1e-4))
}

const D1: [(f64, f64); 4] = [
    (-2.0, 1.0 / 12.0),
    (-1.0, -8.0 / 12.0),
    (1.0, 8.0 / 12.0),
    (2.0, -1.0 / 12.0),
];
const D2: [(f64, f64); 5] = [
    (-2.0, -1.0 / 12.0),
    (-1.0, 16.0 / 12.0),
    (0.0, -30.0 / 12.0),
    (1.0, 16.0 / 12.0),
    (2.0, -1.0 / 12.0),
];

/// Fourth-order central-difference jet.
pub fn fd_jet<T: Real>(chart: &dyn SurfaceChart<T>, u: T, v: T) -> ChartJet<T> {
    let (hu, hv) = diff_steps(chart);
    let at = |a: f64, b: f64| chart.point(u + hu * lit(a), v + hv * lit(b));
    let mut pu = Vector3::zeros();
    let mut pv = Vector3::zeros();
    for &(k, c) in &D1 {
        pu += at(k, 0.0) * lit::<T>(c);
        pv += at(0.0, k) * lit::<T>(c);
    }
    let mut puu = Vector3::zeros();
    let mut pvv = Vector3::zeros();
    for &(k, c) in &D2 {
        puu += at(k, 0.0) * lit::<T>(c);
        pvv += at(0.0, k) * lit::<T>(c);
    }
    let mut puv = Vector3::zeros();
    for &(a, ca) in &D1 {
        for &(b, cb) in &D1 {
            puv += at(a, b) * lit::<T>(ca * cb);
        }
    }
    ChartJet {
        p: chart.point(u, v),
        pu: pu / hu,
        pv: pv / hv,
        puu: puu / (hu * hu),
        puv: puv / (hu * hv),
        pvv: pvv / (hv * hv),
    }
}

/// `g_{μν} = p_{,μ}·p_{,ν}`.
pub fn metric_tensor<T: Real>(pu: &Vector3<T>, pv: &Vector3<T>) -> Result<Matrix2<T>> {
    if !(pu.iter().chain(pv.iter()).all(|x| x.is_finite())) {
        return Err(Error::DegenerateParametrization {
            node: None,
            det_g: f64::NAN,
        });
    }
    let g = Matrix2::new(pu.dot(pu), pu.dot(pv), pu.dot(pv), pv.dot(pv));
    let det = g.determinant();
    let scale = g[(0, 0)] * g[(1, 1)];
    if !(det > scale * lit::<T>(1e-14).max(T::eps() * lit(16.0))) || !(scale > T::zero()) {
        return Err(Error::DegenerateParametrization {
            node: None,
            det_g: to_f64(det),
        });
    }
    Ok(g)
}

/// Differential geometry at one chart point.
#[derive(Clone, Copy, Debug)]
pub struct SurfacePoint<T: Real> {
    pub u: T,
    pub v: T,
    pub p: Vector3<T>,
    pub pu: Vector3<T>,
    pub pv: Vector3<T>,
    pub normal: Vector3<T>,
    pub metric: Matrix2<T>,
    pub sqrt_g: T,
    /// Mixed Weingarten tensor `h_μ^ν`, row index μ.
    pub weingarten: Matrix2<T>,
    pub k_plus: T,
    pub k_minus: T,
    pub gauss: T,
    pub mean: T,
}

impl<T: Real> SurfacePoint<T> {
    /// `K − M² = −(k₊ − k₋)²/4`, never positive.
    pub fn effective_potential(&self) -> T {
        let d = self.k_plus - self.k_minus;
        -(d * d) * lit(0.25)
    }
}

/// Principal, Gauss and mean curvature from the Weingarten tensor
/// `h = b g⁻¹` with `b_{μν}` the second fundamental form.
pub fn weingarten_and_curvatures<T: Real>(b: &Matrix2<T>, g: &Matrix2<T>) -> Result<(Matrix2<T>, T, T, T, T)> {
    let bnorm = b.abs().max().max(lit::<T>(1e-300).max(T::eps() * T::eps() * T::eps()));
    let asym = (b[(0, 1)] - b[(1, 0)]).abs();
    let tol = lit::<T>(1e-6).max(T::eps().sqrt() * lit(10.0));
    if asym > tol * bnorm {
        return Err(Error::IllConditionedGeometry {
            node: None,
            detail: format!("second fundamental form asymmetric by {:e}", to_f64(asym / bnorm)),
        });
    }
    let b = (b + b.transpose()) * lit::<T>(0.5);
    let ginv = g.try_inverse().ok_or(Error::DegenerateParametrization {
        node: None,
        det_g: to_f64(g.determinant()),
    })?;
    let h = b * ginv;
    let gauss = h.determinant();
    let mean = h.trace() * lit(0.5);
    let half_diff = (h[(0, 0)] - h[(1, 1)]) * lit(0.5);
    let mut disc = half_diff * half_diff + h[(0, 1)] * h[(1, 0)];
    let scale = (mean * mean)
        .max(gauss.abs())
        .max(lit::<T>(1e-300).max(T::eps() * T::eps() * T::eps()));
    if disc < T::zero() {
        if disc < -scale * tol {
            return Err(Error::IllConditionedGeometry {
                node: None,
                detail: format!("complex principal curvatures (M²−K = {:e})", to_f64(disc)),
            });
        }
        disc = T::zero();
    }
    let root = disc.sqrt();
    Ok((h, mean + root, mean - root, gauss, mean))
}

/// Builds the full pointwise geometry. Analytic jets are used when the chart
/// provides them; otherwise the second fundamental form comes from
/// finite-difference normal derivatives, `b_{μν} = −n_{,μ}·p_{,ν}`.
pub fn surface_point<T: Real>(chart: &dyn SurfaceChart<T>, u: T, v: T) -> Result<SurfacePoint<T>> {
    let (jet, analytic) = match chart.jet(u, v) {
        Some(j) => (j, true),
        None => (fd_jet(chart, u, v), false),
    };
    let g = metric_tensor(&jet.pu, &jet.pv)?;
    let cross = jet.pu.cross(&jet.pv);
    let sqrt_g = cross.norm();
    let normal = cross / sqrt_g;
    let b = if analytic {
        Matrix2::new(
            normal.dot(&jet.puu),
            normal.dot(&jet.puv),
            normal.dot(&jet.puv),
            normal.dot(&jet.pvv),
        )
    } else {
        let (hu, hv) = diff_steps(chart);
        let n_at = |a: f64, b: f64| -> Result<Vector3<T>> {
            let j = fd_jet(chart, u + hu * lit(a), v + hv * lit(b));
            let c = j.pu.cross(&j.pv);
            let len = c.norm();
            if !(len > T::zero()) {
                return Err(Error::DegenerateParametrization { node: None, det_g: 0.0 });
            }
            Ok(c / len)
        };
        let mut nu = Vector3::zeros();
        let mut nv = Vector3::zeros();
        for &(k, c) in &D1 {
            nu += n_at(k, 0.0)? * lit::<T>(c);
            nv += n_at(0.0, k)? * lit::<T>(c);
        }
        let nu = nu / hu;
        let nv = nv / hv;
        Matrix2::new(-nu.dot(&jet.pu), -nu.dot(&jet.pv), -nv.dot(&jet.pu), -nv.dot(&jet.pv))
    };
    let (weingarten, k_plus, k_minus, gauss, mean) = weingarten_and_curvatures(&b, &g)?;
    Ok(SurfacePoint {
        u,
        v,
        p: jet.p,
        pu: jet.pu,
        pv: jet.pv,
        normal,
        metric: g,
        sqrt_g,
        weingarten,
        k_plus,
        k_minus,
        gauss,
        mean,
    })
}

fn area_element<T: Real>(chart: &dyn SurfaceChart<T>, u: T, v: T) -> T {
    let j = chart.jet(u, v).unwrap_or_else(|| fd_jet(chart, u, v));
    j.pu.cross(&j.pv).norm()
}

/// Tensor-product quadrature grid on a surface chart.
///
/// Periodic axes use the trapezoid rule. A pole-capped `u` axis uses Fejér's
/// first rule, whose midpoint nodes avoid the poles.
#[derive(Clone)]
pub struct SurfaceGeometry<T: Real> {
    chart: Arc<dyn SurfaceChart<T>>,
    nu: usize,
    nv: usize,
    nodes: Vec<SurfacePoint<T>>,
    weights: Vec<T>,
    moments: OnceLock<Vec<(T, T)>>,
}

impl<T: Real> std::fmt::Debug for SurfaceGeometry<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SurfaceGeometry")
            .field("nu", &self.nu)
            .field("nv", &self.nv)
            .finish()
    }
}

impl<T: Real> SurfaceGeometry<T> {
    pub fn on_grid(chart: Arc<dyn SurfaceChart<T>>, nu: usize, nv: usize) -> Result<Self> {
        if nu < 2 || nv < 3 {
            return Err(Error::InvalidInput(format!("surface grid {nu}×{nv} too small")));
        }
        let (u0, u1) = chart.u_range();
        let span = u1 - u0;
        let pi = T::pi();
        let (us, wu): (Vec<T>, Vec<T>) = match chart.u_kind() {
            AxisKind::Periodic => {
                let h = span / from_usize(nu);
                ((0..nu).map(|i| u0 + h * from_usize::<T>(i)).collect(), vec![h; nu])
            }
            AxisKind::PoleCapped => {
                // Fejér weights integrate g(θ) sin θ on [0, π]; divide the sine
                // back out since √g already carries it.
                let (th, w) = fejer_first::<T>(nu);
                let scale = span / pi;
                th.iter()
                    .zip(&w)
                    .map(|(&t, &wi)| (u0 + t * scale, wi / t.sin() * scale))
                    .unzip()
            }
        };
        let hv = chart.v_period() / from_usize(nv);
        let mut nodes = Vec::with_capacity(nu * nv);
        let mut weights = Vec::with_capacity(nu * nv);
        for (i, (&u, &w)) in us.iter().zip(&wu).enumerate() {
            for j in 0..nv {
                let v = hv * from_usize::<T>(j);
                let node = i * nv + j;
                let sp = surface_point(chart.as_ref(), u, v).map_err(|e| match e {
                    Error::DegenerateParametrization { det_g, .. } => Error::DegenerateParametrization {
                        node: Some(node),
                        det_g,
                    },
                    Error::IllConditionedGeometry { detail, .. } => Error::IllConditionedGeometry {
                        node: Some(node),
                        detail,
                    },
                    other => other,
                })?;
                weights.push(w * hv * sp.sqrt_g);
                nodes.push(sp);
            }
        }
        Ok(SurfaceGeometry {
            chart,
            nu,
            nv,
            nodes,
            weights,
            moments: OnceLock::new(),
        })
    }

    pub fn chart(&self) -> &dyn SurfaceChart<T> {
        self.chart.as_ref()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.nu, self.nv)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[SurfacePoint<T>] {
        &self.nodes
    }

    /// Quadrature weights including the area element.
    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn area(&self) -> T {
        self.weights.iter().fold(T::zero(), |s, &w| s + w)
    }

    pub fn effective_potential(&self) -> Vec<T> {
        self.nodes.iter().map(SurfacePoint::effective_potential).collect()
    }

    /// Exact surface moments `(∫ dA/|x−xᵢ|, ∫ |x−xᵢ| dA)` for every node,
    /// computed on first use and cached.
    pub fn singular_moments(&self) -> Result<&[(T, T)]> {
        if let Some(m) = self.moments.get() {
            return Ok(m);
        }
        let mut out = Vec::with_capacity(self.len());
        let invariant = self.chart.v_invariant();
        for i in 0..self.nu {
            if invariant {
                let m = node_moments(self.chart.as_ref(), self.nodes[i * self.nv].u, T::zero())?;
                out.extend(std::iter::repeat_n(m, self.nv));
            } else {
                for j in 0..self.nv {
                    let n = &self.nodes[i * self.nv + j];
                    out.push(node_moments(self.chart.as_ref(), n.u, n.v)?);
                }
            }
        }
        let _ = self.moments.set(out);
        Ok(self.moments.get().map(Vec::as_slice).unwrap_or(&[]))
    }
}

/// Whole-surface moments about the chart point `(u, v)` by Duffy
/// integration: the chart rectangle is split into four triangles with apex at
/// the node, which removes the `1/r` singularity.
fn node_moments<T: Real>(chart: &dyn SurfaceChart<T>, u: T, v: T) -> Result<(T, T)> {
    let (u0, u1) = chart.u_range();
    let half_v = chart.v_period() * lit(0.5);
    let (ulo, uhi) = match chart.u_kind() {
        AxisKind::PoleCapped => (u0, u1),
        AxisKind::Periodic => {
            let h = (u1 - u0) * lit(0.5);
            (u - h, u + h)
        }
    };
    let (vlo, vhi) = (v - half_v, v + half_v);
    let x0 = chart.point(u, v);
    let corners = [(ulo, vlo), (uhi, vlo), (uhi, vhi), (ulo, vhi)];
    let tol = lit::<T>(1e-11).max(T::eps() * lit(1e3));
    let (mut m_inv, mut m_one) = (T::zero(), T::zero());
    for k in 0..4 {
        let b = corners[k];
        let c = corners[(k + 1) % 4];
        let (e1u, e1v) = (b.0 - u, b.1 - v);
        let (e2u, e2v) = (c.0 - b.0, c.1 - b.1);
        let det = (e1u * e2v - e1v * e2u).abs();
        for which in 0..2 {
            let failure: Cell<Option<Error>> = Cell::new(None);
            let outer = integrate(
                |t: T| {
                    let du = e1u + e2u * t;
                    let dv = e1v + e2v * t;
                    let inner = integrate(
                        |s: T| {
                            let (uu, vv) = (u + du * s, v + dv * s);
                            let r = (chart.point(uu, vv) - x0).norm();
                            let da = area_element(chart, uu, vv) * s * det;
                            if which == 0 {
                                if r > T::zero() {
                                    da / r
                                } else {
                                    // Limit s/r as s → 0 along this ray.
                                    let j = chart.jet(u, v).unwrap_or_else(|| fd_jet(chart, u, v));
                                    (j.pu * du + j.pv * dv).norm().recip() * area_element(chart, u, v) * det
                                }
                            } else {
                                da * r
                            }
                        },
                        T::zero(),
                        T::one(),
                        T::zero(),
                        tol,
                    );
                    match inner {
                        Ok(r) => r.value,
                        Err(e) => {
                            failure.set(Some(e));
                            T::zero()
                        }
                    }
                },
                T::zero(),
                T::one(),
                T::zero(),
                tol,
            )?;
            if let Some(e) = failure.take() {
                return Err(e);
            }
            if which == 0 {
                m_inv += outer.value;
            } else {
                m_one += outer.value;
            }
        }
    }
    Ok((m_inv, m_one))
}
