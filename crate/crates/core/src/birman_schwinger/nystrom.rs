//! Nyström discretizations of the Birman–Schwinger operator `Q_κ`.

use nalgebra::DMatrix;

use super::kernel::{green_kernel, k0_over_two_pi, Dimension};
use crate::error::{Error, Result};
use crate::geometry::{CurveGeometry, SurfaceGeometry};
use crate::quadrature::periodic_log_weights;
use crate::scalar::{from_usize, lit, Real};
use crate::specfun::bessel_i0_series;

/// Dense symmetric matrix whose eigenvalues approximate those of `Q_κ`.
#[derive(Clone, Debug)]
pub struct BsMatrix<T: Real> {
    pub kappa: T,
    pub dimension: Dimension,
    pub matrix: DMatrix<T>,
    /// Whether the 2D log-weight split was localized by a smooth window.
    pub windowed: bool,
}

impl<T: Real> BsMatrix<T> {
    pub fn len(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.nrows() == 0
    }

    /// `max |A_ij − A_ji| / max |A|`.
    pub fn symmetry_defect(&self) -> T {
        let a = &self.matrix;
        let scale = a.amax();
        let mut d = T::zero();
        for i in 0..a.nrows() {
            for j in 0..i {
                d = d.max((a[(i, j)] - a[(j, i)]).abs());
            }
        }
        if scale > T::zero() {
            d / scale
        } else {
            d
        }
    }

    /// All eigenvalues, largest first.
    pub fn eigenvalues_desc(&self) -> Vec<T> {
        let mut ev: Vec<T> = self.matrix.clone().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        ev
    }
}

fn check_kappa<T: Real>(kappa: T) -> Result<()> {
    if !(kappa > T::zero()) || !kappa.is_finite() {
        return Err(Error::Domain(format!("kappa must be positive and finite, got {kappa}")));
    }
    Ok(())
}

/// Smooth cutoff equal to 1 on `|d| ≤ d1` and 0 on `|d| ≥ d2`.
fn window<T: Real>(d: T, d1: T, d2: T) -> T {
    let d = d.abs();
    if d <= d1 {
        return T::one();
    }
    if d >= d2 {
        return T::zero();
    }
    let x = (d - d1) / (d2 - d1);
    let f = |y: T| {
        if y > T::zero() {
            (-T::one() / y).exp()
        } else {
            T::zero()
        }
    };
    let (a, b) = (f(T::one() - x), f(x));
    a / (a + b)
}

/// Parameters of the localized log split for a curve of Jacobian
/// `jac = L/2π` at spectral parameter `kappa`: `None` means no window.
fn window_radius<T: Real>(kappa: T, jac: T) -> Option<(T, T)> {
    let d2 = lit::<T>(8.0) / (kappa * jac);
    if d2 >= T::pi() {
        None
    } else {
        Some((d2 * lit(0.3), d2))
    }
}

/// Smallest even node count that resolves the kernel at `kappa` well enough
/// for ~1e−11 accuracy on smooth curves.
pub fn recommended_curve_nodes<T: Real>(length: T, kappa: T, floor: usize) -> usize {
    let need = (lit::<T>(32.0) * kappa * length / T::two_pi()).ceil();
    let need = need.to_usize().unwrap_or(usize::MAX);
    let n = need.max(floor);
    n + n % 2
}

/// Real `N × N` block of the self-interaction on a curve (the `n = 0` lattice
/// term), using the periodic log-weight rule.
///
/// `K₀(κr)` is split as `M₁(t,τ) ln(4 sin²((t−τ)/2)) + M₂(t,τ)` with
/// `M₁ = −(jac/4π) I₀(κr) φ(t−τ)`. For large `κL` the window `φ` confines the
/// split to `κr ≲ 8`, which avoids cancellation between `I₀` growth and `K₀`
/// decay.
pub(crate) fn curve_self_block<T: Real>(curve: &CurveGeometry<T>, kappa: T) -> Result<(DMatrix<T>, bool)> {
    let n = curve.len();
    if n < 16 || !n.is_multiple_of(2) {
        return Err(Error::InvalidInput(format!(
            "curve Nyström needs an even node count ≥ 16, got {n}"
        )));
    }
    let half = n / 2;
    let jac = curve.length() / T::two_pi();
    let h = T::two_pi() / from_usize(n);
    let trap = T::pi() / from_usize(half);
    let log_w = periodic_log_weights::<T>(n);
    let win = window_radius(kappa, jac);
    let c1 = -jac / (lit::<T>(4.0) * T::pi());
    let euler: T = lit(0.577_215_664_901_532_9);
    let diag = jac / T::two_pi() * (-euler - (kappa * jac * lit(0.5)).ln());
    let pts = curve.points();
    let mut a = DMatrix::<T>::zeros(n, n);
    for i in 0..n {
        a[(i, i)] = log_w[0] * c1 + trap * diag;
        for j in 0..i {
            let m = i - j;
            let mut d = h * from_usize::<T>(m);
            if d > T::pi() {
                d -= T::two_pi();
            }
            let r = (pts[i] - pts[j]).norm();
            let kr = kappa * r;
            let phi = win.map_or(T::one(), |(d1, d2)| window(d, d1, d2));
            let k = k0_over_two_pi(kr)? * jac;
            let value = if phi > T::zero() {
                let m1 = c1 * bessel_i0_series(kr) * phi;
                let s = (d * lit(0.5)).sin();
                let lg = (lit::<T>(4.0) * s * s).ln();
                log_w[m] * m1 + trap * (k - m1 * lg)
            } else {
                trap * k
            };
            a[(i, j)] = value;
            a[(j, i)] = value;
        }
    }
    Ok((a, win.is_some()))
}

/// Birman–Schwinger matrix on a closed curve.
pub fn assemble_curve_bs<T: Real>(curve: &CurveGeometry<T>, kappa: T) -> Result<BsMatrix<T>> {
    check_kappa(kappa)?;
    let (matrix, windowed) = curve_self_block(curve, kappa)?;
    Ok(BsMatrix {
        kappa,
        dimension: Dimension::Two,
        matrix,
        windowed,
    })
}

/// Birman–Schwinger matrix on a closed surface, symmetrized by the square
/// roots of the quadrature weights.
///
/// Diagonal entries replace the singular term by the exact surface moments
/// less their discrete counterparts: with `G = (1/r − κ + κ²r/2 − …)/4π`,
/// `Bᵢᵢ = (ΔM₋₁ − κ wᵢ + κ² ΔM₁/2)/4π`. Accurate while `κ h ≲ 1`.
pub fn assemble_surface_bs<T: Real>(surface: &SurfaceGeometry<T>, kappa: T) -> Result<BsMatrix<T>> {
    check_kappa(kappa)?;
    let n = surface.len();
    if n < 16 {
        return Err(Error::InvalidInput(format!(
            "surface Nyström needs at least 16 nodes, got {n}"
        )));
    }
    let moments = surface.singular_moments()?;
    let w = surface.weights();
    let sw: Vec<T> = w.iter().map(|x| x.sqrt()).collect();
    let pts: Vec<_> = surface.nodes().iter().map(|p| p.p).collect();
    let four_pi = lit::<T>(4.0) * T::pi();
    let mut a = DMatrix::<T>::zeros(n, n);
    let mut d_inv: Vec<T> = moments.iter().map(|m| m.0).collect();
    let mut d_one: Vec<T> = moments.iter().map(|m| m.1).collect();
    for i in 0..n {
        for j in 0..i {
            let r = (pts[i] - pts[j]).norm();
            if !(r > T::zero()) {
                return Err(Error::IllConditionedGeometry {
                    node: Some(i),
                    detail: format!("coincides with node {j}"),
                });
            }
            let g = green_kernel(Dimension::Three, kappa, r)?;
            let v = sw[i] * sw[j] * g;
            a[(i, j)] = v;
            a[(j, i)] = v;
            d_inv[i] -= w[j] / r;
            d_inv[j] -= w[i] / r;
            d_one[i] -= w[j] * r;
            d_one[j] -= w[i] * r;
        }
    }
    for i in 0..n {
        a[(i, i)] = (d_inv[i] - kappa * w[i] + kappa * kappa * lit(0.5) * d_one[i]) / four_pi;
    }
    Ok(BsMatrix {
        kappa,
        dimension: Dimension::Three,
        matrix: a,
        windowed: false,
    })
}
