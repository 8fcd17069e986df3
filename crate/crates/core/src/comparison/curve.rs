use nalgebra::DMatrix;
use num_complex::Complex;

use super::ComparisonSpectrum;
use crate::error::{Error, Result};
use crate::geometry::{curve_effective_potential, CurveGeometry};
use crate::scalar::{from_usize, lit, to_f64, Real};
use crate::spectrum::{group_levels, Provenance};

/// Relative gap below which eigenvalues are merged into one level.
pub(crate) const LEVEL_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug)]
pub struct CurveOptions {
    /// Fourier modes `|n| ≤ modes`; defaults to `min(N/4, max(64, j_max + 16))`.
    pub modes: Option<usize>,
    /// Set false to drop `−k²/4` (kinetic term only).
    pub potential: bool,
}

impl Default for CurveOptions {
    fn default() -> Self {
        CurveOptions {
            modes: None,
            potential: true,
        }
    }
}

/// `ĉ_m = (1/N) Σ_j c_j e^{−2πimj/N}` for `|m| ≤ max_m`, index `m + max_m`.
pub(crate) fn dft_coefficients<T: Real>(samples: &[T], max_m: usize) -> Vec<Complex<T>> {
    let n = samples.len();
    let nf: T = from_usize(n);
    let mut out = Vec::with_capacity(2 * max_m + 1);
    for mi in 0..=2 * max_m {
        let m = mi as i64 - max_m as i64;
        let mut acc = Complex::new(T::zero(), T::zero());
        for (j, &c) in samples.iter().enumerate() {
            let k = (m * j as i64).rem_euclid(n as i64) as usize;
            let ang = -T::two_pi() * from_usize::<T>(k) / nf;
            acc += Complex::new(ang.cos(), ang.sin()) * c;
        }
        out.push(acc / nf);
    }
    out
}

/// Lowest `j_max` eigenvalues of `−∂_s² − k(s)²/4` on one traversal of the
/// curve, with `ψ(s + L) = e^{iθ} ψ(s)` (periodic when `theta` is `None`).
pub fn curve_comparison_spectrum<T: Real>(
    curve: &CurveGeometry<T>,
    theta: Option<T>,
    j_max: usize,
) -> Result<ComparisonSpectrum<T>> {
    curve_comparison_spectrum_with(curve, theta, j_max, CurveOptions::default())
}

/// Fourier–Galerkin in `e^{i(2πn + θ)s/L}`: the kinetic part is diagonal and
/// the potential acts by convolution with its Fourier coefficients.
pub fn curve_comparison_spectrum_with<T: Real>(
    curve: &CurveGeometry<T>,
    theta: Option<T>,
    j_max: usize,
    options: CurveOptions,
) -> Result<ComparisonSpectrum<T>> {
    let n = curve.len();
    let limit = (n / 4).saturating_sub(1);
    let modes = options.modes.unwrap_or_else(|| limit.min(64.max(j_max + 16)));
    if modes > limit {
        return Err(Error::Resolution(format!(
            "{modes} Fourier modes need at least {} curve nodes, have {n}",
            4 * modes
        )));
    }
    let size = 2 * modes + 1;
    if j_max == 0 || j_max > size / 2 {
        return Err(Error::Resolution(format!(
            "j_max = {j_max} exceeds the {} resolvable modes at N = {n}",
            size / 2
        )));
    }
    let th = theta.unwrap_or_else(T::zero);
    let potential = curve_effective_potential(curve);
    let coeffs = if options.potential {
        dft_coefficients(&potential, 2 * modes)
    } else {
        vec![Complex::new(T::zero(), T::zero()); 4 * modes + 1]
    };
    let len = curve.length();
    let mut h = DMatrix::<Complex<T>>::zeros(size, size);
    for a in 0..size {
        let na = from_usize::<T>(a) - from_usize::<T>(modes);
        let k = (T::two_pi() * na + th) / len;
        for b in 0..size {
            // (n_a − n_b) + 2·modes
            h[(a, b)] = coeffs[a + 2 * modes - b];
        }
        h[(a, a)] += Complex::new(k * k, T::zero());
    }
    let mut ev: Vec<T> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    // Keep whole degenerate blocks at the cut.
    let levels = group_levels(&ev[..size / 2], lit(LEVEL_TOL));
    let mut kept = Vec::new();
    let mut total = 0;
    for l in levels {
        if total >= j_max {
            break;
        }
        total += l.multiplicity;
        kept.push(l);
    }
    let tail = coeffs
        .first()
        .map_or(0.0, |c| to_f64((c.re * c.re + c.im * c.im).sqrt()));
    Ok(ComparisonSpectrum {
        levels: kept,
        theta,
        provenance: Provenance::ComparisonOperator,
        discretization: format!("fourier-galerkin modes={modes} N={n} coeff_tail={tail:.3e}"),
    })
}
