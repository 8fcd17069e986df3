use nalgebra::DMatrix;

use super::curve::{dft_coefficients, LEVEL_TOL};
use super::ComparisonSpectrum;
use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, to_f64, Real};
use crate::spectrum::{group_levels, Level, Provenance};

/// `μ = l(l+1)/R²` with multiplicity `2l+1`; `K − M²` vanishes on a sphere.
pub fn sphere_comparison_spectrum<T: Real>(radius: T, j_max: usize) -> Result<ComparisonSpectrum<T>> {
    if !(radius > T::zero()) {
        return Err(Error::InvalidInput(format!(
            "sphere radius must be positive, got {radius}"
        )));
    }
    let mut levels: Vec<Level<T>> = Vec::new();
    let mut total = 0;
    let mut l = 0usize;
    while total < j_max {
        let lf = from_usize::<T>(l);
        levels.push(Level {
            value: lf * (lf + T::one()) / (radius * radius),
            multiplicity: 2 * l + 1,
        });
        total += 2 * l + 1;
        l += 1;
    }
    Ok(ComparisonSpectrum {
        levels,
        theta: None,
        provenance: Provenance::ExactComparison,
        discretization: "spherical harmonics".into(),
    })
}

/// Lowest eigenvalues of one angular mode `m` on the torus: the generalized
/// problem `−(p ψ')' + w q ψ = μ w ψ` with `p = ρ/r`, `w = rρ`,
/// `q = m²/ρ² − R²/(4r²ρ²)`, `ρ = R + r cos u`, in the basis `e^{inu}`,
/// `|n| ≤ modes`. All coefficients are even in `u`, so the Galerkin matrices
/// are real symmetric.
fn torus_mode<T: Real>(big: T, small: T, m: usize, modes: usize, potential: bool) -> Result<Vec<T>> {
    let samples = 8 * modes + 16;
    let (mut p, mut wq, mut w) = (Vec::new(), Vec::new(), Vec::new());
    let mf = from_usize::<T>(m);
    for i in 0..samples {
        let u = T::two_pi() * from_usize::<T>(i) / from_usize::<T>(samples);
        let rho = big + small * u.cos();
        let mut q = mf * mf / (rho * rho);
        if potential {
            q -= big * big / (lit::<T>(4.0) * small * small * rho * rho);
        }
        p.push(rho / small);
        w.push(small * rho);
        wq.push(small * rho * q);
    }
    let pc = dft_coefficients(&p, 2 * modes);
    let wc = dft_coefficients(&w, 2 * modes);
    let qc = dft_coefficients(&wq, 2 * modes);
    let size = 2 * modes + 1;
    let mut stiff = DMatrix::<T>::zeros(size, size);
    let mut mass = DMatrix::<T>::zeros(size, size);
    for a in 0..size {
        let na = from_usize::<T>(a) - from_usize::<T>(modes);
        for b in 0..size {
            let nb = from_usize::<T>(b) - from_usize::<T>(modes);
            let d = a + 2 * modes - b;
            stiff[(a, b)] = na * nb * pc[d].re + qc[d].re;
            mass[(a, b)] = wc[d].re;
        }
    }
    let chol = mass
        .cholesky()
        .ok_or_else(|| Error::NoConvergence("torus mass matrix is not positive definite".into()))?;
    let l = chol.l();
    let linv = l
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::NoConvergence("singular torus mass factor".into()))?;
    let c = &linv * stiff * linv.transpose();
    let c = (&c + c.transpose()) * lit::<T>(0.5);
    let mut ev: Vec<T> = c.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    Ok(ev)
}

/// Converged lowest eigenvalues of mode `m` up to `cap` (inclusive), doubling
/// the basis until they move by less than 1e−8 relative.
fn converged_mode<T: Real>(
    big: T,
    small: T,
    m: usize,
    cap: T,
    count: usize,
    potential: bool,
) -> Result<(Vec<T>, usize)> {
    let mut modes = 24usize.max(count + 8);
    let mut prev = torus_mode(big, small, m, modes, potential)?;
    for _ in 0..5 {
        let next = torus_mode(big, small, m, 2 * modes, potential)?;
        let keep = prev.len().min(count).min(modes);
        let shift = prev[..keep]
            .iter()
            .zip(&next)
            .filter(|(a, _)| **a <= cap)
            .map(|(a, b)| (*a - *b).abs() / a.abs().max(T::one()))
            .fold(T::zero(), |x, y| x.max(y));
        if shift <= lit(1e-8) {
            let out: Vec<T> = next.into_iter().take(keep).filter(|&v| v <= cap).collect();
            return Ok((out, 2 * modes));
        }
        prev = next;
        modes *= 2;
    }
    Err(Error::Resolution(format!(
        "torus mode m={m} did not converge by {modes} Fourier modes"
    )))
}

/// Lowest `j_max` eigenvalues of `−Δ_Γ + K − M²` on the torus with major
/// radius `R` and tube radius `r`.
pub fn torus_comparison_spectrum<T: Real>(big: T, small: T, j_max: usize) -> Result<ComparisonSpectrum<T>> {
    torus_comparison_spectrum_with(big, small, j_max, true)
}

/// As [`torus_comparison_spectrum`]; `potential = false` drops `K − M²`.
pub fn torus_comparison_spectrum_with<T: Real>(
    big: T,
    small: T,
    j_max: usize,
    potential: bool,
) -> Result<ComparisonSpectrum<T>> {
    if !(small > T::zero() && big > small) {
        return Err(Error::InvalidInput(format!(
            "torus needs 0 < r < R, got R={big}, r={small}"
        )));
    }
    if j_max == 0 {
        return Err(Error::InvalidInput("j_max must be at least 1".into()));
    }
    let inf: T = lit(f64::INFINITY);
    let (base, mut basis) = converged_mode(big, small, 0, inf, j_max, potential)?;
    let mut all: Vec<T> = base;
    let mut m = 1usize;
    loop {
        all.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
        let cap = if all.len() >= j_max { all[j_max - 1] } else { inf };
        let (vals, used) = converged_mode(big, small, m, cap, j_max, potential)?;
        basis = basis.max(used);
        if vals.is_empty() {
            break;
        }
        for v in vals {
            all.push(v);
            all.push(v);
        }
        m += 1;
        if m > 100_000 {
            return Err(Error::NoConvergence(
                "torus angular-mode merge did not terminate".into(),
            ));
        }
    }
    all.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    let levels = group_levels(&all, lit(LEVEL_TOL));
    let mut kept = Vec::new();
    let mut total = 0;
    for l in levels {
        if total >= j_max {
            break;
        }
        total += l.multiplicity;
        kept.push(l);
    }
    Ok(ComparisonSpectrum {
        levels: kept,
        theta: None,
        provenance: Provenance::ComparisonOperator,
        discretization: format!(
            "torus R={} r={} angular modes 0..{} fourier modes<={basis}",
            to_f64(big),
            to_f64(small),
            m - 1
        ),
    })
}
