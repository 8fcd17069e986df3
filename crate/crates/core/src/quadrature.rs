//! Quadrature rules: Gauss–Legendre, adaptive Gauss–Kronrod, Fejér's first
//! rule and the periodic logarithmic-weight rule for closed curves.

use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, Real};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Result of an adaptive integration.
#[derive(Clone, Copy, Debug)]
pub struct Integral<T> {
    pub value: T,
    pub error: T,
    pub evaluations: usize,
}

fn gk15<T: Real, F: FnMut(T) -> T>(f: &mut F, a: T, b: T) -> (T, T) {
    let half = (b - a) * lit(0.5);
    let center = (a + b) * lit(0.5);
    let fc = f(center);
    let mut kronrod = fc * lit(WGK[7]);
    let mut gauss = fc * lit(WG[3]);
    for j in 0..7 {
        let dx = half * lit(XGK[j]);
        let s = f(center - dx) + f(center + dx);
        kronrod += s * lit(WGK[j]);
        if j % 2 == 1 {
            gauss += s * lit(WG[j / 2]);
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Globally adaptive 15-point Gauss–Kronrod integration of `f` over `[a, b]`.
///
/// Subdivides the interval with the largest error estimate until the total
/// estimate drops below `max(abs_tol, rel_tol * |value|)`.
pub fn integrate<T: Real, F: FnMut(T) -> T>(mut f: F, a: T, b: T, abs_tol: T, rel_tol: T) -> Result<Integral<T>> {
    const MAX_INTERVALS: usize = 2000;
    let (v, e) = gk15(&mut f, a, b);
    let mut parts = vec![(a, b, v, e)];
    let mut evaluations = 15;
    loop {
        let (value, error) = parts
            .iter()
            .fold((T::zero(), T::zero()), |(s, err), p| (s + p.2, err + p.3));
        let target = abs_tol.max(rel_tol * value.abs());
        if error <= target {
            return Ok(Integral {
                value,
                error,
                evaluations,
            });
        }
        if parts.len() >= MAX_INTERVALS {
            // Roundoff-limited integrands stop here; accept if the estimate is
            // within a few ulps of the requested tolerance.
            if error <= target * lit(1e3) {
                return Ok(Integral {
                    value,
                    error,
                    evaluations,
                });
            }
            return Err(Error::NoConvergence(format!(
                "adaptive quadrature: error estimate {:e} exceeds {:e}",
                crate::scalar::to_f64(error),
                crate::scalar::to_f64(target)
            )));
        }
        let (worst, _) = parts.iter().enumerate().fold(
            (0, T::zero()),
            |(wi, we), (i, p)| if p.3 > we { (i, p.3) } else { (wi, we) },
        );
        let (lo, hi, _, _) = parts.swap_remove(worst);
        let mid = (lo + hi) * lit(0.5);
        let (v1, e1) = gk15(&mut f, lo, mid);
        let (v2, e2) = gk15(&mut f, mid, hi);
        evaluations += 30;
        parts.push((lo, mid, v1, e1));
        parts.push((mid, hi, v2, e2));
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, ascending nodes.
pub fn gauss_legendre<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    assert!(n > 0, "Gauss-Legendre rule needs at least one node");
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    let nf: T = from_usize(n);
    let pi = T::pi();
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n.
        let fi: T = from_usize(i);
        let mut x = (pi * (fi + lit(0.75)) / (nf + lit(0.5))).cos();
        let mut dp = T::one();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= T::eps() * lit(4.0) {
                let (_, d) = legendre_with_derivative(n, x);
                dp = d;
                break;
            }
        }
        let w = lit::<T>(2.0) / ((T::one() - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = T::zero();
    }
    (nodes, weights)
}

fn legendre_with_derivative<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    for k in 2..=n {
        let kf: T = from_usize(k);
        let p2 = ((lit::<T>(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { p0 } else { p1 };
    let nf: T = from_usize(n);
    let d = nf * (x * p1 - p0) / (x * x - T::one());
    (p, d)
}

/// Fejér's first rule in the angle variable: nodes `θ_i = (i + 1/2)π/n` and
/// weights `w_i` with `Σ w_i g(θ_i) ≈ ∫_0^π g(θ) sin θ dθ`.
///
/// Exact for `g(θ) = cos(kθ)`, `k < n`; spectrally accurate for functions
/// that are smooth on the sphere.
pub fn fejer_first<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    let nf: T = from_usize(n);
    let pi = T::pi();
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        let theta = pi * (from_usize::<T>(i) + lit(0.5)) / nf;
        let mut s = T::zero();
        for k in 1..=n / 2 {
            let kf: T = from_usize(k);
            s += (lit::<T>(2.0) * kf * theta).cos() / (lit::<T>(4.0) * kf * kf - T::one());
        }
        nodes.push(theta);
        weights.push(lit::<T>(2.0) / nf * (T::one() - lit::<T>(2.0) * s));
    }
    (nodes, weights)
}

/// Weights `R_m`, `m = 0..2n`, of the periodic rule
/// `∫_0^{2π} ln(4 sin²((t-τ)/2)) f(τ) dτ ≈ Σ_j R_{|i-j|} f(t_j)` on the
/// uniform grid `t_j = πj/n` with `2n` nodes.
pub fn periodic_log_weights<T: Real>(nodes: usize) -> Vec<T> {
    assert!(
        nodes >= 2 && nodes.is_multiple_of(2),
        "log-weight rule needs an even node count"
    );
    let n = nodes / 2;
    let nf: T = from_usize(n);
    let pi = T::pi();
    (0..nodes)
        .map(|m| {
            let d = pi * from_usize::<T>(m) / nf;
            let mut s = T::zero();
            for k in 1..n {
                let kf: T = from_usize(k);
                s += (kf * d).cos() / kf;
            }
            -(lit::<T>(2.0) * pi / nf) * s - pi / (nf * nf) * (nf * d).cos()
        })
        .collect()
}
