//! Independent reference computations shared by the integration and
//! acceptance tests. Nothing here calls into the solver modules under test.
#![allow(dead_code)]

/// Solves `(A − σI) x = b` for a symmetric cyclic tridiagonal `A` with
/// diagonal `d`, couplings `e[i]` between `i` and `i+1 mod n`.
pub fn cyclic_solve(d: &[f64], e: &[f64], sigma: f64, b: &[f64]) -> Vec<f64> {
    let n = d.len();
    // Sherman–Morrison: A = T + u vᵀ with the corner couplings folded in.
    let gamma = -(d[0] - sigma);
    let mut diag: Vec<f64> = d.iter().map(|x| x - sigma).collect();
    diag[0] -= gamma;
    diag[n - 1] -= e[n - 1] * e[n - 1] / gamma;
    let thomas = |rhs: &[f64]| -> Vec<f64> {
        let mut c = vec![0.0; n];
        let mut x = vec![0.0; n];
        let mut beta = diag[0];
        x[0] = rhs[0] / beta;
        for i in 1..n {
            c[i] = e[i - 1] / beta;
            beta = diag[i] - e[i - 1] * c[i];
            x[i] = (rhs[i] - e[i - 1] * x[i - 1]) / beta;
        }
        for i in (0..n - 1).rev() {
            x[i] -= c[i + 1] * x[i + 1];
        }
        x
    };
    let y = thomas(b);
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = e[n - 1];
    let z = thomas(&u);
    let vy = y[0] + e[n - 1] / gamma * y[n - 1];
    let vz = z[0] + e[n - 1] / gamma * z[n - 1];
    let f = vy / (1.0 + vz);
    y.iter().zip(&z).map(|(a, b)| a - f * b).collect()
}

fn apply(d: &[f64], e: &[f64], x: &[f64]) -> Vec<f64> {
    let n = d.len();
    (0..n)
        .map(|i| d[i] * x[i] + e[i] * x[(i + 1) % n] + e[(i + n - 1) % n] * x[(i + n - 1) % n])
        .collect()
}

/// Lowest eigenvalue of a symmetric cyclic tridiagonal matrix by inverse
/// iteration from a Gershgorin shift, finished with Rayleigh quotients.
pub fn lowest_cyclic_eigenvalue(d: &[f64], e: &[f64]) -> f64 {
    let n = d.len();
    let sigma = (0..n)
        .map(|i| d[i] - e[i].abs() - e[(i + n - 1) % n].abs())
        .fold(f64::INFINITY, f64::min)
        - 1.0;
    let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * (i as f64 * 0.37).sin()).collect();
    let mut rq = 0.0;
    for it in 0..400 {
        let y = cyclic_solve(d, e, sigma, &x);
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        x = y.iter().map(|v| v / norm).collect();
        let ax = apply(d, e, &x);
        let next: f64 = ax.iter().zip(&x).map(|(a, b)| a * b).sum();
        if it > 20 && (next - rq).abs() <= 1e-15 * next.abs().max(1.0) {
            return next;
        }
        rq = next;
    }
    rq
}

/// Second-order periodic finite differences for `−ψ'' + V ψ`, uniform step `h`.
pub fn fd_periodic_lowest(potential: &[f64], h: f64) -> f64 {
    let d: Vec<f64> = potential.iter().map(|v| 2.0 / (h * h) + v).collect();
    let e = vec![-1.0 / (h * h); potential.len()];
    lowest_cyclic_eigenvalue(&d, &e)
}

/// Richardson extrapolation of two second-order results at `h` and `h/2`.
pub fn richardson(coarse: f64, fine: f64) -> f64 {
    (4.0 * fine - coarse) / 3.0
}

/// Lowest eigenvalue of the m-th torus fiber
/// `−(1/(rρ)) ((ρ/r) ψ')' + (m²/ρ² + V) ψ`, `V = −R²/(4r²ρ²)`, by conservative
/// second-order finite differences on `n` nodes.
pub fn torus_fiber_fd(big: f64, small: f64, m: f64, n: usize, potential: bool) -> f64 {
    let h = 2.0 * std::f64::consts::PI / n as f64;
    let rho = |u: f64| big + small * u.cos();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    for i in 0..n {
        let u = i as f64 * h;
        let w = small * rho(u);
        let p_plus = rho(u + 0.5 * h) / small;
        let p_minus = rho(u - 0.5 * h) / small;
        let v = if potential {
            -big * big / (4.0 * small * small * rho(u).powi(2))
        } else {
            0.0
        };
        let q = m * m / rho(u).powi(2) + v;
        d[i] = ((p_plus + p_minus) / (h * h) + w * q) / w;
        let w_next = small * rho(u + h);
        e[i] = -p_plus / (h * h) / (w * w_next).sqrt();
    }
    lowest_cyclic_eigenvalue(&d, &e)
}

/// Curvature of the ellipse `(a cos t, b sin t)` at parameter `t`.
pub fn ellipse_curvature(a: f64, b: f64, t: f64) -> f64 {
    a * b / (a * a * t.sin().powi(2) + b * b * t.cos().powi(2)).powf(1.5)
}

/// Parameters `t_k` at uniform arc length on the ellipse, from a composite
/// Simpson table of the arc-length function and Newton polishing.
pub fn ellipse_arclength_params(a: f64, b: f64, n: usize) -> (Vec<f64>, f64) {
    let speed = |t: f64| (a * a * t.sin().powi(2) + b * b * t.cos().powi(2)).sqrt();
    let panels = 64 * n;
    let h = 2.0 * std::f64::consts::PI / panels as f64;
    let mut cum = vec![0.0; panels + 1];
    for i in 0..panels {
        let t0 = i as f64 * h;
        cum[i + 1] = cum[i] + h / 6.0 * (speed(t0) + 4.0 * speed(t0 + 0.5 * h) + speed(t0 + h));
    }
    let total = cum[panels];
    let mut params = Vec::with_capacity(n);
    let mut idx = 0;
    for k in 0..n {
        let target = total * k as f64 / n as f64;
        while idx < panels && cum[idx + 1] < target {
            idx += 1;
        }
        // Newton on the panel, integrating with Simpson from the panel start.
        let t0 = idx as f64 * h;
        let mut t = t0 + (target - cum[idx]) / speed(t0);
        for _ in 0..30 {
            let s = cum[idx] + (t - t0) / 6.0 * (speed(t0) + 4.0 * speed(0.5 * (t0 + t)) + speed(t));
            let dt = (s - target) / speed(t);
            t -= dt;
            if dt.abs() < 1e-15 {
                break;
            }
        }
        params.push(t);
    }
    (params, total)
}

/// Sturm count: number of eigenvalues below `x` of the symmetric tridiagonal
/// matrix (diagonal `d`, off-diagonal `e`, non-cyclic).
pub fn sturm_count(d: &[f64], e: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..d.len() {
        let off = if i == 0 { 0.0 } else { e[i - 1] * e[i - 1] };
        q = d[i] - x - if i == 0 { 0.0 } else { off / q };
        if q == 0.0 {
            q = 1e-300;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Bisection on the Sturm count for the k-th smallest eigenvalue.
pub fn tridiagonal_eigenvalue(d: &[f64], e: &[f64], k: usize, lo: f64, hi: f64) -> f64 {
    let (mut lo, mut hi) = (lo, hi);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if sturm_count(d, e, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-15 * mid.abs().max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Finite-difference discretization of the transverse forms on `(−a, a)`
/// with `n` cells (even, so `u = 0` is a node) and lumped mass. Returns the
/// symmetric tridiagonal `(d, e)`. `c_a = None` means Dirichlet ends.
pub fn transverse_fd(alpha: f64, a: f64, c_a: Option<f64>, n: usize) -> (Vec<f64>, Vec<f64>) {
    let h = 2.0 * a / n as f64;
    let mid = n / 2;
    match c_a {
        None => {
            // interior nodes 1..n-1
            let m = n - 1;
            let mut d = vec![2.0 / (h * h); m];
            d[mid - 1] -= alpha / h;
            (d, vec![-1.0 / (h * h); m - 1])
        }
        Some(c) => {
            // nodes 0..n, half-cell masses at both ends
            let m = n + 1;
            let mass: Vec<f64> = (0..m).map(|i| if i == 0 || i == n { 0.5 * h } else { h }).collect();
            let mut stiff = vec![2.0 / h; m];
            stiff[0] = 1.0 / h - c;
            stiff[n] = 1.0 / h - c;
            stiff[mid] -= alpha;
            let d: Vec<f64> = (0..m).map(|i| stiff[i] / mass[i]).collect();
            let e: Vec<f64> = (0..m - 1).map(|i| -1.0 / h / (mass[i] * mass[i + 1]).sqrt()).collect();
            (d, e)
        }
    }
}

/// Power series for `I_n(x)`.
pub fn bessel_i_series(n: u32, x: f64) -> f64 {
    let mut term = (x / 2.0).powi(n as i32) / (1..=n).map(f64::from).product::<f64>();
    let mut sum = term;
    for k in 1..300 {
        term *= (x / 2.0).powi(2) / (k as f64 * (k + n) as f64);
        sum += term;
        if term < sum * 1e-18 {
            break;
        }
    }
    sum
}

/// `K_n(x) = ∫_0^∞ e^{-x cosh t} cosh(nt) dt`, trapezoid in t.
pub fn bessel_k_integral(n: u32, x: f64) -> f64 {
    let h = 1.0 / 64.0;
    let mut s = 0.5 * (-x).exp();
    let mut t: f64 = h;
    loop {
        let v = (-x * t.cosh() + n as f64 * t).exp() * 0.5 * (1.0 + (-2.0 * n as f64 * t).exp());
        s += v;
        if v < s * 1e-18 && t > 1.0 {
            break;
        }
        t += h;
    }
    s * h
}
