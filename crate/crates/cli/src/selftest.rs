//! Oracle-equivalence suite behind `--selftest`.
//!
//! Each check compares a solver path against an independent route: mode
//! matching for the circle and sphere, closed-form curvature for the torus,
//! and a finite-difference discretization for the transverse problems.

use std::path::Path;
use std::sync::Arc;
use std::time::{Duration, Instant};

use leaky_core::birman_schwinger::{
    assemble_curve_bs, assemble_surface_bs, circle_mode_q, count_mode_bound_states, solve_bound_states,
    solve_mode_bound_states, sphere_mode_q, weyl_estimate, CircleModes, CurveNystrom, SphereModes,
};
use leaky_core::geometry::{surface_point, Circle, CurveGeometry, Sphere, SurfaceGeometry, Torus};
use leaky_core::transverse::transverse_bounds_check;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::{CliError, SolverContext};
use crate::output::{float, sha256_hex, write_outputs, Manifest, Table};

#[derive(Clone, Debug, PartialEq)]
pub struct CheckRow {
    pub quantity: String,
    pub value: f64,
    pub reference: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckRow {
    fn relative(quantity: impl Into<String>, value: f64, reference: f64, tolerance: f64) -> Self {
        let pass = ((value - reference) / reference).abs() <= tolerance;
        CheckRow {
            quantity: quantity.into(),
            value,
            reference,
            tolerance,
            pass,
        }
    }

    fn absolute(quantity: impl Into<String>, value: f64, reference: f64, tolerance: f64) -> Self {
        let pass = (value - reference).abs() <= tolerance;
        CheckRow {
            quantity: quantity.into(),
            value,
            reference,
            tolerance,
            pass,
        }
    }

    /// `value ≤ bound`.
    fn at_most(quantity: impl Into<String>, value: f64, bound: f64) -> Self {
        CheckRow {
            quantity: quantity.into(),
            value,
            reference: bound,
            tolerance: 0.0,
            pass: value <= bound,
        }
    }

    fn flag(quantity: impl Into<String>, ok: bool) -> Self {
        let v = if ok { 1.0 } else { 0.0 };
        CheckRow {
            quantity: quantity.into(),
            value: v,
            reference: 1.0,
            tolerance: 0.0,
            pass: ok,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: &'static str,
    pub rows: Vec<CheckRow>,
    pub elapsed: Duration,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

type CheckFn = fn() -> Result<Vec<CheckRow>, CliError>;

pub const CHECKS: [(&str, CheckFn); 6] = [
    ("circle-nystrom-modes", circle_nystrom),
    ("circle-bound-states", circle_bound_states),
    ("sphere-nystrom-modes", sphere_nystrom),
    ("sphere-counting", sphere_counting),
    ("transverse-bounds", transverse_bounds),
    ("geometry-identities", geometry_identities),
];

fn circle_nystrom() -> Result<Vec<CheckRow>, CliError> {
    let g = CurveGeometry::resample_arclength(&Circle::new(1.0), 256).context("circle")?;
    let ev = assemble_curve_bs(&g, 1.0).context("circle nystrom")?.eigenvalues_desc();
    let modes = [0, 1, -1, 2, -2];
    modes
        .iter()
        .zip(&ev)
        .map(|(&n, &q)| {
            Ok(CheckRow::relative(
                format!("q[n={n}]"),
                q,
                circle_mode_q(n, 1.0, 1.0).context("circle mode")?,
                1e-8,
            ))
        })
        .collect()
}

fn circle_bound_states() -> Result<Vec<CheckRow>, CliError> {
    let g = CurveGeometry::resample_arclength(&Circle::new(1.0), 256).context("circle")?;
    let nystrom = solve_bound_states(&CurveNystrom { curve: g }, 10.0, 3)
        .context("nystrom bound states")?
        .eigenvalues();
    let modes = solve_mode_bound_states(&CircleModes { radius: 1.0 }, 10.0, 3)
        .context("mode bound states")?
        .eigenvalues();
    Ok(nystrom
        .iter()
        .zip(&modes)
        .enumerate()
        .map(|(j, (a, b))| CheckRow::relative(format!("lambda[{j}]"), *a, *b, 1e-8))
        .collect())
}

fn sphere_nystrom() -> Result<Vec<CheckRow>, CliError> {
    let s = SurfaceGeometry::on_grid(Arc::new(Sphere { radius: 1.0 }), 24, 48).context("sphere grid")?;
    let ev = assemble_surface_bs(&s, 1.0)
        .context("sphere nystrom")?
        .eigenvalues_desc();
    [0u32, 1, 1]
        .iter()
        .zip(&ev)
        .enumerate()
        .map(|(i, (&l, &q))| {
            Ok(CheckRow::relative(
                format!("q[{i}] l={l}"),
                q,
                sphere_mode_q(l, 1.0, 1.0).context("sphere mode")?,
                1e-4,
            ))
        })
        .collect()
}

fn sphere_counting() -> Result<Vec<CheckRow>, CliError> {
    let family = SphereModes { radius: 1.0 };
    let area = 4.0 * std::f64::consts::PI;
    let mut rows = Vec::new();
    let at40 = count_mode_bound_states(&family, 40.0).context("count at 40")?;
    rows.push(CheckRow::absolute("count[alpha=40]", at40.count as f64, 400.0, 0.0));
    rows.push(CheckRow::absolute(
        "weyl[alpha=40]",
        weyl_estimate(area, 40.0),
        400.0,
        1e-9,
    ));
    for alpha in [21.0, 31.0, 41.0] {
        let c = count_mode_bound_states(&family, alpha).context("count")?;
        let diff = (c.count as f64 - weyl_estimate(area, alpha)).abs();
        rows.push(CheckRow::at_most(
            format!("|count-weyl|[alpha={alpha}]"),
            diff,
            2.0 * alpha,
        ));
    }
    Ok(rows)
}

/// Lowest eigenvalue of `−u'' − α δ(u)` on `(−a, a)` by second-order finite
/// differences with lumped mass and Sturm bisection. `robin = None` means
/// Dirichlet ends, `Some(c)` the condition `u' = ∓c u` at `±a`.
pub fn transverse_fd_ground(alpha: f64, a: f64, robin: Option<f64>, cells: usize) -> f64 {
    let h = 2.0 * a / cells as f64;
    let mid = cells / 2;
    let (d, e): (Vec<f64>, Vec<f64>) = match robin {
        None => {
            let mut d = vec![2.0 / (h * h); cells - 1];
            d[mid - 1] -= alpha / h;
            (d, vec![-1.0 / (h * h); cells - 2])
        }
        Some(c) => {
            let m = cells + 1;
            let mass = |i: usize| if i == 0 || i == cells { 0.5 * h } else { h };
            let mut stiff = vec![2.0 / h; m];
            stiff[0] = 1.0 / h - c;
            stiff[cells] = 1.0 / h - c;
            stiff[mid] -= alpha;
            let d = (0..m).map(|i| stiff[i] / mass(i)).collect();
            let e = (0..m - 1).map(|i| -1.0 / h / (mass(i) * mass(i + 1)).sqrt()).collect();
            (d, e)
        }
    };
    let below = |x: f64| {
        let mut q = 1.0;
        let mut count = 0;
        for i in 0..d.len() {
            q = d[i] - x - if i == 0 { 0.0 } else { e[i - 1] * e[i - 1] / q };
            if q == 0.0 {
                q = 1e-300;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    };
    let (mut lo, mut hi) = (-alpha * alpha, 0.0f64);
    while hi - lo > 1e-13 * lo.abs() {
        let mid = 0.5 * (lo + hi);
        if below(mid) > 0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

fn transverse_bounds() -> Result<Vec<CheckRow>, CliError> {
    let alphas = [10.0, 20.0, 40.0, 80.0];
    let report = transverse_bounds_check(&alphas, 0.0).context("transverse bounds")?;
    let mut rows = Vec::new();
    for r in &report.rows {
        rows.push(CheckRow::flag(format!("ordering[alpha={}]", r.alpha), r.holds()));
        for (label, robin, energy) in [("minus", Some(0.0), r.kappa_minus), ("plus", None, r.kappa_plus)] {
            let fd = transverse_fd_ground(r.alpha, r.half_width, robin, 100_000);
            rows.push(CheckRow::relative(
                format!("{label}_vs_fd[alpha={}]", r.alpha),
                energy,
                fd,
                1e-6,
            ));
        }
    }
    rows.push(CheckRow::at_most("c_n_growth", report.c_n_growth, 2.0));
    Ok(rows)
}

fn geometry_identities() -> Result<Vec<CheckRow>, CliError> {
    let (big, small) = (2.0, 0.7);
    let torus = Torus {
        major: big,
        minor: small,
    };
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let (mut identity, mut closed_form, mut sign) = (0.0f64, 0.0f64, f64::NEG_INFINITY);
    for _ in 0..10_000 {
        let u = rng.gen_range(0.0..std::f64::consts::TAU);
        let v = rng.gen_range(0.0..std::f64::consts::TAU);
        let p = surface_point(&torus, u, v).context("torus node")?;
        let km = p.gauss - p.mean * p.mean;
        let rho = big + small * u.cos();
        let exact = -big * big / (4.0 * small * small * rho * rho);
        identity = identity.max((km - p.effective_potential()).abs());
        closed_form = closed_form.max((km - exact).abs());
        sign = sign.max(km);
    }
    let sphere = SurfaceGeometry::on_grid(Arc::new(Sphere { radius: 1.0 }), 24, 48).context("sphere grid")?;
    let torus_grid = SurfaceGeometry::on_grid(Arc::new(torus), 32, 48).context("torus grid")?;
    let pi = std::f64::consts::PI;
    Ok(vec![
        CheckRow::at_most("max|K-M^2+(k+-k-)^2/4|", identity, 1e-10),
        CheckRow::at_most("max|K-M^2-closed_form|", closed_form, 1e-10),
        CheckRow::at_most("max(K-M^2)", sign, 0.0),
        CheckRow::relative("sphere_area", sphere.area(), 4.0 * pi, 1e-6),
        CheckRow::relative("torus_area", torus_grid.area(), 4.0 * pi * pi * big * small, 1e-6),
    ])
}

pub fn run_checks() -> Result<Vec<CheckResult>, CliError> {
    CHECKS
        .iter()
        .map(|(name, f)| {
            let start = Instant::now();
            let rows = f()?;
            Ok(CheckResult {
                name,
                rows,
                elapsed: start.elapsed(),
            })
        })
        .collect()
}

/// Runs every check, writes `selftest.csv` and `selftest.manifest` to `out`.
pub fn selftest(out: &Path) -> Result<Vec<CheckResult>, CliError> {
    let results = run_checks()?;
    let mut table = Table::new(
        "selftest",
        &["check", "quantity", "value", "reference", "tolerance", "pass"],
    );
    for r in &results {
        for row in &r.rows {
            table.push(vec![
                r.name.to_string(),
                row.quantity.clone(),
                float(row.value),
                float(row.reference),
                float(row.tolerance),
                row.pass.to_string(),
            ]);
        }
    }
    let mut manifest = Manifest::default();
    manifest.set("tool", concat!("leaky-spectra ", env!("CARGO_PKG_VERSION")));
    manifest.set("experiment", "selftest");
    let names: Vec<&str> = CHECKS.iter().map(|c| c.0).collect();
    manifest.set("config_sha256", sha256_hex(&names.join("\n")));
    manifest.set("checks", names.join(" "));
    manifest.set(
        "discretization",
        "circle N=256; sphere 24x48; torus 32x48; transverse fd 100000 cells",
    );
    manifest.set("failed", results.iter().filter(|r| !r.passed()).count());
    write_outputs(out, "selftest", &[table], &manifest)?;
    Ok(results)
}
