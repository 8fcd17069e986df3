//! One experiment per subcommand: solve, tabulate, record.

use std::sync::Arc;

use leaky_core::birman_schwinger::{
    count_bound_states, count_mode_bound_states, recommended_curve_nodes, solve_bound_states, solve_mode_bound_states,
    weyl_estimate, BoundStateSet, CircleModes, CountReport, CurveNystrom, SphereModes, SurfaceNystrom,
};
use leaky_core::comparison::{
    asymptotic_residual, curve_comparison_spectrum, sphere_comparison_spectrum, torus_comparison_spectrum,
    ComparisonSpectrum,
};
use leaky_core::floquet::{band_functions, gap_report, theta_grid, PeriodicChain};
use leaky_core::geometry::{
    Circle, ClosedCurve, CurveGeometry, Ellipse, PerturbedCircle, PerturbedSphere, Sphere, SurfaceChart,
    SurfaceGeometry, Torus,
};
use leaky_core::transverse::transverse_bounds_check;

use crate::config::{ExperimentConfig, ExperimentKind, Method, ShapeParams};
use crate::error::{CliError, SolverContext};
use crate::output::{float, sha256_hex, Manifest, Table};

/// Comparison spectra on curves use this many nodes unless configured.
const COMPARISON_NODES: usize = 256;
const NODE_FLOOR: usize = 128;

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutput {
    pub tables: Vec<Table>,
    pub manifest: Manifest,
}

fn cell(s: &str) -> String {
    s.replace(',', ";")
}

fn config_error(field: &str, message: String) -> CliError {
    CliError::Config {
        line: None,
        field: Some(field.into()),
        message,
    }
}

fn curve_of(shape: &ShapeParams) -> Option<Box<dyn ClosedCurve<f64>>> {
    match shape {
        ShapeParams::Circle { radius } => Some(Box::new(Circle::new(*radius))),
        ShapeParams::Ellipse { a, b } => Some(Box::new(Ellipse { a: *a, b: *b })),
        ShapeParams::PerturbedCircle { radius, cos, sin } => Some(Box::new(PerturbedCircle {
            radius: *radius,
            cos_coeffs: cos.clone(),
            sin_coeffs: sin.clone(),
        })),
        _ => None,
    }
}

fn chart_of(shape: &ShapeParams) -> Option<Arc<dyn SurfaceChart<f64>>> {
    match shape {
        ShapeParams::Sphere { radius } => Some(Arc::new(Sphere { radius: *radius })),
        ShapeParams::Torus { major, minor } => Some(Arc::new(Torus {
            major: *major,
            minor: *minor,
        })),
        ShapeParams::PerturbedSphere { radius, coeffs } => Some(Arc::new(PerturbedSphere {
            radius: *radius,
            coeffs: coeffs.clone(),
        })),
        _ => None,
    }
}

fn curve_geometry(
    cfg: &ExperimentConfig,
    curve: &dyn ClosedCurve<f64>,
    kappa: f64,
) -> Result<CurveGeometry<f64>, CliError> {
    let n = match cfg.discretization.nodes {
        Some(n) => n,
        None => {
            let coarse = CurveGeometry::resample_arclength(curve, 64).context("curve resampling")?;
            recommended_curve_nodes(coarse.length(), kappa, NODE_FLOOR)
        }
    };
    CurveGeometry::resample_arclength(curve, n).context("curve resampling")
}

fn surface_geometry(
    cfg: &ExperimentConfig,
    chart: Arc<dyn SurfaceChart<f64>>,
) -> Result<SurfaceGeometry<f64>, CliError> {
    let (nu, nv) = cfg.discretization.grid;
    SurfaceGeometry::on_grid(chart, nu, nv).context("surface grid")
}

/// Which solver a shape and method select.
enum Solver {
    CircleModes(f64),
    SphereModes(f64),
    Curve(Box<dyn ClosedCurve<f64>>),
    Surface(Arc<dyn SurfaceChart<f64>>),
}

fn solver_for(cfg: &ExperimentConfig, shape: &ShapeParams) -> Result<Solver, CliError> {
    let method = cfg.discretization.method;
    Ok(match (shape, method) {
        (ShapeParams::Circle { radius }, Method::Auto | Method::Modes) => Solver::CircleModes(*radius),
        (ShapeParams::Sphere { radius }, Method::Auto | Method::Modes) => Solver::SphereModes(*radius),
        (_, Method::Modes) => {
            return Err(config_error(
                "method",
                format!("mode matching needs a circle or sphere, not {}", shape.name()),
            ));
        }
        _ => match (curve_of(shape), chart_of(shape)) {
            (Some(c), _) => Solver::Curve(c),
            (None, Some(s)) => Solver::Surface(s),
            (None, None) => unreachable!("every shape is a curve or a surface"),
        },
    })
}

fn bound_states(cfg: &ExperimentConfig, solver: &Solver, alpha: f64) -> Result<BoundStateSet<f64>, CliError> {
    let j_max = cfg.discretization.j_max;
    let ctx = format!("bound states at alpha = {alpha}");
    match solver {
        Solver::CircleModes(r) => solve_mode_bound_states(&CircleModes { radius: *r }, alpha, j_max).context(ctx),
        Solver::SphereModes(r) => solve_mode_bound_states(&SphereModes { radius: *r }, alpha, j_max).context(ctx),
        Solver::Curve(c) => {
            let curve = curve_geometry(cfg, c.as_ref(), alpha / 2.0)?;
            solve_bound_states(&CurveNystrom { curve }, alpha, j_max).context(ctx)
        }
        Solver::Surface(s) => {
            let surface = surface_geometry(cfg, s.clone())?;
            solve_bound_states(&SurfaceNystrom { surface }, alpha, j_max).context(ctx)
        }
    }
}

fn comparison(cfg: &ExperimentConfig, shape: &ShapeParams) -> Result<ComparisonSpectrum<f64>, CliError> {
    let j_max = cfg.discretization.j_max;
    match shape {
        ShapeParams::Sphere { radius } => {
            sphere_comparison_spectrum(*radius, j_max).context("sphere comparison spectrum")
        }
        ShapeParams::Torus { major, minor } => {
            torus_comparison_spectrum(*major, *minor, j_max).context("torus comparison spectrum")
        }
        ShapeParams::PerturbedSphere { .. } => Err(config_error(
            "name",
            "comparison spectra are available for circle, ellipse, perturbed-circle, sphere and torus".into(),
        )),
        curve => {
            let c = curve_of(curve).expect("curve shape");
            let n = cfg.discretization.nodes.unwrap_or(COMPARISON_NODES);
            let g = CurveGeometry::resample_arclength(c.as_ref(), n).context("curve resampling")?;
            curve_comparison_spectrum(&g, None, j_max).context("curve comparison spectrum")
        }
    }
}

fn shape(cfg: &ExperimentConfig) -> &ShapeParams {
    cfg.shape.as_ref().expect("validated config carries a shape")
}

pub fn run(cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    let mut manifest = Manifest::default();
    manifest.set("tool", concat!("leaky-spectra ", env!("CARGO_PKG_VERSION")));
    manifest.set("experiment", cfg.kind);
    manifest.set("config_sha256", sha256_hex(&cfg.source));
    if let Some(s) = &cfg.shape {
        manifest.set("shape", s.describe());
    }
    if !cfg.alphas.is_empty() {
        manifest.set(
            "alpha",
            cfg.alphas.iter().map(|a| float(*a)).collect::<Vec<_>>().join(" "),
        );
    }
    manifest.set("j_max", cfg.discretization.j_max);
    let tables = match cfg.kind {
        ExperimentKind::BoundStates => run_bound_states(cfg, &mut manifest)?,
        ExperimentKind::Comparison => run_comparison(cfg, &mut manifest)?,
        ExperimentKind::AsymptoticStudy => run_asymptotic(cfg, &mut manifest)?,
        ExperimentKind::Counting => run_counting(cfg, &mut manifest)?,
        ExperimentKind::TransverseCheck => run_transverse(cfg, &mut manifest)?,
        ExperimentKind::Bands => run_bands(cfg, &mut manifest)?,
    };
    Ok(RunOutput { tables, manifest })
}

fn run_bound_states(cfg: &ExperimentConfig, manifest: &mut Manifest) -> Result<Vec<Table>, CliError> {
    let solver = solver_for(cfg, shape(cfg))?;
    let mut t = Table::new(
        "bound-states",
        &[
            "alpha",
            "j",
            "lambda",
            "kappa",
            "multiplicity",
            "mode",
            "residual",
            "provenance",
            "discretization",
        ],
    );
    for &alpha in &cfg.alphas {
        let set = bound_states(cfg, &solver, alpha)?;
        for s in &set.states {
            t.push(vec![
                float(alpha),
                s.branch.to_string(),
                float(s.lambda),
                float(s.kappa),
                s.multiplicity.to_string(),
                s.mode.map(|m| m.to_string()).unwrap_or_default(),
                float(s.residual),
                set.provenance.as_str().into(),
                cell(&set.discretization),
            ]);
        }
        let key = format!("alpha[{alpha}]");
        manifest.set(format!("{key}.discretization"), &set.discretization);
        manifest.set(format!("{key}.states"), set.len());
        manifest.set(format!("{key}.truncated"), set.truncated);
        manifest.set(format!("{key}.max_residual"), float(set.max_residual()));
    }
    Ok(vec![t])
}

fn run_comparison(cfg: &ExperimentConfig, manifest: &mut Manifest) -> Result<Vec<Table>, CliError> {
    let spectrum = comparison(cfg, shape(cfg))?;
    let mut t = Table::new(
        "comparison",
        &["j", "mu", "multiplicity", "provenance", "discretization"],
    );
    let mut j = 0;
    for level in &spectrum.levels {
        t.push(vec![
            j.to_string(),
            float(level.value),
            level.multiplicity.to_string(),
            spectrum.provenance.as_str().into(),
            cell(&spectrum.discretization),
        ]);
        j += level.multiplicity;
    }
    manifest.set("comparison.discretization", &spectrum.discretization);
    manifest.set("comparison.eigenvalues", spectrum.len());
    Ok(vec![t])
}

fn run_asymptotic(cfg: &ExperimentConfig, manifest: &mut Manifest) -> Result<Vec<Table>, CliError> {
    let shape = shape(cfg);
    let solver = solver_for(cfg, shape)?;
    let spectrum = comparison(cfg, shape)?;
    manifest.set("comparison.discretization", &spectrum.discretization);
    let mut t = Table::new(
        "asymptotic-study",
        &[
            "alpha",
            "j",
            "lambda",
            "mu",
            "residual",
            "residual_times_alpha_over_logalpha",
        ],
    );
    for &alpha in &cfg.alphas {
        let set = bound_states(cfg, &solver, alpha)?;
        let table = asymptotic_residual(&set, &spectrum, alpha).context(format!("residuals at alpha = {alpha}"))?;
        for r in &table.rows {
            t.push(vec![
                float(alpha),
                r.j.to_string(),
                float(r.lambda),
                float(r.mu),
                float(r.residual),
                float(r.scaled),
            ]);
        }
        let key = format!("alpha[{alpha}]");
        manifest.set(format!("{key}.discretization"), &set.discretization);
        manifest.set(format!("{key}.truncated"), table.truncated);
        manifest.set(format!("{key}.max_residual"), float(set.max_residual()));
    }
    Ok(vec![t])
}

fn run_counting(cfg: &ExperimentConfig, manifest: &mut Manifest) -> Result<Vec<Table>, CliError> {
    let shape = shape(cfg);
    if shape.is_curve() {
        return Err(config_error(
            "name",
            "counting needs a surface: sphere, torus or perturbed-sphere".into(),
        ));
    }
    let solver = solver_for(cfg, shape)?;
    let (area, surface, label) = match &solver {
        Solver::SphereModes(r) => (4.0 * std::f64::consts::PI * r * r, None, format!("sphere modes R={r}")),
        Solver::Surface(chart) => {
            let s = surface_geometry(cfg, chart.clone())?;
            let (nu, nv) = s.shape();
            (s.area(), Some(s), format!("surface nystrom {nu}x{nv}"))
        }
        _ => unreachable!("surface shapes select surface solvers"),
    };
    manifest.set("area", float(area));
    manifest.set("discretization", &label);
    let mut t = Table::new("counting", &["alpha", "count", "weyl", "diff"]);
    let nystrom = surface.map(|surface| SurfaceNystrom { surface });
    for &alpha in &cfg.alphas {
        let ctx = format!("count at alpha = {alpha}");
        let report: CountReport = match (&solver, &nystrom) {
            (Solver::SphereModes(r), _) => count_mode_bound_states(&SphereModes { radius: *r }, alpha).context(ctx)?,
            (_, Some(n)) => count_bound_states(n, alpha).context(ctx)?,
            _ => unreachable!(),
        };
        let weyl = weyl_estimate(area, alpha);
        t.push(vec![
            float(alpha),
            report.count.to_string(),
            float(weyl),
            float(report.count as f64 - weyl),
        ]);
        manifest.set(format!("alpha[{alpha}].ambiguous"), report.ambiguous);
    }
    Ok(vec![t])
}

fn run_transverse(cfg: &ExperimentConfig, manifest: &mut Manifest) -> Result<Vec<Table>, CliError> {
    let report = transverse_bounds_check(&cfg.alphas, cfg.c_a).context("transverse bounds")?;
    let mut t = Table::new(
        "transverse-check",
        &[
            "alpha",
            "half_width",
            "c_a",
            "kappa_minus",
            "kappa_plus",
            "reference",
            "upper",
            "c_n",
            "holds",
            "guaranteed",
        ],
    );
    for r in &report.rows {
        t.push(vec![
            float(r.alpha),
            float(r.half_width),
            float(r.c_a),
            float(r.kappa_minus),
            float(r.kappa_plus),
            float(r.reference),
            float(r.upper),
            float(r.c_n),
            r.holds().to_string(),
            r.guaranteed.to_string(),
        ]);
    }
    manifest.set("c_a", float(cfg.c_a));
    manifest.set("all_hold", report.all_hold());
    manifest.set("c_n_growth", float(report.c_n_growth));
    manifest.set("c_n_spread", float(report.c_n_spread));
    manifest.set("c_n_bounded", report.c_n_bounded());
    Ok(vec![t])
}

fn run_bands(cfg: &ExperimentConfig, manifest: &mut Manifest) -> Result<Vec<Table>, CliError> {
    let shape = shape(cfg);
    let curve = curve_of(shape)
        .ok_or_else(|| config_error("name", "bands need a curve: circle, ellipse or perturbed-circle".into()))?;
    let period = cfg.period.expect("validated config carries a period");
    let thetas = theta_grid::<f64>(cfg.discretization.theta_samples);
    let mut values = Table::new("bands", &["alpha", "band", "theta", "lambda"]);
    let mut edges = Table::new(
        "bands_edges",
        &[
            "alpha",
            "band",
            "min",
            "max",
            "width",
            "theta_at_min",
            "theta_at_max",
            "edge_error",
            "complete",
        ],
    );
    let mut gaps = Table::new(
        "bands_gaps",
        &["alpha", "below", "above", "lower", "upper", "width", "tentative"],
    );
    manifest.set("period", float(period));
    for &alpha in &cfg.alphas {
        let g = curve_geometry(cfg, curve.as_ref(), alpha / 2.0)?;
        let chain = PeriodicChain::new(g, period).context("periodic chain")?;
        let b = band_functions(&chain, alpha, &thetas, cfg.discretization.j_max)
            .context(format!("bands at alpha = {alpha}"))?;
        for (j, row) in b.values.iter().enumerate() {
            for (theta, v) in b.thetas.iter().zip(row) {
                values.push(vec![
                    float(alpha),
                    j.to_string(),
                    float(*theta),
                    v.map(float).unwrap_or_default(),
                ]);
            }
        }
        for s in &b.bands {
            edges.push(vec![
                float(alpha),
                s.index.to_string(),
                float(s.min),
                float(s.max),
                float(s.width()),
                float(s.theta_at_min),
                float(s.theta_at_max),
                float(s.edge_error),
                s.complete.to_string(),
            ]);
        }
        let report = gap_report(&b);
        for gap in &report {
            gaps.push(vec![
                float(alpha),
                gap.below.to_string(),
                gap.above.to_string(),
                float(gap.lower),
                float(gap.upper),
                float(gap.width()),
                gap.tentative.to_string(),
            ]);
        }
        let key = format!("alpha[{alpha}]");
        manifest.set(format!("{key}.discretization"), &b.discretization);
        manifest.set(format!("{key}.gaps"), report.len());
        manifest.set(format!("{key}.near_crossings"), b.near_crossings);
        manifest.set(format!("{key}.max_relative_tail"), float(b.max_relative_tail));
    }
    Ok(vec![values, edges, gaps])
}
