use std::f64::consts::PI;
use std::sync::Arc;

use leaky_core::geometry::*;
use leaky_core::Error;
use nalgebra::{Vector2, Vector3};
use proptest::prelude::*;

/// Hides the analytic jet so the finite-difference path is exercised.
struct NoJet<C>(C);

impl<C: SurfaceChart<f64>> SurfaceChart<f64> for NoJet<C> {
    fn u_range(&self) -> (f64, f64) {
        self.0.u_range()
    }
    fn u_kind(&self) -> AxisKind {
        self.0.u_kind()
    }
    fn v_period(&self) -> f64 {
        self.0.v_period()
    }
    fn point(&self, u: f64, v: f64) -> Vector3<f64> {
        self.0.point(u, v)
    }
}

struct Flat;

impl SurfaceChart<f64> for Flat {
    fn u_range(&self) -> (f64, f64) {
        (0.0, 1.0)
    }
    fn u_kind(&self) -> AxisKind {
        AxisKind::Periodic
    }
    fn v_period(&self) -> f64 {
        1.0
    }
    fn point(&self, u: f64, v: f64) -> Vector3<f64> {
        Vector3::new(u, v, 0.0)
    }
}

/// Composite 20-point Gauss–Legendre via Golub–Welsch-free tabulation:
/// 4000 panels of the 2-point rule is plenty for a smooth periodic integrand.
fn composite_gauss(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let g = 0.5 / 3f64.sqrt();
    (0..panels)
        .map(|i| {
            let m = a + (i as f64 + 0.5) * h;
            0.5 * h * (f(m - g * h) + f(m + g * h))
        })
        .sum()
}

#[test]
fn metric_examples() {
    let s = surface_point(&Sphere::<f64> { radius: 1.0 }, PI / 2.0, 0.3).unwrap();
    assert!((s.metric - nalgebra::Matrix2::identity()).abs().max() < 1e-15);

    let t = surface_point(&Torus::<f64> { major: 2.0, minor: 1.0 }, 0.0, 0.7).unwrap();
    assert!((t.metric - nalgebra::Matrix2::new(1.0, 0.0, 0.0, 9.0)).abs().max() < 1e-14);
    let fd = surface_point(&NoJet(Torus::<f64> { major: 2.0, minor: 1.0 }), 0.0, 0.7).unwrap();
    assert!((fd.metric - t.metric).abs().max() < 1e-8);

    let f = surface_point(&Flat, 0.2, 0.4).unwrap();
    assert!((f.metric - nalgebra::Matrix2::identity()).abs().max() < 1e-10);
}

#[test]
fn degenerate_chart_is_rejected() {
    let e = metric_tensor(&Vector3::new(1.0, 0.0, 0.0), &Vector3::new(2.0, 0.0, 0.0));
    assert!(matches!(e, Err(Error::DegenerateParametrization { .. })));
}

#[test]
fn sphere_curvatures() {
    for &r in &[1.0, 2.5] {
        let p = surface_point(&Sphere::<f64> { radius: r }, 1.1, 2.0).unwrap();
        assert!((p.k_plus + 1.0 / r).abs() < 1e-13);
        assert!((p.k_minus + 1.0 / r).abs() < 1e-13);
        assert!((p.gauss - 1.0 / (r * r)).abs() < 1e-13);
        assert!((p.mean + 1.0 / r).abs() < 1e-13);
        assert!(p.effective_potential().abs() < 1e-14);
        assert!((p.normal - p.p / r).norm() < 1e-14);
    }
}

#[test]
fn torus_curvatures() {
    let torus = Torus::<f64> { major: 2.0, minor: 1.0 };
    let outer = surface_point(&torus, 0.0, 0.0).unwrap();
    assert!(outer.normal.x > 0.99, "normal points away from the axis");
    let mut ks = [outer.k_plus.abs(), outer.k_minus.abs()];
    ks.sort_by(f64::total_cmp);
    assert!((ks[0] - 1.0 / 3.0).abs() < 1e-14 && (ks[1] - 1.0).abs() < 1e-14);
    assert!((outer.gauss - outer.mean.powi(2) + 1.0 / 9.0).abs() < 1e-14);
    assert!(outer.k_plus >= outer.k_minus);

    let top = surface_point(&torus, PI / 2.0, 1.0).unwrap();
    assert!((top.effective_potential() + 0.25).abs() < 1e-14);
    assert!((top.gauss - top.mean.powi(2) + 0.25).abs() < 1e-14);

    let flat = surface_point(&Flat, 0.5, 0.5).unwrap();
    assert!(flat.k_plus.abs() < 1e-6 && flat.k_minus.abs() < 1e-6);
}

#[test]
fn analytic_and_fd_curvatures_agree() {
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1.0);
    let charts: Vec<(Box<dyn SurfaceChart<f64>>, Box<dyn SurfaceChart<f64>>)> = vec![
        (
            Box::new(Sphere::<f64> { radius: 1.5 }),
            Box::new(NoJet(Sphere::<f64> { radius: 1.5 })),
        ),
        (
            Box::new(Torus::<f64> { major: 2.0, minor: 1.0 }),
            Box::new(NoJet(Torus::<f64> { major: 2.0, minor: 1.0 })),
        ),
    ];
    for (a, f) in &charts {
        for &(u, v) in &[(0.4, 0.1), (1.3, 2.2), (2.5, 4.0), (3.0, 5.9)] {
            let pa = surface_point(a.as_ref(), u, v).unwrap();
            let pf = surface_point(f.as_ref(), u, v).unwrap();
            assert!(rel(pf.k_plus, pa.k_plus) < 1e-6, "{} {}", pf.k_plus, pa.k_plus);
            assert!(rel(pf.k_minus, pa.k_minus) < 1e-6);
            assert!(rel(pf.gauss, pa.gauss) < 1e-6);
            assert!(rel(pf.mean, pa.mean) < 1e-6);
        }
    }
}

#[test]
fn node_invariants_and_areas() {
    let sphere = SurfaceGeometry::on_grid(Arc::new(Sphere::<f64> { radius: 2.0 }), 24, 48).unwrap();
    let torus = SurfaceGeometry::on_grid(Arc::new(Torus::<f64> { major: 2.0, minor: 1.0 }), 32, 48).unwrap();
    assert!((sphere.area() / (16.0 * PI) - 1.0).abs() < 1e-6);
    assert!((torus.area() / (8.0 * PI * PI) - 1.0).abs() < 1e-6);
    for geo in [&sphere, &torus] {
        for n in geo.nodes() {
            let g = n.metric;
            assert!(g[(0, 0)] > 0.0 && g.determinant() > 0.0 && (g[(0, 1)] - g[(1, 0)]).abs() == 0.0);
            assert!((n.normal.norm() - 1.0).abs() < 1e-14);
            assert!(n.normal.dot(&n.pu).abs() < 1e-12 && n.normal.dot(&n.pv).abs() < 1e-12);
            assert!((n.gauss - n.k_plus * n.k_minus).abs() <= 1e-10 * n.gauss.abs().max(1.0));
            assert!((n.mean - 0.5 * (n.k_plus + n.k_minus)).abs() <= 1e-10 * n.mean.abs().max(1.0));
            let d = n.k_plus - n.k_minus;
            assert!((n.gauss - n.mean * n.mean + 0.25 * d * d).abs() <= 1e-10);
        }
        assert!(geo.effective_potential().iter().all(|&v| v <= 0.0));
    }
}

#[test]
fn perturbed_sphere_through_finite_differences() {
    let chart = PerturbedSphere::<f64> {
        radius: 1.0,
        coeffs: vec![0.0, 0.1],
    };
    let geo = SurfaceGeometry::on_grid(Arc::new(chart.clone()), 32, 16).unwrap();
    // Surface of revolution area: 2π ∫ r sinθ √(r² + r'²) dθ
    let r = |t: f64| 1.0 + 0.1 * (2.0 * t).cos();
    let dr = |t: f64| -0.2 * (2.0 * t).sin();
    let exact = 2.0
        * PI
        * composite_gauss(
            |t| r(t) * t.sin() * (r(t).powi(2) + dr(t).powi(2)).sqrt(),
            0.0,
            PI,
            20000,
        );
    assert!((geo.area() / exact - 1.0).abs() < 1e-8, "{} vs {exact}", geo.area());
    for n in geo.nodes() {
        assert!((n.gauss - n.k_plus * n.k_minus).abs() <= 1e-10 * n.gauss.abs().max(1.0));
        assert!(n.effective_potential() <= 0.0);
    }
}

#[test]
fn sphere_singular_moments() {
    let r = 1.3;
    let geo = SurfaceGeometry::on_grid(Arc::new(Sphere::<f64> { radius: r }), 8, 6).unwrap();
    let m = geo.singular_moments().unwrap().to_vec();
    for (inv, one) in m {
        assert!((inv / (4.0 * PI * r) - 1.0).abs() < 1e-9, "{inv}");
        assert!((one / (16.0 * PI * r.powi(3) / 3.0) - 1.0).abs() < 1e-9, "{one}");
    }
}

#[test]
fn torus_singular_moment_matches_brute_force() {
    let torus = Torus::<f64> { major: 2.0, minor: 1.0 };
    let geo = SurfaceGeometry::on_grid(Arc::new(torus), 4, 3).unwrap();
    let m = geo.singular_moments().unwrap().to_vec();
    // ∫ r dA has a smooth integrand: a fine trapezoid rule is an oracle.
    let n = 400;
    let h = 2.0 * PI / n as f64;
    for (node, &(_, one)) in geo.nodes().iter().zip(&m) {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                let (u, v) = (i as f64 * h, j as f64 * h);
                let rho = 2.0 + u.cos();
                s += (torus.point(u, v) - node.p).norm() * rho * h * h;
            }
        }
        assert!((one / s - 1.0).abs() < 1e-6, "{one} vs {s}");
    }
}

#[test]
fn circle_resampling() {
    let g = CurveGeometry::resample_arclength(&Circle::<f64>::new(1.0), 64).unwrap();
    assert!((g.length() - 2.0 * PI).abs() < 1e-8);
    assert!(g.curvature().iter().all(|&k| (k - 1.0).abs() < 1e-12));
    assert!((g.total_turning() - 2.0 * PI).abs() < 1e-6);
    let pot = curve_effective_potential(&g);
    assert!(pot.iter().all(|&v| (v + 0.25).abs() < 1e-12));
}

#[test]
fn ellipse_perimeter_and_arclength_nodes() {
    let ellipse = Ellipse::<f64> { a: 2.0, b: 1.0 };
    let g = CurveGeometry::resample_arclength(&ellipse, 256).unwrap();
    let speed = |t: f64| (4.0 * t.sin().powi(2) + t.cos().powi(2)).sqrt();
    let oracle = composite_gauss(speed, 0.0, 2.0 * PI, 4000);
    assert!((g.length() - oracle).abs() < 1e-8 * oracle);
    assert!((g.length() - 9.6884482).abs() < 1e-7);
    // Equal arc length between consecutive nodes.
    let params = g.params();
    for k in 0..params.len() {
        let b = if k + 1 < params.len() { params[k + 1] } else { 2.0 * PI };
        let seg = composite_gauss(speed, params[k], b, 200);
        assert!((seg / g.spacing() - 1.0).abs() < 1e-8, "segment {k}: {seg}");
    }
    assert!((g.total_turning() - 2.0 * PI).abs() < 1e-6);
}

#[test]
fn finite_difference_curve_matches_analytic() {
    let fd = FnCurve {
        period: 2.0 * PI,
        map: |t: f64| Vector2::new(2.0 * t.cos(), t.sin()),
    };
    let a = CurveGeometry::resample_arclength(&Ellipse::<f64> { a: 2.0, b: 1.0 }, 128).unwrap();
    let b = CurveGeometry::resample_arclength(&fd, 128).unwrap();
    assert!((a.length() - b.length()).abs() < 1e-9);
    for (x, y) in a.curvature().iter().zip(b.curvature()) {
        assert!((x - y).abs() < 1e-6 * x.abs());
    }
}

#[test]
fn doubled_circle_is_rejected() {
    let twice = Circle::<f64> {
        radius: 1.0,
        center: Vector2::zeros(),
        turns: 2,
    };
    let e = CurveGeometry::resample_arclength(&twice, 64);
    assert!(matches!(e, Err(Error::UnsupportedGeometry(_))), "{e:?}");
}

#[test]
fn open_curve_is_rejected() {
    let arc = FnCurve {
        period: 3.0,
        map: |t: f64| Vector2::new(t.cos(), t.sin()),
    };
    assert!(matches!(
        CurveGeometry::resample_arclength(&arc, 32),
        Err(Error::UnsupportedGeometry(_))
    ));
}

#[test]
fn perturbed_circle_turning() {
    let c = PerturbedCircle::<f64> {
        radius: 1.0,
        cos_coeffs: vec![0.0, 0.0, 0.15],
        sin_coeffs: vec![0.05],
    };
    let g = CurveGeometry::resample_arclength(&c, 256).unwrap();
    assert!((g.total_turning() - 2.0 * PI).abs() < 1e-6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn torus_effective_potential_identity(
        big in 1.2f64..5.0, frac in 0.05f64..0.8, u in 0.0f64..std::f64::consts::TAU, v in 0.0f64..std::f64::consts::TAU
    ) {
        let torus = Torus::<f64> { major: big, minor: big * frac };
        let p = surface_point(&torus, u, v).unwrap();
        let d = p.k_plus - p.k_minus;
        prop_assert!((p.gauss - p.mean * p.mean + 0.25 * d * d).abs() <= 1e-10);
        prop_assert!(p.gauss - p.mean * p.mean <= 1e-12);
        prop_assert!((p.gauss - p.k_plus * p.k_minus).abs() <= 1e-10 * p.gauss.abs().max(1.0));
    }

    #[test]
    fn circle_length_scales(radius in 0.1f64..10.0) {
        let g = CurveGeometry::resample_arclength(&Circle::<f64>::new(radius), 32).unwrap();
        prop_assert!((g.length() / (2.0 * PI * radius) - 1.0).abs() < 1e-10);
    }
}
