mod oracles;

use leaky_core::transverse::*;
use leaky_core::Error;
use proptest::prelude::*;

fn problem(alpha: f64, a: f64, boundary: Boundary<f64>) -> TransverseProblem<f64> {
    TransverseProblem {
        alpha,
        half_width: a,
        boundary,
    }
}

/// (lowest eigenvalue, number of negative eigenvalues) from the FD oracle.
fn fd_ground(alpha: f64, a: f64, c_a: Option<f64>) -> (f64, usize) {
    let (d, e) = oracles::transverse_fd(alpha, a, c_a, 100_000);
    let lo = -alpha * alpha;
    let hi = d.iter().fold(0.0f64, |m, &x| m.max(x.abs())) * 4.0;
    let ground = oracles::tridiagonal_eigenvalue(&d, &e, 0, lo, hi);
    (ground, oracles::sturm_count(&d, &e, 0.0))
}

#[test]
fn example_alpha_10() {
    let p = solve_transverse(&problem(10.0, 1.0, Boundary::Dirichlet)).unwrap();
    let m = solve_transverse(&problem(10.0, 1.0, Boundary::Neumann { c_a: 0.0 })).unwrap();
    assert!(p.k < 5.0 && p.energy > -25.0);
    assert!(m.k > 5.0 && m.energy < -25.0);
    assert!(p.guaranteed && m.guaranteed);
}

#[test]
fn roots_match_finite_differences() {
    for &(alpha, a, c) in &[
        (10.0, 1.0, None),
        (10.0, 1.0, Some(0.0)),
        (20.0, 0.4, Some(0.0)),
        (20.0, 0.4, None),
        (15.0, 0.8, Some(1.0)),
    ] {
        let boundary = match c {
            None => Boundary::Dirichlet,
            Some(c_a) => Boundary::Neumann { c_a },
        };
        let root = solve_transverse(&problem(alpha, a, boundary)).unwrap();
        let (fd, negatives) = fd_ground(alpha, a, c);
        assert!(
            (root.energy / fd - 1.0).abs() < 1e-6,
            "α={alpha} a={a} c={c:?}: {} vs {fd}",
            root.energy
        );
        assert_eq!(negatives, 1, "single negative eigenvalue");
    }
}

#[test]
fn boundary_correction_sign() {
    // With c_a > 0 the boundary term lowers the form, so κ⁻ drops below the
    // pure Neumann value; the FD oracle above pins the magnitude.
    let plain = solve_transverse(&problem(15.0, 0.8, Boundary::Neumann { c_a: 0.0 })).unwrap();
    let with = solve_transverse(&problem(15.0, 0.8, Boundary::Neumann { c_a: 1.0 })).unwrap();
    assert!(with.energy < plain.energy);
    // c_a·a > 1 binds a second, odd state: outside the regime.
    let odd = solve_transverse(&problem(15.0, 0.8, Boundary::Neumann { c_a: 1.5 })).unwrap();
    assert!(!odd.guaranteed);
    let (_, negatives) = fd_ground(15.0, 0.8, Some(1.5));
    assert_eq!(negatives, 2);
}

#[test]
fn wide_layer_limit() {
    for b in [Boundary::Dirichlet, Boundary::Neumann { c_a: 0.0 }] {
        let r = solve_transverse(&problem(8.0, 50.0, b)).unwrap();
        assert!((r.energy + 16.0).abs() < 1e-12);
    }
}

#[test]
fn ordering_in_regime() {
    // αa stays below ~30 so that e^{−αa} is representable next to α²/4.
    for &alpha in &[6.0, 10.0, 20.0] {
        for &a in &[0.7, 1.2] {
            let p = solve_transverse(&problem(alpha, a, Boundary::Dirichlet)).unwrap();
            let m = solve_transverse(&problem(alpha, a, Boundary::Neumann { c_a: 0.0 })).unwrap();
            if p.guaranteed {
                assert!(m.shift > 0.0 && p.shift < 0.0);
            }
        }
    }
}

#[test]
fn monotone_in_half_width() {
    let alpha = 12.0;
    let mut prev: Option<(f64, f64)> = None;
    for i in 1..=10 {
        let a = 0.3 * i as f64;
        let p = solve_transverse(&problem(alpha, a, Boundary::Dirichlet))
            .unwrap()
            .energy;
        let m = solve_transverse(&problem(alpha, a, Boundary::Neumann { c_a: 0.0 }))
            .unwrap()
            .energy;
        if let Some((pp, pm)) = prev {
            assert!(p < pp && m > pm);
        }
        prev = Some((p, m));
    }
}

#[test]
fn halfwidth_values() {
    assert!((layer_halfwidth::<f64>(std::f64::consts::E).unwrap() - 6.0 / std::f64::consts::E).abs() < 1e-15);
    assert!((layer_halfwidth::<f64>(100.0).unwrap() - 0.27631021115928547).abs() < 1e-14);
    assert!(layer_halfwidth::<f64>(1e10).unwrap() < 2e-8);
    assert!(1e10 * layer_halfwidth::<f64>(1e10).unwrap() > 1e5 * layer_halfwidth::<f64>(1e5).unwrap());
    assert!(matches!(layer_halfwidth::<f64>(1.0), Err(Error::InvalidInput(_))));
}

#[test]
fn bound_ordering_on_grid() {
    let report = transverse_bounds_check::<f64>(&[10.0, 20.0, 40.0, 80.0], 0.0).unwrap();
    assert!(report.all_hold());
    assert!(report.rows.iter().all(|r| r.guaranteed && r.holds()));
    assert!(report.c_n_bounded());
    let r80 = report.rows.last().unwrap();
    assert!(r80.c_n <= 2.0 * report.rows[0].c_n);
    // ĉ_N ≈ 4 e^{−αa/2} for c_a = 0.
    for r in &report.rows {
        let approx = 4.0 * (-r.alpha * r.half_width / 2.0).exp();
        assert!((r.c_n / approx - 1.0).abs() < 0.05, "{} vs {approx}", r.c_n);
    }
}

#[test]
fn out_of_regime_is_flagged() {
    // α = 1, a = 10 passes α > 4·max{1/a, c_a}; α = 1, a = 1 does not.
    let r = solve_transverse(&problem(1.0, 10.0, Boundary::Neumann { c_a: 0.0 })).unwrap();
    assert!(r.guaranteed);
    let r = solve_transverse(&problem(1.0, 1.0, Boundary::Neumann { c_a: 0.0 })).unwrap();
    assert!(!r.guaranteed);
    // Dirichlet with αa ≤ 2 has no bound state.
    assert!(matches!(
        solve_transverse(&problem(1.0, 1.5, Boundary::Dirichlet)),
        Err(Error::Regime(_))
    ));
    assert!(transverse_bounds_check::<f64>(&[20.0, 10.0], 0.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn roots_satisfy_matching(alpha in 5.0f64..200.0, a in 0.2f64..3.0, c in 0.0f64..1.0) {
        for b in [Boundary::Dirichlet, Boundary::Neumann { c_a: c }] {
            let p = problem(alpha, a, b);
            if let Ok(r) = solve_transverse(&p) {
                prop_assert!(r.residual <= 1e-9 * alpha);
                prop_assert!((r.energy + r.k * r.k).abs() <= 1e-12 * r.k * r.k);
            }
        }
    }
}
