use leaky_core::birman_schwinger::{assemble_curve_bs, circle_mode_q};
use leaky_core::geometry::{Circle, CurveGeometry};
use leaky_core::specfun::{bessel_i, bessel_ik_product, bessel_ik_scaled, bessel_k, mod_sph_ik, Order};
use leaky_core::Error;
use proptest::prelude::*;

mod oracles;

#[test]
fn i_matches_power_series() {
    for n in [0, 1, 2, 5, 13, 30] {
        for x in [1e-3, 0.1, 1.0, 4.5, 12.0, 20.0] {
            let v = bessel_i(Order::integer(n), x).unwrap();
            let r = oracles::bessel_i_series(n, x);
            assert!((v / r - 1.0).abs() < 1e-13, "n={n} x={x}: {v} vs {r}");
        }
    }
}

#[test]
fn k_matches_integral_representation() {
    for n in [0, 1, 3, 8, 20] {
        for x in [0.05, 0.5, 2.0, 7.0, 30.0] {
            let v = bessel_k(Order::integer(n), x).unwrap();
            let r = oracles::bessel_k_integral(n, x);
            assert!((v / r - 1.0).abs() < 1e-12, "n={n} x={x}: {v} vs {r}");
        }
    }
}

#[test]
fn spherical_zero_order_closed_forms() {
    for x in [0.01f64, 0.3, 2.0, 15.0, 80.0] {
        let (i0, k0) = mod_sph_ik(0, x).unwrap();
        assert!((i0 / (x.sinh() / x) - 1.0).abs() < 1e-14);
        assert!((k0 / (std::f64::consts::FRAC_PI_2 * (-x).exp() / x) - 1.0).abs() < 1e-14);
    }
}

#[test]
fn product_survives_where_factors_overflow() {
    assert!(bessel_i(Order::integer(0), 650.0).is_ok());
    assert!(bessel_i(Order::integer(0), 800.0).is_err());
    let p = bessel_ik_product(Order::integer(0), 699.0).unwrap();
    // I₀K₀ ~ 1/(2x) (1 + 1/(8x²))
    assert!((p * 2.0 * 699.0 - 1.0 - 1.0 / (8.0 * 699.0f64.powi(2))).abs() < 1e-12);
    assert!(matches!(
        bessel_k(Order::integer(0), 0.0),
        Err(Error::Domain(_)) | Err(Error::Singularity)
    ));
}

#[test]
fn single_precision_nystrom_tracks_modes() {
    let g = CurveGeometry::resample_arclength(&Circle::<f32>::new(1.0), 64).unwrap();
    let ev = assemble_curve_bs(&g, 1.0f32).unwrap().eigenvalues_desc();
    let q0 = circle_mode_q::<f64>(0, 1.0, 1.0).unwrap();
    assert!((ev[0] as f64 / q0 - 1.0).abs() < 1e-4, "{}", ev[0]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn wronskian(n in 0u32..50, lx in -3.0f64..2.7) {
        let x = 10f64.powf(lx);
        let (i0, k0) = bessel_ik_scaled(Order::integer(n), x).unwrap();
        let (i1, k1) = bessel_ik_scaled(Order::integer(n + 1), x).unwrap();
        let w = x * (i0 * k1 + i1 * k0);
        prop_assert!((w - 1.0).abs() < 1e-12, "n={} x={}: {}", n, x, w);
    }

    #[test]
    fn product_is_decreasing_in_order(n in 0u32..60, lx in -2.0f64..2.5) {
        let x = 10f64.powf(lx);
        let a = bessel_ik_product(Order::integer(n), x).unwrap();
        let b = bessel_ik_product(Order::integer(n + 1), x).unwrap();
        prop_assert!(b < a && b > 0.0);
    }
}
