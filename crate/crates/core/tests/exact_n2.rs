use gmlab::exact_n2::{
    alpha_hat_cdf_n2, alpha_hat_density_n2, alpha_hat_n2_handle, alpha_hat_quantile_n2, disp_polynomials,
    disp_sign_pattern_n2, inverse_alpha_hat_n2_handle, z_density, z_density_split, ZDensityParams,
};
use gmlab::math::{integrate_offsets, EndpointMode, QuadratureConfig};
use gmlab::orders::{
    check_disp, check_st, check_star, log_grid, probability_grid, st_plus_star_implies_disp_check, CheckTolerance, Sign,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{Beta, Continuous, ContinuousCDF};

const PAIRS: [(f64, f64); 3] = [(0.5, 1.0), (1.0, 2.0), (2.0, 5.0)];

#[test]
fn z_density_normalizes_for_random_shapes() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let cfg = QuadratureConfig::with_tolerances(1e-13, 1e-12).with_mode(EndpointMode::LeftSqrt);
    for _ in 0..10 {
        let (a1, a2) = (rng.random_range(0.2..8.0), rng.random_range(0.2..8.0));
        let p = ZDensityParams::new(a1, a2).unwrap();
        // algebraic behaviour at z = 1 for small shapes; the right piece gets
        // the exact complement 1 - z
        let e = (a1.min(a2) - 1.0).min(0.0);
        let right =
            QuadratureConfig::with_tolerances(1e-13, 1e-12).with_mode(EndpointMode::Power { left: 0.0, right: e });
        let f = |z: f64, _: f64, _: f64| z_density(&p, z);
        let g = |z: f64, _: f64, one_minus_z: f64| z_density_split(&p, z, one_minus_z);
        let lo = integrate_offsets(f, 0.0, 0.5, &cfg).unwrap().value;
        let hi = integrate_offsets(g, 0.5, 1.0, &right).unwrap().value;
        assert!((lo + hi - 1.0).abs() < 1e-8, "shapes ({a1}, {a2}): {}", lo + hi);
    }
}

#[test]
fn equal_shapes_give_the_beta_law() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let alpha = rng.random_range(0.2..8.0);
        let z: f64 = rng.random_range(0.01..0.99);
        let ours = z_density(&ZDensityParams::new(alpha, alpha).unwrap(), z).unwrap();
        let oracle = Beta::new(0.5, alpha).unwrap().pdf(z);
        assert!((ours - oracle).abs() < 1e-10 * oracle.max(1.0), "alpha = {alpha}, z = {z}");
    }
}

#[test]
fn estimator_density_is_a_change_of_variables() {
    for alpha in [0.3, 1.0, 2.5, 6.0] {
        let p = ZDensityParams::new(alpha, alpha).unwrap();
        for &x in &log_grid(1.01, 500.0, 40) {
            let direct = alpha_hat_density_n2(alpha, x).unwrap();
            let mapped = z_density(&p, 1.0 / x).unwrap() / (x * x);
            assert!((direct - mapped).abs() < 1e-10 * direct.max(1e-3), "alpha = {alpha}, x = {x}");
        }
    }
}

#[test]
fn cdf_matches_beta_tail() {
    for alpha in [0.3, 1.0, 2.0, 5.0] {
        let beta = Beta::new(0.5, alpha).unwrap();
        for &t in &log_grid(1.001, 1e4, 60) {
            let ours = alpha_hat_cdf_n2(alpha, t).unwrap();
            let oracle = 1.0 - beta.cdf(1.0 / t);
            assert!((ours - oracle).abs() < 1e-12, "alpha = {alpha}, t = {t}");
        }
    }
    assert!((alpha_hat_cdf_n2(2.0, 4.0).unwrap() - 0.3125).abs() < 1e-14);
}

#[test]
fn quantiles_invert_the_cdf() {
    for p in [0.1, 0.5, 0.9] {
        let q = alpha_hat_quantile_n2(0.7, p).unwrap();
        assert!((alpha_hat_cdf_n2(0.7, q).unwrap() - p).abs() < 1e-10);
    }
    assert!((alpha_hat_quantile_n2(1.0, 0.75).unwrap() - 16.0).abs() < 1e-8);
}

#[test]
fn stochastic_monotonicity_on_exact_cdfs() {
    let grid = log_grid(1.0 + 1e-9, 1e3, 500);
    for (a1, a2) in PAIRS {
        for &t in &grid {
            assert!(alpha_hat_cdf_n2(a1, t).unwrap() >= alpha_hat_cdf_n2(a2, t).unwrap(), "({a1}, {a2}) at t = {t}");
        }
    }
}

#[test]
fn order_suite_on_exact_laws() {
    let tol = CheckTolerance::default();
    let pgrid = probability_grid(400, false);
    let xgrid = log_grid(1.0 + 1e-6, 1e3, 400);
    let mut inverse_disp_failures = 0;
    for (a1, a2) in PAIRS {
        let (x, y) = (alpha_hat_n2_handle(a1).unwrap(), alpha_hat_n2_handle(a2).unwrap());
        assert!(check_st(&x, &y, &xgrid, tol).holds(), "st ({a1}, {a2})");
        assert!(check_disp(&x, &y, &pgrid, tol).holds(), "disp ({a1}, {a2})");
        let star_grid: Vec<f64> = pgrid.iter().map(|&p| x.quantile(p)).collect();
        assert!(check_star(&x, &y, &star_grid, tol).holds(), "star ({a1}, {a2})");
        let implication = st_plus_star_implies_disp_check(&x, &y, &xgrid, &pgrid, tol).unwrap();
        assert!(implication.implication_holds && implication.disp.holds());

        let (ix, iy) = (inverse_alpha_hat_n2_handle(a1).unwrap(), inverse_alpha_hat_n2_handle(a2).unwrap());
        if !check_disp(&ix, &iy, &probability_grid(400, true), tol).holds() {
            inverse_disp_failures += 1;
        }
    }
    assert!(inverse_disp_failures >= 1);
}

#[test]
fn sign_pattern_examples() {
    let grid = gmlab::orders::linear_grid(1.5, 200.0, 10_000);
    let s = disp_sign_pattern_n2(2.0, 3.0, 0.5, &grid).unwrap();
    assert!(s.count <= 2);
    assert_eq!(s.pattern[0], Sign::Minus);
    let grid = gmlab::orders::linear_grid(2.0, 200.0, 10_000);
    assert!(disp_sign_pattern_n2(0.5, 0.8, 1.0, &grid).unwrap().count <= 2);
}

fn probe_points(c: f64) -> [f64; 5] {
    [0.1, 0.7, 1.0 + c, 3.3, 12.0]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn one_positive_root_above_unit_shape(a1 in 1.0001f64..8.0, extra in 0.0f64..6.0, c in 0.01f64..10.0) {
        let d = disp_polynomials(a1, a1 + extra, c).unwrap();
        let roots = d.wbar_roots().roots;
        prop_assert_eq!(roots.len(), 2);
        prop_assert!(roots[0] * roots[1] < 0.0);
        prop_assert_eq!(d.positive_wbar_roots().len(), 1);
        for x in probe_points(c) {
            prop_assert!((d.wbar(x) - d.w(x + c)).abs() < 1e-10);
        }
    }

    #[test]
    fn no_positive_root_up_to_unit_shape(a1 in 0.01f64..=1.0, extra in 0.0f64..6.0, c in 0.01f64..10.0) {
        let d = disp_polynomials(a1, a1 + extra, c).unwrap();
        prop_assert!(d.positive_wbar_roots().is_empty(), "roots {:?}", d.wbar_roots().roots);
        for x in probe_points(c) {
            prop_assert!((d.wbar(x) - d.w(x + c)).abs() < 1e-10);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn shifted_density_difference_changes_sign_at_most_twice(
        a1 in 0.2f64..6.0,
        extra in 0.05f64..4.0,
        c in 0.05f64..5.0,
    ) {
        let grid = log_grid(1.0 + c + 1e-9, 1e4, 10_000);
        let s = disp_sign_pattern_n2(a1, a1 + extra, c, &grid).unwrap();
        prop_assert!(s.count <= 2, "{s}");
        if s.count == 2 {
            prop_assert_eq!(s.pattern, vec![Sign::Minus, Sign::Plus, Sign::Minus]);
        }
    }
}
