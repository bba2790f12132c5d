use gmlab::math::{
    beta_fn, find_root, integrate, log_gamma, reg_inc_beta, solve_quadratic, EndpointMode, QuadratureConfig,
};
use proptest::prelude::*;
use statrs::function::beta::beta_reg;
use statrs::function::gamma::ln_gamma;

#[test]
fn log_gamma_matches_statrs_on_wide_range() {
    let mut x = 1e-3;
    while x < 1e3 {
        let ours = log_gamma(x).unwrap();
        let theirs = ln_gamma(x);
        // statrs itself is good to ~1e-14 relative; near the zeros at 1 and 2
        // compare absolutely
        assert!((ours - theirs).abs() <= 1e-13 * theirs.abs().max(1.0), "x = {x}: {ours} vs {theirs}");
        x *= 1.07;
    }
    assert!(log_gamma(0.0).is_err());
    assert!(log_gamma(-1.5).is_err());
}

#[test]
fn log_gamma_recurrence() {
    for x in [0.5, 1.3, 7.7] {
        let ratio = (log_gamma(x + 1.0).unwrap() - log_gamma(x).unwrap()).exp();
        assert!((ratio - x).abs() <= 1e-12 * x, "x = {x}");
    }
}

#[test]
fn beta_examples() {
    assert!((beta_fn(1.0, 1.0).unwrap() - 1.0).abs() < 1e-14);
    assert!((beta_fn(0.5, 1.0).unwrap() - 2.0).abs() < 1e-14);
    assert!((beta_fn(0.5, 0.5).unwrap() - std::f64::consts::PI).abs() < 1e-13);
    assert!(beta_fn(0.0, 1.0).is_err());
}

#[test]
fn reg_inc_beta_matches_statrs() {
    for &a in &[0.1, 0.5, 1.0, 2.5, 9.0] {
        for &b in &[0.2, 0.5, 1.0, 3.0, 10.0] {
            for i in 0..=50 {
                let x = i as f64 / 50.0;
                let ours = reg_inc_beta(a, b, x).unwrap();
                let theirs = beta_reg(a, b, x);
                assert!((ours - theirs).abs() < 1e-12, "I_{x}({a}, {b}): {ours} vs {theirs}");
            }
        }
    }
    assert!((reg_inc_beta(0.5, 1.0, 0.25).unwrap() - 0.5).abs() < 1e-14);
    assert!(reg_inc_beta(1.0, 1.0, 1.5).is_err());
}

#[test]
fn quadrature_examples() {
    let cfg = QuadratureConfig::default();
    let left = cfg.with_mode(EndpointMode::LeftSqrt);
    assert!((integrate(|x| x.powf(-0.5), 0.0, 1.0, &left).unwrap().value - 2.0).abs() < 1e-10);
    assert!((integrate(f64::sin, 0.0, std::f64::consts::PI, &cfg).unwrap().value - 2.0).abs() < 1e-10);
    assert!((integrate(|x| 3.0 * x * x, 0.0, 1.0, &cfg).unwrap().value - 1.0).abs() < 1e-10);
}

#[test]
fn root_examples() {
    let r = find_root(|x| x * x - 2.0, 1.0, 2.0, 1e-12).unwrap();
    assert!((r - 2f64.sqrt()).abs() < 1e-12);
    assert!(find_root(|x| x, -1.0, 1.0, 1e-12).unwrap().abs() < 1e-12);
    let r = find_root(f64::cos, 1.0, 2.0, 1e-12).unwrap();
    assert!((r - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    assert!(find_root(|x| x * x + 1.0, -1.0, 1.0, 1e-12).is_err());
}

#[test]
fn quadratic_examples() {
    assert_eq!(solve_quadratic(1.0, 0.0, -4.0).roots, vec![-2.0, 2.0]);
    let r = solve_quadratic(3.0, -1.0, -4.0).roots;
    assert!((r[0] + 1.0).abs() < 1e-15 && (r[1] - 4.0 / 3.0).abs() < 1e-15);
    assert!(solve_quadratic(1.0, 0.0, 1.0).roots.is_empty());
    let degenerate = solve_quadratic(0.0, 0.0, 0.0);
    assert!(degenerate.roots.is_empty() && degenerate.degenerate);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn reg_inc_beta_is_nondecreasing(a in 0.1f64..10.0, b in 0.1f64..10.0) {
        let mut prev = reg_inc_beta(a, b, 0.0).unwrap();
        prop_assert_eq!(prev, 0.0);
        for i in 1..=1000 {
            let v = reg_inc_beta(a, b, i as f64 / 1000.0).unwrap();
            prop_assert!(v >= prev, "I({a}, {b}) decreased at step {i}: {prev} -> {v}");
            prev = v;
        }
        prop_assert_eq!(prev, 1.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn integrate_is_additive(
        amp in -3.0f64..3.0,
        freq in 0.1f64..6.0,
        decay in 0.0f64..2.0,
        a in -2.0f64..0.0,
        len in 0.1f64..4.0,
        frac in 0.05f64..0.95,
    ) {
        let f = |x: f64| amp * (freq * x).cos() * (-decay * x).exp() + x * x;
        let cfg = QuadratureConfig::default();
        let b = a + len;
        let c = a + frac * len;
        let whole = integrate(f, a, b, &cfg).unwrap().value;
        let parts = integrate(f, a, c, &cfg).unwrap().value + integrate(f, c, b, &cfg).unwrap().value;
        prop_assert!((whole - parts).abs() <= 3.0 * cfg.abs_tol.max(cfg.rel_tol * whole.abs()));
    }

    #[test]
    fn quadratic_roots_have_small_residuals(a2 in -10.0f64..10.0, a1 in -10.0f64..10.0, a0 in -10.0f64..10.0) {
        let scale = a2.abs().max(a1.abs()).max(a0.abs());
        let roots = solve_quadratic(a2, a1, a0);
        for w in roots.roots.windows(2) {
            prop_assert!(w[0] <= w[1]);
        }
        for r in roots.roots {
            let residual = (a2 * r + a1) * r + a0;
            prop_assert!(residual.abs() <= 1e-9 * scale * (1.0 + r * r), "root {r}, residual {residual}");
        }
    }
}
