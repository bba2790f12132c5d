use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use gmlab::exact_n3::{
    joint_density_n3, quantile_difference_extrema, remark1_extrema, star_ratio_exp_vs_gamma2, t_cdf_exp_n3,
    t_cdf_gamma2_n3, t_cdf_numeric_n3, t_density_n3, t_density_n3_with, t_quantile_gamma2_n3, N3Accuracy,
    ParentDensity, RayIntegral, Statistic, TStatN3,
};
use gmlab::gamma::{moment_estimates, sample_gamma};
use gmlab::math::{integrate_to_infinity, integrate_with, EndpointMode, QuadratureConfig};
use gmlab::{Error, GammaParams};

const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// `∫ f_T` over the support, split at the branch point `sqrt 2`.
fn t_mass(parent: &ParentDensity) -> f64 {
    let e = parent.origin_exponent();
    let cfg = QuadratureConfig::with_tolerances(1e-11, 1e-10);
    let edge = cfg.with_mode(EndpointMode::Power { left: 2.0 * e + 1.0, right: e + 0.5 });
    let f = |t: f64| t_density_n3(parent, t);
    let inner = integrate_with(f, FRAC_1_SQRT_2, SQRT_2, &edge).unwrap().value;
    let outer = integrate_to_infinity(f, SQRT_2, 1.0, e + 0.5, &cfg, 1e-12).unwrap().value;
    inner + outer
}

#[test]
fn closed_forms_at_the_junction() {
    let f = t_cdf_exp_n3(SQRT_2);
    assert!((f - (1.0 - PI / (3.0 * SQRT_3))).abs() < 1e-14);
    let g = t_cdf_gamma2_n3(SQRT_2);
    assert!((g - (1.0 - 25.0 * PI / (54.0 * SQRT_3))).abs() < 1e-14);
    // the largest double below sqrt 2 takes the lower branch
    let below = SQRT_2.next_down();
    assert!((t_cdf_exp_n3(below) - f).abs() < 1e-12);
    assert!((t_cdf_gamma2_n3(below) - g).abs() < 1e-12);
}

#[test]
fn closed_forms_at_the_support_edge() {
    assert!(t_cdf_exp_n3(FRAC_1_SQRT_2).abs() < 1e-12);
    assert!(t_cdf_gamma2_n3(FRAC_1_SQRT_2).abs() < 1e-12);
    assert_eq!(t_cdf_exp_n3(0.5), 0.0);
    assert!(t_cdf_gamma2_n3(1.0) < t_cdf_gamma2_n3(1.2) && t_cdf_gamma2_n3(1.2) < t_cdf_gamma2_n3(1.4));
    assert!((t_cdf_exp_n3(1e8) - 1.0).abs() < 1e-12);
}

fn central_difference(f: fn(f64) -> f64, t: f64) -> f64 {
    let h = 1e-4;
    (f(t + h) - f(t - h)) / (2.0 * h)
}

#[test]
fn density_is_the_derivative_of_the_closed_forms() {
    let exp = ParentDensity::exponential();
    let g2 = ParentDensity::gamma_shape(2.0).unwrap();
    for i in 0..20 {
        let t = 0.75 + 0.2 * i as f64;
        if (t - SQRT_2).abs() < 2e-4 {
            continue;
        }
        let d = t_density_n3(&exp, t).unwrap();
        assert!((d - central_difference(t_cdf_exp_n3, t)).abs() < 1e-4, "exponential, t = {t}");
        let d = t_density_n3(&g2, t).unwrap();
        assert!((d - central_difference(t_cdf_gamma2_n3, t)).abs() < 1e-4, "gamma(2), t = {t}");
    }
}

#[test]
fn t_density_normalizes() {
    for alpha in [1.0, 2.0, 0.7] {
        let mass = t_mass(&ParentDensity::gamma_shape(alpha).unwrap());
        assert!((mass - 1.0).abs() < 1e-5, "alpha = {alpha}: {mass}");
    }
}

#[test]
fn t_density_normalizes_for_a_custom_parent() {
    let half_normal = |x: f64| (2.0 / PI).sqrt() * (-0.5 * x * x).exp();
    let parent = ParentDensity::new("half-normal", half_normal, 0.0).unwrap();
    let table = TStatN3::new(parent).unwrap();
    assert!((table.total_mass() - 1.0).abs() < 1e-6, "{}", table.total_mass());
}

#[test]
fn ray_integral_routes_agree_for_small_shapes() {
    let quad = N3Accuracy { ray: RayIntegral::Quadrature, ..N3Accuracy::default() };
    let p = ParentDensity::gamma_shape(0.3).unwrap();
    for t in [0.72, 0.9, 1.2, 1.4, 2.0] {
        let a = t_density_n3(&p, t).unwrap();
        let b = t_density_n3_with(&p, t, &quad).unwrap();
        assert!((a - b).abs() < 1e-7 * a, "t = {t}: {a} vs {b}");
    }
}

#[test]
fn joint_density_normalizes() {
    let cfg = QuadratureConfig::with_tolerances(1e-9, 1e-8);
    for alpha in [1.0, 2.0] {
        let parent = ParentDensity::gamma_shape(alpha).unwrap();
        // the s-integrand has a kink of order (e + 1/2) at s = xbar / sqrt 2
        let e = alpha - 1.0;
        let below = cfg.with_mode(EndpointMode::Power { left: 0.0, right: e + 0.5 });
        let above = cfg.with_mode(EndpointMode::Power { left: e + 0.5, right: 2.0 * e + 1.0 });
        let marginal = |xbar: f64| -> gmlab::Result<f64> {
            let mid = xbar * FRAC_1_SQRT_2;
            let lo = integrate_with(|s| joint_density_n3(&parent, xbar, s), 0.0, mid, &below)?.value;
            let hi = integrate_with(|s| joint_density_n3(&parent, xbar, s), mid, xbar * SQRT_2, &above)?.value;
            Ok(lo + hi)
        };
        let mass = integrate_to_infinity(marginal, 0.0, 1.0, 3.0 * alpha - 1.0, &cfg, 1e-10).unwrap().value;
        assert!((mass - 1.0).abs() < 1e-5, "alpha = {alpha}: {mass}");
    }
}

#[test]
fn numeric_cdf_matches_closed_forms() {
    for i in 0..25 {
        let t = 0.72 + (5.0 - 0.72) * i as f64 / 24.0;
        assert!((t_cdf_numeric_n3(1.0, t).unwrap() - t_cdf_exp_n3(t)).abs() < 1e-4, "t = {t}");
        assert!((t_cdf_numeric_n3(2.0, t).unwrap() - t_cdf_gamma2_n3(t)).abs() < 1e-4, "t = {t}");
    }
    assert_eq!(t_cdf_numeric_n3(0.4, 0.6).unwrap(), 0.0);
}

#[test]
fn squared_ratio_is_the_shape_estimate() {
    let p = GammaParams::shape(0.8).unwrap();
    let xs = sample_gamma(&p, 3 * 2000, 3);
    for chunk in xs.chunks(3) {
        let s = moment_estimates(chunk).unwrap();
        let t = s.t_ratio();
        assert!(t >= FRAC_1_SQRT_2 - 1e-12);
        assert!((t * t - s.alpha_hat).abs() <= 1e-12 * s.alpha_hat);
    }
}

#[test]
fn star_ratios() {
    let expected = [(1.1, 1.32686), (6f64.sqrt() / 2.0, 1.31502), (SQRT_2, 1.32081)];
    let values: Vec<f64> = expected.iter().map(|&(x, _)| star_ratio_exp_vs_gamma2(x).unwrap()).collect();
    for (v, (x, want)) in values.iter().zip(expected) {
        assert!((v - want).abs() < 5e-5, "x = {x}: {v} vs {want}");
    }
    let closed = (40.0 + 2.0 * 130f64.sqrt()).sqrt() / 6.0;
    assert!((values[2] - closed).abs() < 1e-9);
    // rise-fall-rise: not star ordered
    assert!(values[0] > values[1] && values[2] > values[1]);
    assert!((t_cdf_gamma2_n3(t_quantile_gamma2_n3(0.3).unwrap()) - 0.3).abs() < 1e-12);
}

#[test]
fn quantile_difference_extrema_for_small_shapes() {
    let r = remark1_extrema(0.2, 0.25).unwrap();
    assert!((r.p_max - 0.72).abs() <= 0.03, "{r:?}");
    assert!((r.p_min - 0.85).abs() <= 0.03, "{r:?}");
    assert!(r.diff_at_max > r.diff_at_min);
    // the studentized-ratio reading puts the maximum elsewhere
    let t = quantile_difference_extrema(0.2, 0.25, Statistic::T).unwrap();
    assert!(t.p_max < r.p_max);
    assert!(matches!(remark1_extrema(0.25, 0.25), Err(Error::ExtremaNotFound(_))));
}
