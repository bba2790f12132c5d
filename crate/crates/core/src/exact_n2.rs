//! Closed-form theory for samples of size two.
//!
//! With `X_1 ~ gamma(alpha_1, lambda)` and `X_2 ~ gamma(alpha_2, lambda)`
//! independent, `Z = S^2 / mean^2 = ((X_1 - X_2) / (X_1 + X_2))^2` has an
//! explicit density on `(0, 1)`. For equal shapes `Z = 1/alpha_hat` is
//! `Beta(1/2, alpha)`, so `alpha_hat` lives on `(1, ∞)` with density
//! `x^{-3/2} (1 - 1/x)^{alpha-1} / B(1/2, alpha)`.
//!
//! The second half of the module is the machinery behind dispersive
//! monotonicity of `alpha_hat` in `alpha`: the shifted-density difference, its
//! sign pattern, and the quadratics `w` and `w̄(x) = w(x + c)` whose roots
//! locate the stationary point of the log-ratio `h`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::math::special::inc_beta_xy;
use crate::math::{find_root, inc_beta_pair, ln_beta, solve_quadratic, QuadraticRoots};
use crate::orders::{sign_changes, DistributionHandle, SignChanges};

fn check_shape(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("shape must be positive, got {alpha}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZDensityParams {
    pub alpha1: f64,
    pub alpha2: f64,
}

impl ZDensityParams {
    pub fn new(alpha1: f64, alpha2: f64) -> Result<Self> {
        check_shape(alpha1)?;
        check_shape(alpha2)?;
        Ok(Self { alpha1, alpha2 })
    }
}

/// Density of `Z = S^2 / mean^2` for two independent gamma variates with
/// shapes `alpha1`, `alpha2` and a common scale.
pub fn z_density(p: &ZDensityParams, z: f64) -> Result<f64> {
    if !(z > 0.0 && z < 1.0) {
        return Err(Error::domain(format!("z must lie in (0, 1), got {z}")));
    }
    z_density_split(p, z, 1.0 - z)
}

/// [`z_density`] with `1 - z` supplied by the caller, which keeps the
/// `(1 - z)^{alpha - 1}` factor accurate next to `z = 1`.
pub fn z_density_split(p: &ZDensityParams, z: f64, one_minus_z: f64) -> Result<f64> {
    if !(z > 0.0 && one_minus_z > 0.0) {
        return Err(Error::domain(format!("z must lie in (0, 1), got z = {z}, 1 - z = {one_minus_z}")));
    }
    let (a1, a2) = (p.alpha1, p.alpha2);
    let r = z.sqrt();
    let lp = r.ln_1p();
    // 1 - sqrt z = (1 - z) / (1 + sqrt z)
    let lm = if r > 0.5 { one_minus_z.ln() - lp } else { (-r).ln_1p() };
    let log_front = -ln_beta(a1, a2)? - (a1 + a2) * std::f64::consts::LN_2 - 0.5 * z.ln();
    let t1 = ((a1 - 1.0) * lm + (a2 - 1.0) * lp + log_front).exp();
    let t2 = ((a1 - 1.0) * lp + (a2 - 1.0) * lm + log_front).exp();
    Ok(t1 + t2)
}

/// Law of `alpha_hat` for `n = 2` and shape `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaHatN2 {
    pub alpha: f64,
    /// `B(1/2, alpha)`.
    pub normalizer: f64,
}

impl AlphaHatN2 {
    pub fn new(alpha: f64) -> Result<Self> {
        check_shape(alpha)?;
        Ok(Self { alpha, normalizer: ln_beta(0.5, alpha)?.exp() })
    }

    pub fn density(&self, x: f64) -> Result<f64> {
        alpha_hat_density_n2(self.alpha, x)
    }

    pub fn cdf(&self, t: f64) -> f64 {
        cdf_unchecked(self.alpha, t)
    }

    pub fn quantile(&self, p: f64) -> Result<f64> {
        alpha_hat_quantile_n2(self.alpha, p)
    }
}

pub fn alpha_hat_density_n2(alpha: f64, x: f64) -> Result<f64> {
    check_shape(alpha)?;
    if !(x > 1.0) {
        return Err(Error::domain(format!("alpha_hat density needs x > 1, got {x}")));
    }
    Ok(ln_alpha_hat_density(alpha, ln_beta(0.5, alpha)?, x).exp())
}

fn ln_alpha_hat_density(alpha: f64, ln_b: f64, x: f64) -> f64 {
    // 1 - 1/x written as (x - 1)/x to keep precision near x = 1
    -1.5 * x.ln() + (alpha - 1.0) * ((x - 1.0) / x).ln() - ln_b
}

/// `P(alpha_hat <= t) = 1 - I_{1/t}(1/2, alpha)`; zero for `t <= 1`.
pub fn alpha_hat_cdf_n2(alpha: f64, t: f64) -> Result<f64> {
    check_shape(alpha)?;
    if t.is_nan() {
        return Err(Error::domain("alpha_hat CDF at NaN"));
    }
    Ok(cdf_unchecked(alpha, t))
}

fn cdf_unchecked(alpha: f64, t: f64) -> f64 {
    if t <= 1.0 {
        return 0.0;
    }
    if t == f64::INFINITY {
        return 1.0;
    }
    // the complement of I_{1/t}(1/2, alpha), with 1 - 1/t formed as (t-1)/t
    inc_beta_xy(0.5, alpha, 1.0 / t, (t - 1.0) / t).map(|(_, q)| q).unwrap_or(f64::NAN)
}

/// Inverse of [`alpha_hat_cdf_n2`] by bisection on `(1 + 1e-12, t_hi)`, where
/// `t_hi` grows geometrically until the CDF exceeds `p`.
pub fn alpha_hat_quantile_n2(alpha: f64, p: f64) -> Result<f64> {
    check_shape(alpha)?;
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!("probability must lie in (0, 1), got {p}")));
    }
    let lo = 1.0 + 1e-12;
    if cdf_unchecked(alpha, lo) >= p {
        return Ok(lo);
    }
    let mut hi = 2.0;
    while cdf_unchecked(alpha, hi) < p {
        hi *= 4.0;
        if !hi.is_finite() {
            return Err(Error::domain(format!("quantile {p} is beyond floating-point range")));
        }
    }
    find_root(|t| cdf_unchecked(alpha, t) - p, lo, hi, 1e-12)
}

/// CDF of `1/alpha_hat ~ Beta(1/2, alpha)` on `(0, 1)`.
pub fn inverse_alpha_hat_cdf_n2(alpha: f64, z: f64) -> Result<f64> {
    check_shape(alpha)?;
    Ok(inc_beta_pair(0.5, alpha, z.clamp(0.0, 1.0))?.0)
}

pub fn inverse_alpha_hat_quantile_n2(alpha: f64, p: f64) -> Result<f64> {
    check_shape(alpha)?;
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!("probability must lie in (0, 1), got {p}")));
    }
    find_root(|z| inc_beta_pair(0.5, alpha, z).map(|(i, _)| i - p).unwrap_or(f64::NAN), 0.0, 1.0, 1e-15)
}

/// Handle for the law of `alpha_hat` (`n = 2`) used by the order checkers.
pub fn alpha_hat_n2_handle(alpha: f64) -> Result<DistributionHandle> {
    let law = AlphaHatN2::new(alpha)?;
    let ln_b = law.normalizer.ln();
    Ok(DistributionHandle::new(
        format!("alpha_hat[n=2, alpha={alpha}]"),
        (1.0, f64::INFINITY),
        move |t| cdf_unchecked(alpha, t),
        move |p| alpha_hat_quantile_n2(alpha, p).unwrap_or(f64::NAN),
    )
    .with_density(move |x| if x > 1.0 { ln_alpha_hat_density(alpha, ln_b, x).exp() } else { 0.0 }))
}

/// Handle for `1/alpha_hat ~ Beta(1/2, alpha)` (`n = 2`).
pub fn inverse_alpha_hat_n2_handle(alpha: f64) -> Result<DistributionHandle> {
    check_shape(alpha)?;
    Ok(DistributionHandle::new(
        format!("1/alpha_hat[n=2, alpha={alpha}]"),
        (0.0, 1.0),
        move |z| inverse_alpha_hat_cdf_n2(alpha, z).unwrap_or(f64::NAN),
        move |p| inverse_alpha_hat_quantile_n2(alpha, p).unwrap_or(f64::NAN),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MlrReport {
    pub holds: bool,
    /// Largest drop of the likelihood ratio between consecutive grid points.
    pub worst_decrease: f64,
}

/// Checks that `f^{alpha2}(x) / f^{alpha1}(x)` is nondecreasing along `grid`.
pub fn mlr_check_n2(alpha1: f64, alpha2: f64, grid: &[f64]) -> Result<MlrReport> {
    check_shape(alpha1)?;
    check_shape(alpha2)?;
    if grid.iter().any(|&x| !(x > 1.0)) || grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::domain("MLR grid must be strictly increasing inside (1, ∞)"));
    }
    let (b1, b2) = (ln_beta(0.5, alpha1)?, ln_beta(0.5, alpha2)?);
    let ratios: Vec<f64> = grid
        .iter()
        .map(|&x| (ln_alpha_hat_density(alpha2, b2, x) - ln_alpha_hat_density(alpha1, b1, x)).exp())
        .collect();
    let mut worst = 0.0f64;
    let mut holds = true;
    for w in ratios.windows(2) {
        let drop = w[0] - w[1];
        worst = worst.max(drop);
        if drop > 1e-12 * w[0].abs().max(1.0) {
            holds = false;
        }
    }
    Ok(MlrReport { holds, worst_decrease: worst })
}

/// Ingredients of the dispersive-monotonicity argument for a shift `c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DispAnalysis {
    pub alpha1: f64,
    pub alpha2: f64,
    pub c: f64,
    /// `B(1/2, alpha2) / B(1/2, alpha1)`.
    pub a_ratio: f64,
    /// `w(x) = w0 x^2 + w1 x + w2`, leading coefficient first.
    pub w_coeffs: (f64, f64, f64),
    /// `w̄(x) = w(x + c)`, leading coefficient first.
    pub wbar_coeffs: (f64, f64, f64),
}

fn poly2((a, b, c): (f64, f64, f64), x: f64) -> f64 {
    (a * x + b) * x + c
}

impl DispAnalysis {
    pub fn w(&self, x: f64) -> f64 {
        poly2(self.w_coeffs, x)
    }

    pub fn wbar(&self, x: f64) -> f64 {
        poly2(self.wbar_coeffs, x)
    }

    pub fn wbar_roots(&self) -> QuadraticRoots {
        let (a, b, c) = self.wbar_coeffs;
        solve_quadratic(a, b, c)
    }

    /// Roots of `w̄` in `(0, ∞)`.
    pub fn positive_wbar_roots(&self) -> Vec<f64> {
        self.wbar_roots().roots.into_iter().filter(|&r| r > 0.0).collect()
    }

    /// Log-ratio of the shifted density to the unshifted one on the support
    /// translated to start at 0, defined for `x > c`:
    /// `log A + 3/2 log(x+1) - 3/2 log(x-c+1) + (alpha1-1) log(1 - 1/(x-c+1)) - (alpha2-1) log(1 - 1/(x+1))`.
    pub fn h(&self, x: f64) -> f64 {
        let (a1, a2, c) = (self.alpha1, self.alpha2, self.c);
        self.a_ratio.ln() + 1.5 * (x + 1.0).ln() - 1.5 * (x - c + 1.0).ln()
            + (a1 - 1.0) * ((x - c) / (x - c + 1.0)).ln()
            - (a2 - 1.0) * (x / (x + 1.0)).ln()
    }
}

pub fn disp_polynomials(alpha1: f64, alpha2: f64, c: f64) -> Result<DispAnalysis> {
    check_shape(alpha1)?;
    check_shape(alpha2)?;
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::domain(format!("shift must be positive, got {c}")));
    }
    let d = alpha2 - alpha1;
    let w_coeffs = (
        2.0 * d + 3.0 * c,
        2.0 * d + 4.0 * c - 4.0 * alpha2 * c - 3.0 * c * c,
        2.0 * c - 2.0 * alpha2 * c - 2.0 * c * c + 2.0 * alpha2 * c * c,
    );
    let wbar_coeffs =
        (2.0 * d + 3.0 * c, 2.0 * d + 4.0 * c * (1.0 - alpha1) + 3.0 * c * c, 2.0 * (1.0 - alpha1) * (c + c * c));
    let a_ratio = (ln_beta(0.5, alpha2)? - ln_beta(0.5, alpha1)?).exp();
    Ok(DispAnalysis { alpha1, alpha2, c, a_ratio, w_coeffs, wbar_coeffs })
}

/// Sign pattern of `d(x) = f^{alpha1}(x - c) - f^{alpha2}(x)` along `grid`,
/// which should lie in `(1 + c, ∞)`. Values with `|d| < 1e-13 max|d|` are
/// treated as zero.
pub fn disp_sign_pattern_n2(alpha1: f64, alpha2: f64, c: f64, grid: &[f64]) -> Result<SignChanges> {
    check_shape(alpha1)?;
    check_shape(alpha2)?;
    if !(c > 0.0) {
        return Err(Error::domain("shift must be positive"));
    }
    let (b1, b2) = (ln_beta(0.5, alpha1)?, ln_beta(0.5, alpha2)?);
    let values: Vec<f64> = grid
        .iter()
        .filter(|&&x| x > 1.0 + c)
        .map(|&x| ln_alpha_hat_density(alpha1, b1, x - c).exp() - ln_alpha_hat_density(alpha2, b2, x).exp())
        .collect();
    let max_abs = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(sign_changes(&values, 1e-13 * max_abs))
}
