//! Closed-form CDFs of `T = mean / S` (`n = 3`) for exponential and gamma(2)
//! parents, and the star ratio between them.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use crate::error::{Error, Result};
use crate::math::find_root;
use crate::orders::DistributionHandle;

const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// CDF of `T` for an exponential parent.
pub fn t_cdf_exp_n3(t: f64) -> f64 {
    if t.is_nan() {
        return f64::NAN;
    }
    if t <= FRAC_1_SQRT_2 {
        return 0.0;
    }
    let t2 = t * t;
    if t >= SQRT_2 {
        return 1.0 - 2.0 * PI / (3.0 * SQRT_3 * t2);
    }
    let root = (2.0 - t2).max(0.0).sqrt();
    let asin = (t / SQRT_2).min(1.0).asin();
    (1.0 - root / (SQRT_3 * t) + PI / (3.0 * SQRT_3 * t2) - 2.0 * asin / (SQRT_3 * t2)).clamp(0.0, 1.0)
}

/// CDF of `T` for a gamma(2) parent.
pub fn t_cdf_gamma2_n3(t: f64) -> f64 {
    if t.is_nan() {
        return f64::NAN;
    }
    if t <= FRAC_1_SQRT_2 {
        return 0.0;
    }
    let t2 = t * t;
    let q = 4.0 * t2 - 3.0;
    if t >= SQRT_2 {
        return 1.0 - 10.0 * PI * q / (27.0 * SQRT_3 * t2 * t2);
    }
    let root = (2.0 - t2).max(0.0).sqrt();
    let asin = (t / SQRT_2).min(1.0).asin();
    let poly = -33.0 * t2 * t2 - 13.0 * t2 + 8.0;
    let num = root * poly + 5.0 * PI * t * q - 30.0 * t * q * asin;
    (1.0 + num / (27.0 * SQRT_3 * t2 * t2 * t)).clamp(0.0, 1.0)
}

/// Inverts a CDF supported on `(sqrt(2)/2, ∞)` by bisection, growing the
/// upper end of the bracket geometrically.
pub(crate) fn invert_t_cdf<F>(cdf: F, p: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!("probability must lie in (0, 1), got {p}")));
    }
    let lo = FRAC_1_SQRT_2 + 1e-9;
    if cdf(lo) >= p {
        return Ok(lo);
    }
    let mut hi = 2.0;
    while cdf(hi) < p {
        hi *= 2.0;
        if hi > 1e150 {
            return Err(Error::domain(format!("quantile {p} is beyond representable range")));
        }
    }
    find_root(|t| cdf(t) - p, lo, hi, 1e-15)
}

pub fn t_quantile_exp_n3(p: f64) -> Result<f64> {
    invert_t_cdf(t_cdf_exp_n3, p)
}

pub fn t_quantile_gamma2_n3(p: f64) -> Result<f64> {
    invert_t_cdf(t_cdf_gamma2_n3, p)
}

/// `Q_G(F(x)) / x` with `F`, `G` the exponential and gamma(2) CDFs of `T`.
pub fn star_ratio_exp_vs_gamma2(x: f64) -> Result<f64> {
    if !(x > FRAC_1_SQRT_2) || !x.is_finite() {
        return Err(Error::domain(format!("star ratio needs x > sqrt(2)/2, got {x}")));
    }
    Ok(t_quantile_gamma2_n3(t_cdf_exp_n3(x))? / x)
}

/// Closed-form law of `T` for an exponential parent.
pub fn t_n3_exp_handle() -> DistributionHandle {
    DistributionHandle::new("T[n=3, exponential]", (FRAC_1_SQRT_2, f64::INFINITY), t_cdf_exp_n3, |p| {
        t_quantile_exp_n3(p).unwrap_or(f64::NAN)
    })
}

/// Closed-form law of `T` for a gamma(2) parent.
pub fn t_n3_gamma2_handle() -> DistributionHandle {
    DistributionHandle::new("T[n=3, gamma(2)]", (FRAC_1_SQRT_2, f64::INFINITY), t_cdf_gamma2_n3, |p| {
        t_quantile_gamma2_n3(p).unwrap_or(f64::NAN)
    })
}
