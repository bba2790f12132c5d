//! Joint density of `(mean, S)` for three observations, and the density of
//! `T = mean / S` obtained from it.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use super::parent::ParentDensity;
use crate::error::{Error, Result};
use crate::math::{integrate_offsets, integrate_to_infinity, log_gamma, EndpointMode, QuadratureConfig};

const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// How the `u` integral of the `T` density is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RayIntegral {
    /// Closed form for gamma parents, quadrature otherwise.
    Auto,
    /// Always integrate numerically over `u`.
    Quadrature,
}

/// Tolerances for the nested integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct N3Accuracy {
    pub ray: RayIntegral,
    /// The `x1` integral inside the joint density.
    pub inner: QuadratureConfig,
    /// The `u` integral of the `T` density.
    pub outer: QuadratureConfig,
    /// Half-line integrals stop once panels fall below this fraction of the total.
    pub tail_rel: f64,
}

impl Default for N3Accuracy {
    fn default() -> Self {
        Self {
            ray: RayIntegral::Auto,
            inner: QuadratureConfig::with_tolerances(1e-15, 1e-11),
            outer: QuadratureConfig::with_tolerances(1e-13, 1e-9),
            tail_rel: 1e-12,
        }
    }
}

/// Joint density of `(mean, S)` at `(xbar, s)` for an i.i.d. sample of three
/// from `parent`, with `S` the biased standard deviation.
///
/// Writing `r = s sqrt 2` and `R = sqrt(6 s^2 - 3 (x1 - xbar)^2)`, the density is
/// `18 s ∫ f(x1) f((3xbar - x1 + R)/2) f((3xbar - x1 - R)/2) / R dx1` over the
/// part of `(xbar - r, xbar + r)` where all three arguments are positive: the
/// whole interval when `s <= xbar / sqrt 2`, and two pieces split around the
/// zero set of the third argument when `xbar / sqrt 2 < s <= xbar sqrt 2`.
pub fn joint_density_n3(parent: &ParentDensity, xbar: f64, s: f64) -> Result<f64> {
    joint_density_n3_with(parent, xbar, s, &N3Accuracy::default())
}

pub fn joint_density_n3_with(parent: &ParentDensity, xbar: f64, s: f64, acc: &N3Accuracy) -> Result<f64> {
    if !(xbar > 0.0) || !xbar.is_finite() {
        return Err(Error::domain(format!("joint density needs xbar > 0, got {xbar}")));
    }
    if !(s >= 0.0) {
        return Err(Error::domain(format!("joint density needs s >= 0, got {s}")));
    }
    let r = s * SQRT_2;
    joint_core(parent, Geometry { xbar, r, r_minus_xbar: r - xbar, room: 2.0 * xbar - r }, acc)
}

/// Shape of the `x1` integration problem. `r_minus_xbar` and `room = 2xbar - r`
/// are passed separately because the singular structure depends on them
/// through differences that cancel catastrophically if recomputed from
/// `xbar` and `r`.
#[derive(Debug, Clone, Copy)]
struct Geometry {
    xbar: f64,
    r: f64,
    r_minus_xbar: f64,
    room: f64,
}

fn joint_core(parent: &ParentDensity, g: Geometry, acc: &N3Accuracy) -> Result<f64> {
    let Geometry { xbar, r, r_minus_xbar, room } = g;
    if r == 0.0 || !(room > 0.0) {
        return Ok(0.0);
    }
    let s = r / SQRT_2;
    let e0 = parent.origin_exponent();
    let near = e0.min(0.0);

    // With d = x1 - xbar, R^2 = 3 (r + d)(r - d) and
    // x3 = ((2x1 - 3xbar)^2 - 3 (r^2 - xbar^2)) / (2 (3xbar - x1 + R)).
    // Every factor that can vanish is formed from an exact offset.
    let value = if r_minus_xbar <= 0.0 {
        // numerator (2x1 - 3xbar)^2 + 3 (xbar - r)(xbar + r): both terms are
        // nonnegative, and it nearly vanishes at x1 = 3xbar/2 when r ~ xbar
        let excess = -3.0 * r_minus_xbar * (xbar + r);
        let term = |x1: f64, lin: f64, r_plus_d: f64, r_minus_d: f64| {
            let big_r = (3.0 * r_plus_d * r_minus_d).sqrt();
            let x3 = (lin * lin + excess) / (2.0 * (3.0 * xbar - x1 + big_r));
            let x2 = 0.5 * (3.0 * xbar - x1 + big_r);
            density_term(parent, x1, x2, x3, big_r)
        };
        // xbar - r from the exact offset: the result is sensitive to it when it is tiny
        let (lo, hi, spike) = (-r_minus_xbar, xbar + r, 1.5 * xbar);
        if spike < hi {
            let below = acc.inner.with_mode(EndpointMode::Power { left: -0.5, right: near });
            let above = acc.inner.with_mode(EndpointMode::Power { left: near, right: -0.5 });
            let left = |x1: f64, from_lo: f64, to_spike: f64| Ok(term(x1, -2.0 * to_spike, from_lo, 2.0 * r - from_lo));
            let right = |x1: f64, from_spike: f64, to_hi: f64| Ok(term(x1, 2.0 * from_spike, 2.0 * r - to_hi, to_hi));
            integrate_offsets(left, lo, spike, &below)?.value + integrate_offsets(right, spike, hi, &above)?.value
        } else {
            let whole = |x1: f64, from_lo: f64, to_hi: f64| Ok(term(x1, 2.0 * x1 - 3.0 * xbar, from_lo, to_hi));
            integrate_offsets(whole, lo, hi, &acc.inner.with_mode(EndpointMode::BothSqrt))?.value
        }
    } else {
        // x3 = 0 at x1 = (3xbar -+ gap)/2; both roots are written in
        // cancellation-free form
        let gap = SQRT_3 * (r_minus_xbar * (r + xbar)).sqrt();
        let a1 = 1.5 * room * (2.0 * xbar + r) / (3.0 * xbar + gap);
        let hi = xbar + r;
        // width of the piece ending at hi; it can fall below one ulp of hi, so
        // that piece is integrated in the local coordinate y = hi - x1
        let width = room * room / (2.0 * (2.0 * r - xbar + gap));

        // on [0, a1]: r + d = (r - xbar) + x1 and 2x1 - 3xbar = -gap - 2(a1 - x1)
        let left = |x1: f64, _: f64, to_a1: f64| -> Result<f64> {
            let big_r = (3.0 * (r_minus_xbar + x1) * (r + xbar - x1)).sqrt();
            let x2 = 0.5 * (3.0 * xbar - x1 + big_r);
            let x3 = 2.0 * to_a1 * (gap + to_a1) / (3.0 * xbar - x1 + big_r);
            Ok(density_term(parent, x1, x2, x3, big_r))
        };
        // on y in [0, width]: r - d = y, 3xbar - x1 = room + y and
        // 2x1 - 3xbar = gap + 2(width - y)
        let right = |y: f64, _: f64, from_a2: f64| -> Result<f64> {
            let big_r = (3.0 * y * (2.0 * r - y)).sqrt();
            let rest = room + y;
            let x2 = 0.5 * (rest + big_r);
            let x3 = 2.0 * from_a2 * (gap + from_a2) / (rest + big_r);
            Ok(density_term(parent, hi - y, x2, x3, big_r))
        };
        let cfg_left = acc.inner.with_mode(EndpointMode::Power { left: e0, right: near });
        let cfg_right = acc.inner.with_mode(EndpointMode::Power { left: -0.5, right: near });
        integrate_offsets(left, 0.0, a1, &cfg_left)?.value + integrate_offsets(right, 0.0, width, &cfg_right)?.value
    };
    Ok(18.0 * s * value)
}

#[inline]
fn density_term(parent: &ParentDensity, x1: f64, x2: f64, x3: f64, big_r: f64) -> f64 {
    if !(x1 > 0.0 && x2 > 0.0 && x3 > 0.0 && big_r > 0.0) {
        return 0.0;
    }
    parent.product3(x1, x2, x3) / big_r
}

/// Density of `T = mean / S` for `n = 3`: `∫_0^∞ u p(u t, u) du`, where `p` is
/// [`joint_density_n3`]. Zero below the support edge `sqrt(2)/2`.
pub fn t_density_n3(parent: &ParentDensity, t: f64) -> Result<f64> {
    t_density_n3_with(parent, t, &N3Accuracy::default())
}

pub fn t_density_n3_with(parent: &ParentDensity, t: f64, acc: &N3Accuracy) -> Result<f64> {
    if t.is_nan() {
        return Err(Error::domain("T density at NaN"));
    }
    if t <= FRAC_1_SQRT_2 || t.is_infinite() {
        return Ok(0.0);
    }
    t_density_split(parent, TPoint { t, sqrt2_minus_t: SQRT_2 - t, two_t_minus_sqrt2: 2.0 * t - SQRT_2 }, acc)
}

/// A value of `T` together with its distances to the two critical points,
/// `sqrt 2` (branch boundary) and `sqrt(2)/2` (support edge).
#[derive(Debug, Clone, Copy)]
pub(crate) struct TPoint {
    pub t: f64,
    pub sqrt2_minus_t: f64,
    pub two_t_minus_sqrt2: f64,
}

pub(crate) fn t_density_split(parent: &ParentDensity, p: TPoint, acc: &N3Accuracy) -> Result<f64> {
    if !(p.two_t_minus_sqrt2 > 0.0) || !p.t.is_finite() {
        return Ok(0.0);
    }
    if let (RayIntegral::Auto, Some((alpha, lambda))) = (acc.ray, parent.gamma_params()) {
        return gamma_ray(parent, p, alpha, lambda, acc);
    }
    // along the ray (xbar, s) = (u t, u): r - xbar = u (sqrt 2 - t), 2xbar - r = u (2t - sqrt 2)
    let integrand = |u: f64| -> Result<f64> {
        let g =
            Geometry { xbar: u * p.t, r: u * SQRT_2, r_minus_xbar: u * p.sqrt2_minus_t, room: u * p.two_t_minus_sqrt2 };
        Ok(u * joint_core(parent, g, acc)?)
    };
    // near u = 0 all three observations shrink together: u p(ut, u) ~ u^{3e+2}
    let left = 3.0 * parent.origin_exponent() + 2.0;
    let first_width = parent.mean() / p.t;
    Ok(integrate_to_infinity(integrand, 0.0, first_width, left, &acc.outer, acc.tail_rel)?.value)
}

// For a gamma parent the three observations always sum to 3 xbar, so the
// parent product carries the common factor exp(-3 xbar / lambda) and the rest
// of the joint density is homogeneous of degree 3 alpha - 2. Along the ray
// this gives p(u t, u) = p(1, 1/t) t^{3 alpha - 2} u^{3 alpha - 2} exp(3 (1 - u t) / lambda),
// and the u integral is a gamma function.
fn gamma_ray(parent: &ParentDensity, p: TPoint, alpha: f64, lambda: f64, acc: &N3Accuracy) -> Result<f64> {
    let g =
        Geometry { xbar: 1.0, r: SQRT_2 / p.t, r_minus_xbar: p.sqrt2_minus_t / p.t, room: p.two_t_minus_sqrt2 / p.t };
    let unit = joint_core(parent, g, acc)?;
    if unit == 0.0 {
        return Ok(0.0);
    }
    let ln_t = p.t.ln();
    let log_rest = 3.0 / lambda
        + (3.0 * alpha - 2.0) * ln_t
        + log_gamma(3.0 * alpha)?
        + 3.0 * alpha * (lambda.ln() - 3f64.ln() - ln_t);
    Ok(unit * log_rest.exp())
}
