//! Tabulated law of `T = mean / S` for `n = 3` and an arbitrary parent.
//!
//! The CDF is tabulated in `W = 1/T^2 = 1/alpha_hat`, which lives on `(0, 2)`.
//! For a parent with `f(x) ~ x^e` at the origin the density of `W` is smooth
//! at `0`, has algebraic singularities `|w - 1/2|^{e + 1/2}` on both sides of
//! `1/2` (the boundary between the two branches of the joint density), and
//! behaves like `(2 - w)^{2e + 1}` at `2`. Each panel between these points is
//! stretched with `w = end ± L v^k` so the integrand is smooth in `v`, then
//! tabulated as a piecewise Chebyshev antiderivative.

use std::collections::HashMap;
use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};
use std::sync::{Arc, Mutex, OnceLock};

use super::joint::{t_density_n3_with, t_density_split, N3Accuracy, TPoint};
use super::parent::ParentDensity;
use crate::error::{Error, Result};
use crate::math::{find_root, stretch_power, ChebyshevAntiderivative};
use crate::orders::DistributionHandle;

const W_MAX: f64 = 2.0;
const BRANCH_W: f64 = 0.5;
const NODES: usize = 24;
const PANEL_TOL: f64 = 1e-11;
const MAX_DEPTH: u32 = 14;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Side {
    Plain,
    /// Singular at the panel's left end.
    Left,
    /// Singular at the panel's right end.
    Right,
}

#[derive(Debug, Clone)]
struct Panel {
    lo: f64,
    hi: f64,
    side: Side,
    k: i32,
    /// Antiderivative in `v`, accumulated away from the singular end.
    table: ChebyshevAntiderivative,
}

impl Panel {
    fn build(parent: &ParentDensity, acc: &N3Accuracy, lo: f64, hi: f64, side: Side, exponent: f64) -> Result<Self> {
        let k = match side {
            Side::Plain => 1,
            // an integer exponent comes with a logarithm; a higher power
            // leaves only v^{k-1} log v, which the refinement resolves
            _ if (exponent - exponent.round()).abs() < 1e-9 => (stretch_power(exponent) as i32).max(3),
            _ => stretch_power(exponent) as i32,
        };
        let len = hi - lo;
        let kf = k as f64;
        let integrand = |v: f64| -> Result<f64> {
            let vk1 = v.powi(k - 1);
            let off = len * vk1 * v;
            let (from_lo, to_hi) = match side {
                Side::Plain | Side::Left => (off, len - off),
                Side::Right => (len - off, off),
            };
            // an offset that collapsed to zero sits on a singular end, where the
            // stretched integrand vanishes
            if !(from_lo > 0.0 && to_hi > 0.0) {
                return Ok(0.0);
            }
            let w = if side == Side::Right { hi - to_hi } else { lo + from_lo };
            let w_minus_half = if lo == BRANCH_W {
                from_lo
            } else if hi == BRANCH_W {
                -to_hi
            } else {
                w - BRANCH_W
            };
            let two_minus_w = if hi == W_MAX { to_hi } else { W_MAX - w };
            Ok(w_density(parent, acc, w, w_minus_half, two_minus_w)? * len * kf * vk1)
        };
        let table = ChebyshevAntiderivative::build(integrand, 0.0, 1.0, NODES, PANEL_TOL, MAX_DEPTH)?;
        Ok(Self { lo, hi, side, k, table })
    }

    fn total(&self) -> f64 {
        self.table.total()
    }

    /// Mass of the panel to the left of `w`.
    fn mass_below(&self, w: f64) -> f64 {
        if w <= self.lo {
            return 0.0;
        }
        if w >= self.hi {
            return self.total();
        }
        let len = self.hi - self.lo;
        let inv_k = 1.0 / self.k as f64;
        match self.side {
            Side::Plain => self.table.eval((w - self.lo) / len),
            Side::Left => self.table.eval(((w - self.lo) / len).powf(inv_k)),
            Side::Right => self.total() - self.table.eval(((self.hi - w) / len).powf(inv_k)),
        }
    }
}

/// Density of `W = 1/T^2` at `w ∈ (0, 2)`, given the exact offsets of `w`
/// from the critical points `1/2` and `2`.
fn w_density(parent: &ParentDensity, acc: &N3Accuracy, w: f64, w_minus_half: f64, two_minus_w: f64) -> Result<f64> {
    let sw = w.sqrt();
    let t = sw.recip();
    let point = TPoint {
        t,
        // sqrt 2 - 1/sqrt w = (2w - 1) / (sqrt w (sqrt 2 sqrt w + 1))
        sqrt2_minus_t: 2.0 * w_minus_half / (sw * (SQRT_2 * sw + 1.0)),
        // 2/sqrt w - sqrt 2 = sqrt 2 (2 - w) / (sqrt w (sqrt 2 + sqrt w))
        two_t_minus_sqrt2: SQRT_2 * two_minus_w / (sw * (SQRT_2 + sw)),
    };
    Ok(t_density_split(parent, point, acc)? * 0.5 * t * t * t)
}

/// Law of `T = mean / S` for three observations from `parent`, backed by a
/// cached antiderivative table.
#[derive(Debug, Clone)]
pub struct TStatN3 {
    parent: ParentDensity,
    accuracy: N3Accuracy,
    panels: Vec<Panel>,
    total: f64,
}

impl TStatN3 {
    pub fn new(parent: ParentDensity) -> Result<Self> {
        Self::with_accuracy(parent, N3Accuracy::default())
    }

    pub fn with_accuracy(parent: ParentDensity, accuracy: N3Accuracy) -> Result<Self> {
        let e = parent.origin_exponent();
        let branch = e + 0.5;
        let edge = 2.0 * e + 1.0;
        let specs = [
            (0.0, 0.25, Side::Plain, 0.0),
            (0.25, BRANCH_W, Side::Right, branch),
            (BRANCH_W, 1.25, Side::Left, branch),
            (1.25, W_MAX, Side::Right, edge),
        ];
        let panels = specs
            .iter()
            .map(|&(lo, hi, side, ex)| Panel::build(&parent, &accuracy, lo, hi, side, ex))
            .collect::<Result<Vec<_>>>()?;
        let total = panels.iter().map(Panel::total).sum();
        Ok(Self { parent, accuracy, panels, total })
    }

    pub fn parent(&self) -> &ParentDensity {
        &self.parent
    }

    /// Integral of the tabulated density; 1 up to quadrature error.
    pub fn total_mass(&self) -> f64 {
        self.total
    }

    /// Support of `T`: `(sqrt(2)/2, ∞)`.
    pub fn support(&self) -> (f64, f64) {
        (FRAC_1_SQRT_2, f64::INFINITY)
    }

    /// Density of `T`, computed directly rather than from the table.
    pub fn density(&self, t: f64) -> Result<f64> {
        t_density_n3_with(&self.parent, t, &self.accuracy)
    }

    /// `P(W <= w)` from the table.
    fn w_cdf(&self, w: f64) -> f64 {
        self.panels.iter().map(|p| p.mass_below(w)).sum()
    }

    /// `P(T <= t)`, clamped to `[0, 1]`.
    pub fn cdf(&self, t: f64) -> f64 {
        if t.is_nan() {
            return f64::NAN;
        }
        if t <= FRAC_1_SQRT_2 {
            return 0.0;
        }
        if t.is_infinite() {
            return self.total.clamp(0.0, 1.0);
        }
        (self.total - self.w_cdf(1.0 / (t * t))).clamp(0.0, 1.0)
    }

    /// `P(alpha_hat <= a)`, with `alpha_hat = T^2`.
    pub fn alpha_hat_cdf(&self, a: f64) -> f64 {
        if a.is_nan() {
            return f64::NAN;
        }
        if a <= 0.5 {
            return 0.0;
        }
        self.cdf(a.sqrt())
    }

    /// Quantile of `W = 1/alpha_hat`, found on the table.
    fn w_quantile_upper(&self, p: f64) -> Result<f64> {
        // P(T <= t) = p  <=>  P(W <= 1/t^2) = total - p
        let target = self.total - p;
        if !(target > 0.0) {
            return Err(Error::domain(format!("probability {p} exceeds the tabulated mass {}", self.total)));
        }
        let g = |w: f64| self.w_cdf(w) - target;
        if g(W_MAX) <= 0.0 {
            return Ok(W_MAX);
        }
        let mut lo = 1e-3;
        while g(lo) > 0.0 {
            lo *= 1e-3;
            if lo < 1e-300 {
                return Err(Error::domain(format!("quantile {p} is beyond representable range")));
            }
        }
        find_root(g, lo, W_MAX, 1e-15 * lo.max(1e-3))
    }

    pub fn alpha_hat_quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::domain(format!("probability must lie in (0, 1), got {p}")));
        }
        Ok(1.0 / self.w_quantile_upper(p)?)
    }

    pub fn quantile(&self, p: f64) -> Result<f64> {
        Ok(self.alpha_hat_quantile(p)?.sqrt())
    }

    /// Number of table leaves that reached the depth limit before meeting the
    /// tolerance; zero for a fully resolved table.
    pub fn unresolved_leaves(&self) -> usize {
        self.panels.iter().map(|p| p.table.unresolved_leaves()).sum()
    }
}

fn cache() -> &'static Mutex<HashMap<u64, Arc<TStatN3>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<TStatN3>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Shared table for a unit-scale gamma(alpha) parent. Tables are built once
/// per shape and reused by every later call.
pub fn t_stat_gamma_n3(alpha: f64) -> Result<Arc<TStatN3>> {
    let parent = ParentDensity::gamma_shape(alpha)?;
    let key = alpha.to_bits();
    if let Some(hit) = cache().lock().expect("table cache").get(&key) {
        return Ok(hit.clone());
    }
    // built outside the lock; a racing duplicate build is harmless
    let table = Arc::new(TStatN3::new(parent)?);
    Ok(cache().lock().expect("table cache").entry(key).or_insert(table).clone())
}

/// `P(T <= t)` for three observations from a unit-scale gamma(alpha) parent.
pub fn t_cdf_numeric_n3(alpha: f64, t: f64) -> Result<f64> {
    if t.is_nan() {
        return Err(Error::domain("T CDF at NaN"));
    }
    if t <= FRAC_1_SQRT_2 {
        return Ok(0.0);
    }
    Ok(t_stat_gamma_n3(alpha)?.cdf(t))
}

/// Law of `T` (`n = 3`, gamma(alpha) parent) from the cached table.
pub fn t_n3_numeric_handle(alpha: f64) -> Result<DistributionHandle> {
    let table = t_stat_gamma_n3(alpha)?;
    let (c, q, d) = (table.clone(), table.clone(), table);
    Ok(DistributionHandle::new(
        format!("T[n=3, alpha={alpha}]"),
        (FRAC_1_SQRT_2, f64::INFINITY),
        move |t| c.cdf(t),
        move |p| q.quantile(p).unwrap_or(f64::NAN),
    )
    .with_density(move |t| d.density(t).unwrap_or(f64::NAN)))
}

/// Law of `alpha_hat = T^2` (`n = 3`, gamma(alpha) parent).
pub fn alpha_hat_n3_handle(alpha: f64) -> Result<DistributionHandle> {
    let table = t_stat_gamma_n3(alpha)?;
    let (c, q) = (table.clone(), table);
    Ok(DistributionHandle::new(
        format!("alpha_hat[n=3, alpha={alpha}]"),
        (0.5, f64::INFINITY),
        move |a| c.alpha_hat_cdf(a),
        move |p| q.alpha_hat_quantile(p).unwrap_or(f64::NAN),
    ))
}
