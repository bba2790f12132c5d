//! Grid-based checks of the usual stochastic, dispersive and star orders.
//!
//! - `X <=st Y`   iff `F_X(x) >= F_Y(x)` for all `x`.
//! - `X <=disp Y` iff `Q_Y(p) - Q_X(p)` is nondecreasing in `p`.
//! - `X <=* Y`    iff `Q_Y(F_X(x)) / x` is nondecreasing in `x > 0`,
//!   equivalently `log X <=disp log Y`.
//!
//! A "holds" verdict only means no violation was seen on the grid.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// CDF, quantile and (optionally) density of a univariate law.
#[derive(Clone)]
pub struct DistributionHandle {
    cdf: RealFn,
    quantile: RealFn,
    density: Option<RealFn>,
    support: (f64, f64),
    label: String,
}

impl fmt::Debug for DistributionHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DistributionHandle")
            .field("label", &self.label)
            .field("support", &self.support)
            .finish_non_exhaustive()
    }
}

impl DistributionHandle {
    pub fn new<C, Q>(label: impl Into<String>, support: (f64, f64), cdf: C, quantile: Q) -> Self
    where
        C: Fn(f64) -> f64 + Send + Sync + 'static,
        Q: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self { cdf: Arc::new(cdf), quantile: Arc::new(quantile), density: None, support, label: label.into() }
    }

    pub fn with_density<D>(mut self, density: D) -> Self
    where
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.density = Some(Arc::new(density));
        self
    }

    pub fn cdf(&self, x: f64) -> f64 {
        (self.cdf)(x)
    }

    pub fn quantile(&self, p: f64) -> f64 {
        (self.quantile)(p)
    }

    pub fn density(&self, x: f64) -> Option<f64> {
        self.density.as_ref().map(|d| d(x))
    }

    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// The law of `log X`; requires a positive support.
    pub fn log_transform(&self) -> Result<Self> {
        if !(self.support.0 >= 0.0) {
            return Err(Error::domain(format!("{} does not have a positive support", self.label)));
        }
        let (cdf, quantile) = (self.cdf.clone(), self.quantile.clone());
        let mut out = Self::new(
            format!("log({})", self.label),
            (self.support.0.ln(), self.support.1.ln()),
            move |y: f64| cdf(y.exp()),
            move |p| quantile(p).ln(),
        );
        if let Some(d) = self.density.clone() {
            out = out.with_density(move |y: f64| d(y.exp()) * y.exp());
        }
        Ok(out)
    }

    /// The law of `scale * X + shift` for `scale > 0`.
    pub fn affine(&self, scale: f64, shift: f64) -> Self {
        let (cdf, quantile) = (self.cdf.clone(), self.quantile.clone());
        let mut out = Self::new(
            format!("{scale}*{}+{shift}", self.label),
            (scale * self.support.0 + shift, scale * self.support.1 + shift),
            move |x| cdf((x - shift) / scale),
            move |p| scale * quantile(p) + shift,
        );
        if let Some(d) = self.density.clone() {
            out = out.with_density(move |x| d((x - shift) / scale) / scale);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Order {
    St,
    Disp,
    Star,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Violated,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Violation {
    pub location: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderCheckReport {
    pub order: Order,
    pub verdict: Verdict,
    pub grid_size: usize,
    pub violations: Vec<Violation>,
    pub worst_margin: f64,
    pub tolerance: f64,
}

impl OrderCheckReport {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

/// A decrease (or gap) counts as a violation only if it exceeds `abs` and
/// also `rel` times the local magnitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CheckTolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Default for CheckTolerance {
    fn default() -> Self {
        Self { abs: 1e-7, rel: 1e-6 }
    }
}

impl CheckTolerance {
    fn exceeded(&self, gap: f64, scale: f64) -> bool {
        // NaN gaps are violations
        !(gap <= self.abs || gap <= self.rel * scale.abs())
    }
}

fn report(
    order: Order,
    grid_size: usize,
    violations: Vec<Violation>,
    worst_margin: f64,
    tol: CheckTolerance,
) -> OrderCheckReport {
    let verdict = if violations.is_empty() { Verdict::Holds } else { Verdict::Violated };
    OrderCheckReport { order, verdict, grid_size, violations, worst_margin, tolerance: tol.abs }
}

/// Checks that `values[i]` never drops below the running maximum of the
/// earlier values by more than the tolerance.
fn nondecreasing_report(
    order: Order,
    locations: &[f64],
    values: &[f64],
    scales: &[f64],
    tol: CheckTolerance,
) -> OrderCheckReport {
    let mut violations = Vec::new();
    let mut worst = 0.0f64;
    let mut running_max = f64::NEG_INFINITY;
    for ((&loc, &v), &scale) in locations.iter().zip(values).zip(scales) {
        if running_max.is_finite() {
            let margin = v - running_max;
            worst = if margin.is_nan() { f64::NAN } else { worst.min(margin) };
            if tol.exceeded(-margin, scale) {
                violations.push(Violation { location: loc, lhs: v, rhs: running_max, margin });
            }
        }
        if v > running_max {
            running_max = v;
        }
    }
    report(order, locations.len(), violations, worst, tol)
}

pub fn check_st(x: &DistributionHandle, y: &DistributionHandle, grid: &[f64], tol: CheckTolerance) -> OrderCheckReport {
    let mut violations = Vec::new();
    let mut worst = f64::INFINITY;
    for &t in grid {
        let (fx, fy) = (x.cdf(t), y.cdf(t));
        let margin = fx - fy;
        worst = worst.min(margin);
        if tol.exceeded(-margin, fx.max(fy)) {
            violations.push(Violation { location: t, lhs: fx, rhs: fy, margin });
        }
    }
    if grid.is_empty() {
        worst = 0.0;
    }
    report(Order::St, grid.len(), violations, worst, tol)
}

pub fn check_disp(
    x: &DistributionHandle,
    y: &DistributionHandle,
    pgrid: &[f64],
    tol: CheckTolerance,
) -> OrderCheckReport {
    let mut diffs = Vec::with_capacity(pgrid.len());
    let mut scales = Vec::with_capacity(pgrid.len());
    for &p in pgrid {
        let (qx, qy) = (x.quantile(p), y.quantile(p));
        diffs.push(qy - qx);
        scales.push(qx.abs().max(qy.abs()));
    }
    nondecreasing_report(Order::Disp, pgrid, &diffs, &scales, tol)
}

/// Values of `Q_Y(F_X(x)) / x` along `xgrid`.
pub fn star_ratios(x: &DistributionHandle, y: &DistributionHandle, xgrid: &[f64]) -> Vec<f64> {
    xgrid.iter().map(|&t| y.quantile(x.cdf(t)) / t).collect()
}

pub fn check_star(
    x: &DistributionHandle,
    y: &DistributionHandle,
    xgrid: &[f64],
    tol: CheckTolerance,
) -> OrderCheckReport {
    let ratios = star_ratios(x, y, xgrid);
    nondecreasing_report(Order::Star, xgrid, &ratios, &ratios, tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignChanges {
    pub count: usize,
    /// Sign of each run, in order.
    pub pattern: Vec<Sign>,
}

impl fmt::Display for SignChanges {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.pattern.iter().map(Sign::to_string).collect();
        write!(f, "S- = {} ({})", self.count, s.join(","))
    }
}

/// Number of sign changes `S-` after discarding entries with `|v| <= dead_band`.
pub fn sign_changes(values: &[f64], dead_band: f64) -> SignChanges {
    let mut pattern: Vec<Sign> = Vec::new();
    for &v in values {
        if !(v.abs() > dead_band) {
            continue;
        }
        let s = if v > 0.0 { Sign::Plus } else { Sign::Minus };
        if pattern.last() != Some(&s) {
            pattern.push(s);
        }
    }
    SignChanges { count: pattern.len().saturating_sub(1), pattern }
}

/// Runs `check_star(X, Y)` on `xgrid = Q_X(pgrid)` and `check_disp(log X, log Y)`
/// on `pgrid`; the two must agree.
pub fn star_disp_log_bridge(
    x: &DistributionHandle,
    y: &DistributionHandle,
    pgrid: &[f64],
    tol: CheckTolerance,
) -> Result<(OrderCheckReport, OrderCheckReport)> {
    let xgrid: Vec<f64> = pgrid.iter().map(|&p| x.quantile(p)).collect();
    let star = check_star(x, y, &xgrid, tol);
    let disp = check_disp(&x.log_transform()?, &y.log_transform()?, pgrid, tol);
    if star.verdict != disp.verdict {
        return Err(Error::Inconsistent(format!(
            "star verdict {:?} (worst margin {:e}) vs log-dispersive verdict {:?} (worst margin {:e}) for {} vs {}",
            star.verdict,
            star.worst_margin,
            disp.verdict,
            disp.worst_margin,
            x.label(),
            y.label()
        )));
    }
    Ok((star, disp))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImplicationReport {
    pub st: OrderCheckReport,
    pub star: OrderCheckReport,
    pub disp: OrderCheckReport,
    /// `false` only when st and star hold but disp does not.
    pub implication_holds: bool,
}

/// For nonnegative laws, `X <=st Y` and `X <=* Y` together imply `X <=disp Y`.
pub fn st_plus_star_implies_disp_check(
    x: &DistributionHandle,
    y: &DistributionHandle,
    xgrid: &[f64],
    pgrid: &[f64],
    tol: CheckTolerance,
) -> Result<ImplicationReport> {
    if x.support().0 < 0.0 || y.support().0 < 0.0 {
        return Err(Error::domain("the st + star => disp implication needs nonnegative supports"));
    }
    let st = check_st(x, y, xgrid, tol);
    let star_grid: Vec<f64> = pgrid.iter().map(|&p| x.quantile(p)).collect();
    let star = check_star(x, y, &star_grid, tol);
    let disp = check_disp(x, y, pgrid, tol);
    let implication_holds = !(st.holds() && star.holds()) || disp.holds();
    Ok(ImplicationReport { st, star, disp, implication_holds })
}

/// `n` points spaced evenly in `log` between `lo` and `hi`, both included.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1).max(1) as f64).exp()).collect()
}

/// `n` evenly spaced points between `lo` and `hi`, both included.
pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1).max(1) as f64).collect()
}

/// Probability grid avoiding the ill-conditioned tails: `(0.001, 0.999)`, or
/// `(0.001, 0.9999)` for laws with bounded support.
pub fn probability_grid(n: usize, bounded_support: bool) -> Vec<f64> {
    linear_grid(0.001, if bounded_support { 0.9999 } else { 0.999 }, n)
}
