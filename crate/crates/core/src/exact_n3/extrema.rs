//! Interior extrema of the quantile difference between two `n = 3` laws.
//!
//! A dispersive ordering `X <=disp Y` requires `Q_Y(p) - Q_X(p)` to be
//! nondecreasing. A local maximum followed by a local minimum is a witness
//! that the ordering fails.

use serde::Serialize;

use super::tstat::{t_stat_gamma_n3, TStatN3};
use crate::error::{Error, Result};
use crate::math::{golden_section_max, golden_section_min};

/// Which statistic's quantiles are compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Statistic {
    AlphaHat,
    T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuantileExtrema {
    pub statistic: Statistic,
    pub alpha1: f64,
    pub alpha2: f64,
    pub p_max: f64,
    pub diff_at_max: f64,
    pub p_min: f64,
    pub diff_at_min: f64,
}

const SCAN_LO: f64 = 0.4;
const SCAN_HI: f64 = 0.95;
const SCAN_POINTS: usize = 400;

/// First local maximum of `p -> Q_2(p) - Q_1(p)` on `(0.4, 0.95)` and the
/// first local minimum after it, where `Q_i` are the `alpha_hat` quantiles
/// for unit-scale gamma(alpha_i) parents.
pub fn remark1_extrema(alpha1: f64, alpha2: f64) -> Result<QuantileExtrema> {
    quantile_difference_extrema(alpha1, alpha2, Statistic::AlphaHat)
}

pub fn quantile_difference_extrema(alpha1: f64, alpha2: f64, statistic: Statistic) -> Result<QuantileExtrema> {
    let (x, y) = (t_stat_gamma_n3(alpha1)?, t_stat_gamma_n3(alpha2)?);
    let quantile = |law: &TStatN3, p: f64| match statistic {
        Statistic::AlphaHat => law.alpha_hat_quantile(p),
        Statistic::T => law.quantile(p),
    };
    let diff = |p: f64| -> Result<f64> { Ok(quantile(&y, p)? - quantile(&x, p)?) };

    let step = (SCAN_HI - SCAN_LO) / (SCAN_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..SCAN_POINTS).map(|i| SCAN_LO + step * i as f64).collect();
    let values = grid.iter().map(|&p| diff(p)).collect::<Result<Vec<_>>>()?;

    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale <= 1e-12 {
        return Err(Error::ExtremaNotFound("the quantile difference vanishes on the scan".into()));
    }
    let flat = 1e-12 * scale;
    let i_max = (1..SCAN_POINTS - 1)
        .find(|&i| values[i] > values[i - 1] + flat && values[i] >= values[i + 1])
        .ok_or_else(|| Error::ExtremaNotFound("no interior local maximum on the scan".into()))?;
    let i_min = (i_max + 1..SCAN_POINTS - 1)
        .find(|&i| values[i] < values[i - 1] - flat && values[i] <= values[i + 1])
        .ok_or_else(|| Error::ExtremaNotFound("no interior local minimum after the maximum".into()))?;

    let d = |p: f64| diff(p).unwrap_or(f64::NAN);
    let (p_max, diff_at_max) = golden_section_max(d, grid[i_max - 1], grid[i_max + 1], 1e-9);
    let (p_min, diff_at_min) = golden_section_min(d, grid[i_min - 1], grid[i_min + 1], 1e-9);
    if !diff_at_max.is_finite() || !diff_at_min.is_finite() {
        return Err(Error::NonFinite { x: if diff_at_max.is_finite() { p_min } else { p_max } });
    }
    Ok(QuantileExtrema { statistic, alpha1, alpha2, p_max, diff_at_max, p_min, diff_at_min })
}
