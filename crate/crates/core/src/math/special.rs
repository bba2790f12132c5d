//! Gamma and beta special functions.

use std::f64::consts::PI;

use crate::error::{Error, Result};

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_741_78;

/// Natural log of the gamma function for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("log_gamma requires x > 0, got {x}")));
    }
    Ok(ln_gamma_pos(x))
}

fn ln_gamma_pos(x: f64) -> f64 {
    if x < 0.5 {
        // reflection: Γ(x)Γ(1-x) = π / sin(πx)
        return (PI / (PI * x).sin()).ln() - ln_gamma_pos(1.0 - x);
    }
    let z = x - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + acc.ln()
}

/// `ln B(a, b)`.
pub fn ln_beta(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::domain(format!("beta requires a, b > 0, got ({a}, {b})")));
    }
    Ok(ln_gamma_pos(a) + ln_gamma_pos(b) - ln_gamma_pos(a + b))
}

/// The complete beta function `B(a, b)`.
pub fn beta_fn(a: f64, b: f64) -> Result<f64> {
    ln_beta(a, b).map(f64::exp)
}

/// Regularized incomplete beta function `I_x(a, b)`.
pub fn reg_inc_beta(a: f64, b: f64, x: f64) -> Result<f64> {
    inc_beta_pair(a, b, x).map(|(p, _)| p)
}

/// Returns `(I_x(a, b), 1 - I_x(a, b))`, each computed without cancellation.
pub fn inc_beta_pair(a: f64, b: f64, x: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("incomplete beta requires x in [0, 1], got {x}")));
    }
    inc_beta_xy(a, b, x, 1.0 - x)
}

/// Like [`inc_beta_pair`] but with the complement `y = 1 - x` supplied by the
/// caller, for arguments where `1 - x` would lose precision.
pub(crate) fn inc_beta_xy(a: f64, b: f64, x: f64, y: f64) -> Result<(f64, f64)> {
    let lbeta = ln_beta(a, b)?;
    if x <= 0.0 {
        return Ok((0.0, 1.0));
    }
    if y <= 0.0 {
        return Ok((1.0, 0.0));
    }
    let ln_front = a * x.ln() + b * y.ln() - lbeta;
    let front = ln_front.exp();
    if x < a / (a + b) {
        let p = (front * beta_cf(a, b, x) / a).clamp(0.0, 1.0);
        Ok((p, 1.0 - p))
    } else {
        let q = (front * beta_cf(b, a, y) / b).clamp(0.0, 1.0);
        Ok((1.0 - q, q))
    }
}

/// Continued fraction for the incomplete beta function, modified Lentz method.
fn beta_cf(a: f64, b: f64, x: f64) -> f64 {
    const MAX_ITER: usize = 20_000;
    const EPS: f64 = 1e-16;
    const TINY: f64 = 1e-300;

    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;

        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;

        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_gamma_small_integers_and_half() {
        assert!(log_gamma(1.0).unwrap().abs() < 1e-15);
        assert!(log_gamma(2.0).unwrap().abs() < 1e-15);
        assert!((log_gamma(5.0).unwrap() - 24f64.ln()).abs() < 1e-14);
        assert!((log_gamma(0.5).unwrap() - PI.sqrt().ln()).abs() < 1e-14);
    }

    #[test]
    fn log_gamma_rejects_nonpositive() {
        assert!(matches!(log_gamma(0.0), Err(Error::Domain(_))));
        assert!(matches!(log_gamma(-1.5), Err(Error::Domain(_))));
        assert!(log_gamma(f64::NAN).is_err());
    }

    #[test]
    fn log_gamma_recurrence() {
        for x in [0.5, 1.3, 7.7] {
            let ratio = (log_gamma(x + 1.0).unwrap() - log_gamma(x).unwrap()).exp();
            assert!((ratio - x).abs() <= 1e-12 * x, "x = {x}: {ratio}");
        }
    }

    #[test]
    fn beta_values() {
        assert!((beta_fn(1.0, 1.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((beta_fn(0.5, 1.0).unwrap() - 2.0).abs() < 1e-14);
        assert!((beta_fn(0.5, 0.5).unwrap() - PI).abs() < 1e-13);
        assert!(beta_fn(0.0, 1.0).is_err());
        assert!(beta_fn(1.0, -2.0).is_err());
    }

    #[test]
    fn inc_beta_closed_forms() {
        assert!((reg_inc_beta(0.5, 1.0, 0.25).unwrap() - 0.5).abs() < 1e-14);
        assert!((reg_inc_beta(1.0, 1.0, 0.3).unwrap() - 0.3).abs() < 1e-14);
        assert_eq!(reg_inc_beta(2.5, 0.7, 1.0).unwrap(), 1.0);
        assert_eq!(reg_inc_beta(2.5, 0.7, 0.0).unwrap(), 0.0);
        // I_x(1/2, 2) = (3/2)sqrt(x) - (1/2)x^{3/2}
        for x in [0.01f64, 0.2, 0.5, 0.9, 0.999] {
            let exact = 1.5 * x.sqrt() - 0.5 * x.powf(1.5);
            assert!((reg_inc_beta(0.5, 2.0, x).unwrap() - exact).abs() < 1e-13);
        }
    }

    #[test]
    fn inc_beta_domain() {
        assert!(reg_inc_beta(1.0, 1.0, -0.1).is_err());
        assert!(reg_inc_beta(1.0, 1.0, 1.1).is_err());
        assert!(reg_inc_beta(0.0, 1.0, 0.5).is_err());
    }

    #[test]
    fn inc_beta_pair_sums_to_one() {
        for &(a, b, x) in &[(0.5, 3.0, 0.2), (7.0, 0.5, 0.95), (0.5, 0.3, 0.5)] {
            let (p, q) = inc_beta_pair(a, b, x).unwrap();
            assert!((p + q - 1.0).abs() < 1e-15);
        }
    }
}
