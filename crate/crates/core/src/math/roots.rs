//! Bracketing root finder, quadratic solver and golden-section search.

use crate::error::{Error, Result};

/// Bisection on `[lo, hi]` until the bracket is narrower than `tol` or no
/// floating-point midpoint remains. Returns the midpoint of the final bracket.
pub fn find_root<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    if !(tol > 0.0) || !(lo <= hi) {
        return Err(Error::domain(format!("find_root needs lo <= hi and tol > 0 (got [{lo}, {hi}], {tol})")));
    }
    let (mut a, mut b) = (lo, hi);
    let (fa, fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa.signum() * fb.signum() < 0.0) {
        return Err(Error::Bracket { lo, hi, f_lo: fa, f_hi: fb });
    }
    let a_negative = fa < 0.0;
    while b - a > tol {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if (fm < 0.0) == a_negative {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Real roots of `a2 x^2 + a1 x + a0`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticRoots {
    /// Ascending; a double root appears once.
    pub roots: Vec<f64>,
    /// Set when every coefficient is zero.
    pub degenerate: bool,
}

pub fn solve_quadratic(a2: f64, a1: f64, a0: f64) -> QuadraticRoots {
    let none = |degenerate| QuadraticRoots { roots: Vec::new(), degenerate };
    if a2 == 0.0 {
        if a1 == 0.0 {
            return none(a0 == 0.0);
        }
        return QuadraticRoots { roots: vec![-a0 / a1], degenerate: false };
    }
    let disc = a1 * a1 - 4.0 * a2 * a0;
    if disc < 0.0 {
        return none(false);
    }
    if disc == 0.0 {
        return QuadraticRoots { roots: vec![-a1 / (2.0 * a2)], degenerate: false };
    }
    // q = -(a1 + sign(a1) sqrt(disc)) / 2 avoids cancellation
    let sign = if a1 >= 0.0 { 1.0 } else { -1.0 };
    let q = -0.5 * (a1 + sign * disc.sqrt());
    let r1 = q / a2;
    let r2 = if q != 0.0 { a0 / q } else { -r1 };
    let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
    QuadraticRoots { roots: vec![lo, hi], degenerate: false }
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for a maximum of a unimodal `f` on `[lo, hi]`.
/// Returns `(argmax, max)`.
pub fn golden_section_max<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a) > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Golden-section search for a minimum. Returns `(argmin, min)`.
pub fn golden_section_min<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let (x, v) = golden_section_max(|x| -f(x), lo, hi, tol);
    (x, -v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, SQRT_2};

    #[test]
    fn bisection_examples() {
        let r = find_root(|x| x * x - 2.0, 1.0, 2.0, 1e-12).unwrap();
        assert!((r - SQRT_2).abs() < 1e-12);
        assert_eq!(find_root(|x| x, -1.0, 1.0, 1e-12).unwrap(), 0.0);
        let r = find_root(f64::cos, 1.0, 2.0, 1e-12).unwrap();
        assert!((r - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn bisection_requires_bracket() {
        assert!(matches!(find_root(|x| x * x + 1.0, -1.0, 1.0, 1e-9), Err(Error::Bracket { .. })));
    }

    #[test]
    fn bisection_is_deterministic() {
        let f = |x: f64| x.exp() - 3.0;
        let a = find_root(f, 0.0, 5.0, 1e-13).unwrap();
        let b = find_root(f, 0.0, 5.0, 1e-13).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn quadratic_examples() {
        assert_eq!(solve_quadratic(1.0, 0.0, -4.0).roots, vec![-2.0, 2.0]);
        let r = solve_quadratic(3.0, -1.0, -4.0).roots;
        assert_eq!(r.len(), 2);
        assert!((r[0] + 1.0).abs() < 1e-15 && (r[1] - 4.0 / 3.0).abs() < 1e-15);
        assert!(solve_quadratic(1.0, 0.0, 1.0).roots.is_empty());
        assert_eq!(solve_quadratic(0.0, 2.0, -1.0).roots, vec![0.5]);
        let d = solve_quadratic(0.0, 0.0, 0.0);
        assert!(d.roots.is_empty() && d.degenerate);
        assert!(!solve_quadratic(0.0, 0.0, 1.0).degenerate);
        assert_eq!(solve_quadratic(1.0, -2.0, 1.0).roots, vec![1.0]);
        assert_eq!(solve_quadratic(3.0, 3.0, 0.0).roots, vec![-1.0, 0.0]);
    }

    #[test]
    fn golden_section() {
        let (x, v) = golden_section_max(|x| -(x - 0.3) * (x - 0.3) + 1.0, 0.0, 1.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-8 && (v - 1.0).abs() < 1e-12);
        let (x, _) = golden_section_min(|x: f64| (x - 0.85).abs(), 0.8, 0.9, 1e-10);
        assert!((x - 0.85).abs() < 1e-8);
    }
}
