//! Piecewise Chebyshev tabulation of an antiderivative.
//!
//! The integrand is sampled at Chebyshev points of the first kind (endpoints
//! are never evaluated), and each leaf interval is bisected until the
//! trailing series coefficients fall below the leaf's share of the absolute
//! tolerance. Once built, the running integral can be evaluated anywhere in
//! `O(log leaves + nodes)` without touching the integrand again.

use std::f64::consts::PI;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
struct Leaf {
    lo: f64,
    hi: f64,
    /// Integral from the table's left end to `lo`.
    base: f64,
    /// Antiderivative coefficients on `[-1, 1]`, zero at `-1`.
    coeffs: Vec<f64>,
}

impl Leaf {
    fn eval(&self, x: f64) -> f64 {
        let y = ((2.0 * x - self.lo - self.hi) / (self.hi - self.lo)).clamp(-1.0, 1.0);
        self.base + clenshaw(&self.coeffs, y)
    }
}

#[derive(Debug, Clone)]
pub struct ChebyshevAntiderivative {
    leaves: Vec<Leaf>,
    lo: f64,
    hi: f64,
    total: f64,
    unresolved: usize,
}

fn clenshaw(c: &[f64], y: f64) -> f64 {
    let (mut b1, mut b2) = (0.0, 0.0);
    for &ck in c.iter().skip(1).rev() {
        let b0 = 2.0 * y * b1 - b2 + ck;
        b2 = b1;
        b1 = b0;
    }
    c[0] + y * b1 - b2
}

struct Builder<'a, F> {
    f: &'a mut F,
    nodes: usize,
    abs_tol: f64,
    full_width: f64,
    max_depth: u32,
    leaves: Vec<Leaf>,
    unresolved: usize,
}

impl<F> Builder<'_, F>
where
    F: FnMut(f64) -> Result<f64>,
{
    /// Chebyshev coefficients `a_k` of the integrand on `[lo, hi]`, with the
    /// full (not halved) constant term.
    fn fit(&mut self, lo: f64, hi: f64) -> Result<Vec<f64>> {
        let n = self.nodes;
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        let mut values = Vec::with_capacity(n);
        for j in 0..n {
            let theta = PI * (j as f64 + 0.5) / n as f64;
            let x = mid + half * theta.cos();
            let g = (self.f)(x)?;
            if !g.is_finite() {
                return Err(Error::NonFinite { x });
            }
            values.push(g);
        }
        let mut coeffs = vec![0.0; n];
        for (k, ck) in coeffs.iter_mut().enumerate() {
            let s: f64 =
                values.iter().enumerate().map(|(j, g)| g * (PI * k as f64 * (j as f64 + 0.5) / n as f64).cos()).sum();
            *ck = if k == 0 { s / n as f64 } else { 2.0 * s / n as f64 };
        }
        Ok(coeffs)
    }

    fn refine(&mut self, lo: f64, hi: f64, depth: u32) -> Result<()> {
        let a = self.fit(lo, hi)?;
        let n = a.len();
        let half = 0.5 * (hi - lo);
        let tail: f64 = a[n - 3..].iter().map(|c| c.abs()).sum::<f64>() * half;
        let budget = self.abs_tol * (hi - lo) / self.full_width;
        let mid = 0.5 * (lo + hi);
        let splittable = depth < self.max_depth && mid > lo && mid < hi;
        if tail > budget && splittable {
            self.refine(lo, mid, depth + 1)?;
            return self.refine(mid, hi, depth + 1);
        }
        if tail > budget {
            self.unresolved += 1;
        }

        // integrate the series; c_0 in the halved convention is 2 a_0
        let c = |k: usize| -> f64 {
            match k {
                0 => 2.0 * a[0],
                k if k < n => a[k],
                _ => 0.0,
            }
        };
        let mut coeffs = vec![0.0; n + 1];
        for (k, ck) in coeffs.iter_mut().enumerate().skip(1) {
            *ck = half * (c(k - 1) - c(k + 1)) / (2.0 * k as f64);
        }
        let at_minus_one: f64 =
            coeffs.iter().enumerate().skip(1).map(|(k, ck)| if k % 2 == 0 { *ck } else { -*ck }).sum();
        coeffs[0] = -at_minus_one;
        self.leaves.push(Leaf { lo, hi, base: 0.0, coeffs });
        Ok(())
    }
}

impl ChebyshevAntiderivative {
    /// Tabulates `x -> ∫_lo^x f` on `[lo, hi]`.
    pub fn build<F>(mut f: F, lo: f64, hi: f64, nodes: usize, abs_tol: f64, max_depth: u32) -> Result<Self>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        if !(lo < hi) || nodes < 4 || !(abs_tol > 0.0) {
            return Err(Error::domain("invalid Chebyshev table parameters"));
        }
        let mut builder =
            Builder { f: &mut f, nodes, abs_tol, full_width: hi - lo, max_depth, leaves: Vec::new(), unresolved: 0 };
        builder.refine(lo, hi, 0)?;
        let unresolved = builder.unresolved;
        let mut leaves = builder.leaves;
        let mut base = 0.0;
        for leaf in leaves.iter_mut() {
            leaf.base = base;
            base = leaf.eval(leaf.hi);
        }
        Ok(Self { leaves, lo, hi, total: base, unresolved })
    }

    /// `∫_lo^x f`, clamped to the table range.
    pub fn eval(&self, x: f64) -> f64 {
        if x <= self.lo {
            return 0.0;
        }
        if x >= self.hi {
            return self.total;
        }
        let i = self.leaves.partition_point(|l| l.hi < x).min(self.leaves.len() - 1);
        self.leaves[i].eval(x)
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn range(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves.len()
    }

    /// Leaves accepted at the depth limit without meeting the tolerance.
    pub fn unresolved_leaves(&self) -> usize {
        self.unresolved
    }
}
