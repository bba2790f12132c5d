//! Reproducible simulation of the estimator's sampling law, and
//! Kolmogorov-Smirnov distances against exact CDFs or other samples.
//!
//! Replications are split into fixed-size chunks, and chunk `i` draws from
//! ChaCha stream `i` of the seed, so results do not depend on how many
//! workers process the chunks.

use std::fmt::Write as _;
use std::io::{self, Write};

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gamma::{gamma_sampler, moment_estimates, stream_rng, GammaParams};

const CHUNK: usize = 1 << 16;
/// Stream offset for a second, independent family of draws under the same seed.
const SECOND_FAMILY: u64 = 1 << 32;

/// Sorted sample with its provenance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalDistribution {
    samples: Vec<f64>,
    seed: u64,
    descriptor: String,
    /// Replications redrawn because the sample variance was exactly zero.
    redraws: u64,
}

impl EmpiricalDistribution {
    /// Sorts `samples`; NaNs are rejected.
    pub fn new(mut samples: Vec<f64>, seed: u64, descriptor: impl Into<String>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::domain("an empirical distribution needs at least one value"));
        }
        if samples.iter().any(|x| x.is_nan()) {
            return Err(Error::domain("empirical samples contain NaN"));
        }
        samples.sort_by(f64::total_cmp);
        Ok(Self { samples, seed, descriptor: descriptor.into(), redraws: 0 })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn count(&self) -> usize {
        self.samples.len()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    pub fn redraws(&self) -> u64 {
        self.redraws
    }

    /// Fraction of samples `<= x`.
    pub fn ecdf(&self, x: f64) -> f64 {
        self.samples.partition_point(|&s| s <= x) as f64 / self.count() as f64
    }

    /// Smallest sample whose ECDF reaches `p`.
    pub fn quantile(&self, p: f64) -> f64 {
        let n = self.count();
        let i = ((p * n as f64).ceil() as usize).clamp(1, n);
        self.samples[i - 1]
    }

    pub fn map<F: Fn(f64) -> f64>(&self, f: F, descriptor: impl Into<String>) -> Result<Self> {
        let mut out = Self::new(self.samples.iter().map(|&x| f(x)).collect(), self.seed, descriptor)?;
        out.redraws = self.redraws;
        Ok(out)
    }

    /// Single-column CSV: one `#` comment line with the provenance, a `value`
    /// header, then one value per line at 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "# descriptor={},seed={},reps={}", self.descriptor, self.seed, self.count())?;
        writeln!(out, "value")?;
        let mut line = String::with_capacity(32);
        for x in &self.samples {
            line.clear();
            let _ = write!(line, "{x:.16e}");
            writeln!(out, "{line}")?;
        }
        Ok(())
    }
}

/// Runs `reps` replications of `one` in deterministic chunks. `one` returns
/// `None` for a degenerate draw that must be repeated.
fn replicate<F>(reps: usize, seed: u64, first_stream: u64, one: F) -> (Vec<f64>, u64)
where
    F: Fn(&mut rand_chacha::ChaCha8Rng) -> Option<f64> + Sync,
{
    let chunks: Vec<(Vec<f64>, u64)> = (0..reps.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let len = CHUNK.min(reps - c * CHUNK);
            let mut rng = stream_rng(seed, first_stream + c as u64);
            let mut values = Vec::with_capacity(len);
            let mut redraws = 0;
            while values.len() < len {
                match one(&mut rng) {
                    Some(v) => values.push(v),
                    None => redraws += 1,
                }
            }
            (values, redraws)
        })
        .collect();
    let redraws = chunks.iter().map(|c| c.1).sum();
    (chunks.into_iter().flat_map(|c| c.0).collect(), redraws)
}

/// Unsorted replicates of `alpha_hat`, in replication order.
pub fn alpha_hat_replicates(p: &GammaParams, n: usize, reps: usize, seed: u64) -> Result<(Vec<f64>, u64)> {
    if n < 2 {
        return Err(Error::domain(format!("the estimator needs n >= 2, got {n}")));
    }
    if reps == 0 {
        return Err(Error::domain("reps must be positive"));
    }
    let sampler = gamma_sampler(p);
    Ok(replicate(reps, seed, 0, |rng| {
        let mut xs = [0.0; 16];
        let mut heap;
        let buf: &mut [f64] = if n <= xs.len() {
            &mut xs[..n]
        } else {
            heap = vec![0.0; n];
            &mut heap
        };
        for x in buf.iter_mut() {
            *x = sampler.sample(rng);
        }
        moment_estimates(buf).ok().map(|s| s.alpha_hat)
    }))
}

pub fn simulate_alpha_hat(alpha: f64, lambda: f64, n: usize, reps: usize, seed: u64) -> Result<EmpiricalDistribution> {
    let p = GammaParams::new(alpha, lambda)?;
    let (values, redraws) = alpha_hat_replicates(&p, n, reps, seed)?;
    let mut emp = EmpiricalDistribution::new(values, seed, format!("alpha_hat[n={n},alpha={alpha},lambda={lambda}]"))?;
    emp.redraws = redraws;
    Ok(emp)
}

/// `T = mean / S` for three observations from a unit-scale gamma(alpha).
/// Uses the same streams as [`simulate_alpha_hat`], so `T^2` reproduces its
/// replicates.
pub fn simulate_t_n3(alpha: f64, reps: usize, seed: u64) -> Result<EmpiricalDistribution> {
    let p = GammaParams::shape(alpha)?;
    let (values, redraws) = alpha_hat_replicates(&p, 3, reps, seed)?;
    let mut emp =
        EmpiricalDistribution::new(values.into_iter().map(f64::sqrt).collect(), seed, format!("T[n=3,alpha={alpha}]"))?;
    emp.redraws = redraws;
    Ok(emp)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KSResult {
    pub statistic: f64,
    pub count_effective: f64,
    /// Asymptotic 99% critical value `1.628 / sqrt(count_effective)`.
    pub threshold_99: f64,
}

impl KSResult {
    fn new(statistic: f64, count_effective: f64) -> Self {
        Self { statistic, count_effective, threshold_99: 1.628 / count_effective.sqrt() }
    }

    pub fn below_threshold(&self) -> bool {
        self.statistic < self.threshold_99
    }
}

/// `sup |ECDF - F|`, checking both one-sided gaps at every sample point.
/// The lower gap uses the left limit `F(x-)` so a CDF with atoms at the
/// sample points (such as the sample's own ECDF) gives zero.
pub fn ks_one_sample<F>(emp: &EmpiricalDistribution, cdf: F) -> KSResult
where
    F: Fn(f64) -> f64,
{
    let xs = emp.samples();
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < xs.len() {
        let x = xs[i];
        let mut j = i;
        while j < xs.len() && xs[j] == x {
            j += 1;
        }
        let below = i as f64 / n;
        let at = j as f64 / n;
        d = d.max((at - cdf(x)).abs()).max((cdf(x.next_down()) - below).abs());
        i = j;
    }
    KSResult::new(d.min(1.0), n)
}

pub fn ks_two_sample(a: &EmpiricalDistribution, b: &EmpiricalDistribution) -> KSResult {
    let (xa, xb) = (a.samples(), b.samples());
    let (na, nb) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < xa.len() && j < xb.len() {
        let x = xa[i].min(xb[j]);
        while i < xa.len() && xa[i] <= x {
            i += 1;
        }
        while j < xb.len() && xb[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    KSResult::new(d, na * nb / (na + nb))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub alpha: f64,
    pub reps: usize,
    pub ks: KSResult,
    pub accepted: bool,
}

/// Compares `(X1^2 + X2^2)/(X1 + X2)^2` with the same statistic after adding
/// an independent unit exponential `Y` to `X1`, for `X1, X2` i.i.d. unit-scale
/// gamma(alpha). The two sides use disjoint stream families.
pub fn verify_exp_identity(alpha: f64, reps: usize, seed: u64) -> Result<IdentityCheck> {
    if reps < 10_000 {
        return Err(Error::domain(format!("the identity check needs at least 10^4 reps, got {reps}")));
    }
    let sampler = gamma_sampler(&GammaParams::shape(alpha)?);
    let ratio = |x1: f64, x2: f64| {
        let s = x1 + x2;
        (x1 * x1 + x2 * x2) / (s * s)
    };
    let (lhs, _) = replicate(reps, seed, 0, |rng| Some(ratio(sampler.sample(rng), sampler.sample(rng))));
    let (rhs, _) = replicate(reps, seed, SECOND_FAMILY, |rng| {
        let (x1, x2) = (sampler.sample(rng), sampler.sample(rng));
        let y: f64 = Exp1.sample(rng);
        Some(ratio(x1 + y, x2))
    });
    let lhs = EmpiricalDistribution::new(lhs, seed, format!("identity-lhs[alpha={alpha}]"))?;
    let rhs = EmpiricalDistribution::new(rhs, seed, format!("identity-rhs[alpha={alpha}]"))?;
    let ks = ks_two_sample(&lhs, &rhs);
    Ok(IdentityCheck { alpha, reps, ks, accepted: ks.below_threshold() })
}

/// Uniform draws on `(0, 1)` from stream 0 of `seed`; a KS calibration fixture.
pub fn simulate_uniform(reps: usize, seed: u64) -> Result<EmpiricalDistribution> {
    let mut rng = stream_rng(seed, 0);
    EmpiricalDistribution::new((0..reps).map(|_| rng.random::<f64>()).collect(), seed, "uniform(0,1)")
}
