//! Gamma parent distribution and the method-of-moments estimators.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::math::log_gamma;

/// Shape `alpha` and scale `lambda` of `x^{alpha-1} e^{-x/lambda} / (Γ(alpha) lambda^alpha)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaParams {
    alpha: f64,
    lambda: f64,
}

impl GammaParams {
    pub fn new(alpha: f64, lambda: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) || !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::domain(format!("gamma parameters must be positive, got ({alpha}, {lambda})")));
        }
        Ok(Self { alpha, lambda })
    }

    /// Unit-scale gamma with the given shape.
    pub fn shape(alpha: f64) -> Result<Self> {
        Self::new(alpha, 1.0)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mean(&self) -> f64 {
        self.alpha * self.lambda
    }

    pub fn variance(&self) -> f64 {
        self.alpha * self.lambda * self.lambda
    }

    /// Log of the normalizing constant `Γ(alpha) lambda^alpha`.
    pub(crate) fn ln_norm(&self) -> f64 {
        // alpha > 0 was validated in the constructor
        log_gamma(self.alpha).expect("positive shape") + self.alpha * self.lambda.ln()
    }
}

/// Gamma density. Zero for `x < 0`; at `x = 0` it is zero for `alpha > 1`,
/// `1/lambda` for `alpha = 1`, and a domain error for `alpha < 1` where the
/// density is unbounded.
pub fn gamma_density(p: &GammaParams, x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::domain("gamma density at NaN"));
    }
    if x < 0.0 {
        return Ok(0.0);
    }
    if x == 0.0 {
        return match p.alpha.partial_cmp(&1.0) {
            Some(std::cmp::Ordering::Greater) => Ok(0.0),
            Some(std::cmp::Ordering::Equal) => Ok(1.0 / p.lambda),
            _ => Err(Error::domain("gamma density is unbounded at 0 for alpha < 1")),
        };
    }
    Ok(((p.alpha - 1.0) * x.ln() - x / p.lambda - p.ln_norm()).exp())
}

/// Deterministic RNG for stream `stream` of `seed`. Streams are independent
/// ChaCha8 keystreams, so any partition of work over streams reproduces.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Draws `count` i.i.d. gamma variates from stream 0 of `seed`.
pub fn sample_gamma(p: &GammaParams, count: usize, seed: u64) -> Vec<f64> {
    let mut rng = stream_rng(seed, 0);
    gamma_sampler(p).sample_iter(&mut rng).take(count).collect()
}

// rand_distr uses Marsaglia-Tsang squeeze rejection for shape >= 1 and the
// U^{1/alpha} boost for shape < 1.
pub(crate) fn gamma_sampler(p: &GammaParams) -> Gamma<f64> {
    Gamma::new(p.alpha, p.lambda).expect("validated gamma parameters")
}

/// Sample mean, biased variance (denominator `n`) and the moment estimators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleStats {
    pub n: usize,
    pub mean: f64,
    pub biased_variance: f64,
    pub sd: f64,
    pub alpha_hat: f64,
    pub lambda_hat: f64,
}

impl SampleStats {
    /// `T = mean / S`, the studentized ratio; `T^2 = alpha_hat`.
    pub fn t_ratio(&self) -> f64 {
        self.mean / self.sd
    }
}

pub fn moment_estimates(sample: &[f64]) -> Result<SampleStats> {
    let n = sample.len();
    if n < 2 {
        return Err(Error::domain(format!("moment estimates need at least 2 observations, got {n}")));
    }
    if sample.iter().any(|x| !x.is_finite()) {
        return Err(Error::domain("sample contains non-finite values"));
    }
    let nf = n as f64;
    let mean = sample.iter().sum::<f64>() / nf;
    let biased_variance = sample.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / nf;
    if biased_variance == 0.0 {
        return Err(Error::DegenerateSample);
    }
    if mean == 0.0 {
        return Err(Error::domain("lambda_hat is undefined for a zero sample mean"));
    }
    Ok(SampleStats {
        n,
        mean,
        biased_variance,
        sd: biased_variance.sqrt(),
        alpha_hat: mean * mean / biased_variance,
        lambda_hat: biased_variance / mean,
    })
}
