//! Exact small-sample distribution theory for the method-of-moments
//! estimator of the gamma shape parameter.
//!
//! For a sample `X_1..X_n` from a gamma law, the moment estimators are
//! `alpha_hat = mean^2 / S^2` and `lambda_hat = S^2 / mean`, where `S^2` is the
//! biased (denominator `n`) sample variance. This crate provides:
//!
//! - [`exact_n2`]: closed forms for `n = 2` (`1/alpha_hat ~ Beta(1/2, alpha)`),
//!   plus the polynomial and sign-change machinery behind dispersive monotonicity.
//! - [`exact_n3`]: the joint density of `(mean, S)` for `n = 3`, the density and
//!   CDF of the studentized ratio `T = mean / S`, and closed-form CDFs for
//!   exponential and gamma(2) parents.
//! - [`orders`]: grid-based checkers for the usual stochastic, dispersive and
//!   star orders.
//! - [`montecarlo`]: a reproducible simulation oracle with Kolmogorov-Smirnov
//!   statistics.
//! - [`math`]: special functions, adaptive quadrature and root finding.

// `!(x > 0.0)` rejects NaN along with the failing range; tabulated
// quadrature constants keep their published digits.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod error;
pub mod exact_n2;
pub mod exact_n3;
pub mod gamma;
pub mod math;
pub mod montecarlo;
pub mod orders;

pub use error::{Error, Result};
pub use gamma::{GammaParams, SampleStats};
pub use orders::{DistributionHandle, OrderCheckReport};
