use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gamma::GammaParams;
use crate::math::{integrate_to_infinity, QuadratureConfig};

#[derive(Clone)]
enum Kind {
    Gamma { alpha: f64, lambda: f64, ln_norm: f64 },
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

/// A density on `(0, ∞)` for the parent population.
///
/// Besides the density itself it records `origin_exponent`, the power `e` in
/// `f(x) ~ x^e` as `x -> 0`, which fixes the strength of the endpoint
/// singularities in the nested integrals built on top of it.
#[derive(Clone)]
pub struct ParentDensity {
    kind: Kind,
    label: String,
    origin_exponent: f64,
    mean: f64,
}

impl fmt::Debug for ParentDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParentDensity")
            .field("label", &self.label)
            .field("origin_exponent", &self.origin_exponent)
            .field("mean", &self.mean)
            .finish()
    }
}

impl ParentDensity {
    /// Registers a custom density. It must integrate to 1 within `1e-6`.
    pub fn new<F>(label: impl Into<String>, density: F, origin_exponent: f64) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(origin_exponent > -1.0) {
            return Err(Error::domain("origin exponent must exceed -1"));
        }
        let mut parent =
            Self { kind: Kind::Custom(Arc::new(density)), label: label.into(), origin_exponent, mean: 1.0 };
        parent.register()?;
        Ok(parent)
    }

    pub fn gamma(params: GammaParams) -> Self {
        Self {
            kind: Kind::Gamma { alpha: params.alpha(), lambda: params.lambda(), ln_norm: params.ln_norm() },
            label: format!("gamma(alpha={}, lambda={})", params.alpha(), params.lambda()),
            origin_exponent: params.alpha() - 1.0,
            mean: params.mean(),
        }
    }

    pub fn gamma_shape(alpha: f64) -> Result<Self> {
        Ok(Self::gamma(GammaParams::shape(alpha)?))
    }

    pub fn exponential() -> Self {
        Self::gamma(GammaParams::shape(1.0).expect("unit exponential"))
    }

    fn register(&mut self) -> Result<()> {
        let cfg = QuadratureConfig::with_tolerances(1e-12, 1e-10);
        let e = self.origin_exponent;
        let mass = integrate_to_infinity(|x| Ok(self.density(x)), 0.0, 1.0, e, &cfg, 1e-13)?.value;
        if (mass - 1.0).abs() > 1e-6 {
            return Err(Error::domain(format!("{} integrates to {mass}, not 1", self.label)));
        }
        self.mean = integrate_to_infinity(|x| Ok(x * self.density(x)), 0.0, 1.0, e + 1.0, &cfg, 1e-13)?.value;
        Ok(())
    }

    pub fn density(&self, x: f64) -> f64 {
        if !(x > 0.0) {
            return 0.0;
        }
        match &self.kind {
            Kind::Gamma { alpha, lambda, ln_norm } => ((alpha - 1.0) * x.ln() - x / lambda - ln_norm).exp(),
            Kind::Custom(f) => f(x),
        }
    }

    /// `f(x1) f(x2) f(x3)` for positive arguments.
    #[inline]
    pub(crate) fn product3(&self, x1: f64, x2: f64, x3: f64) -> f64 {
        match &self.kind {
            Kind::Gamma { alpha, lambda, ln_norm } => {
                let log_prod = (alpha - 1.0) * (x1.ln() + x2.ln() + x3.ln()) - (x1 + x2 + x3) / lambda - 3.0 * ln_norm;
                log_prod.exp()
            }
            Kind::Custom(f) => f(x1) * f(x2) * f(x3),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn origin_exponent(&self) -> f64 {
        self.origin_exponent
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Shape of a gamma parent, if it is one.
    pub fn gamma_shape_param(&self) -> Option<f64> {
        self.gamma_params().map(|(alpha, _)| alpha)
    }

    /// `(alpha, lambda)` of a gamma parent.
    pub fn gamma_params(&self) -> Option<(f64, f64)> {
        match self.kind {
            Kind::Gamma { alpha, lambda, .. } => Some((alpha, lambda)),
            Kind::Custom(_) => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn custom_density_is_checked() {
        let half_normal = |x: f64| (2.0 / std::f64::consts::PI).sqrt() * (-0.5 * x * x).exp();
        let p = ParentDensity::new("half-normal", half_normal, 0.0).unwrap();
        assert!((p.mean() - (2.0 / std::f64::consts::PI).sqrt()).abs() < 1e-9);
        assert!(ParentDensity::new("twice", move |x| 2.0 * half_normal(x), 0.0).is_err());
    }

    #[test]
    fn gamma_product_matches_density() {
        let p = ParentDensity::gamma_shape(0.4).unwrap();
        let prod = p.product3(0.3, 1.1, 2.5);
        let direct = p.density(0.3) * p.density(1.1) * p.density(2.5);
        assert!((prod - direct).abs() < 1e-13 * direct);
        assert_eq!(p.density(0.0), 0.0);
        assert_eq!(p.gamma_shape_param(), Some(0.4));
    }
}
