use thiserror::Error;

use crate::math::QuadratureResult;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate sample: biased variance is zero")]
    DegenerateSample,

    #[error(
        "quadrature did not converge after {} subdivisions (best {:e}, error estimate {:e})",
        best.subdivisions_used, best.value, best.error_estimate
    )]
    NotConverged { best: QuadratureResult },

    #[error("integrand returned a non-finite value at x = {x:e}")]
    NonFinite { x: f64 },

    #[error("root is not bracketed: f({lo:e}) = {f_lo:e}, f({hi:e}) = {f_hi:e}")]
    Bracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("no interior extrema found: {0}")]
    ExtremaNotFound(String),

    #[error("inconsistent order verdicts: {0}")]
    Inconsistent(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for failures of a numerical method, as opposed to bad inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NotConverged { .. }
                | Error::NonFinite { .. }
                | Error::Bracket { .. }
                | Error::ExtremaNotFound(_)
                | Error::Inconsistent(_)
        )
    }
}
