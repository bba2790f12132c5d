//! Numerical building blocks shared by every other module.

mod chebyshev;
mod quadrature;
mod roots;
pub(crate) mod special;

pub use chebyshev::ChebyshevAntiderivative;
pub use quadrature::{
    integrate, integrate_offsets, integrate_to_infinity, integrate_with, stretch_power, EndpointMode, QuadratureConfig,
    QuadratureResult,
};
pub use roots::{find_root, golden_section_max, golden_section_min, solve_quadratic, QuadraticRoots};
pub use special::{beta_fn, inc_beta_pair, ln_beta, log_gamma, reg_inc_beta};
