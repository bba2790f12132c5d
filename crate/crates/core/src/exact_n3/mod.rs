//! Sampling law of the moment estimator for three observations.
//!
//! For `n = 3` the estimator is a function of `T = mean / S`
//! (`alpha_hat = T^2`), and nonnegative data force `T >= sqrt(2)/2`. The law of
//! `T` comes from the joint density of `(mean, S)`, which reduces to a
//! one-dimensional integral over the first observation. Closed forms exist for
//! exponential and gamma(2) parents; other shapes are handled numerically.

mod closed_form;
mod extrema;
mod joint;
mod parent;
mod tstat;

pub use closed_form::{
    star_ratio_exp_vs_gamma2, t_cdf_exp_n3, t_cdf_gamma2_n3, t_n3_exp_handle, t_n3_gamma2_handle, t_quantile_exp_n3,
    t_quantile_gamma2_n3,
};
pub use extrema::{quantile_difference_extrema, remark1_extrema, QuantileExtrema, Statistic};
pub use joint::{joint_density_n3, joint_density_n3_with, t_density_n3, t_density_n3_with, N3Accuracy, RayIntegral};
pub use parent::ParentDensity;
pub use tstat::{alpha_hat_n3_handle, t_cdf_numeric_n3, t_n3_numeric_handle, t_stat_gamma_n3, TStatN3};
