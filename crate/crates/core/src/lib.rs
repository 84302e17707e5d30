//! The transmuted generalized inverse Weibull (TGIW) distribution.
//!
//! With `z = gamma (alpha x)^(-beta)` the cdf is
//! `F(x) = exp(-z) [1 + lambda - lambda exp(-z)]` for `x > 0`, `alpha, beta,
//! gamma > 0` and `|lambda| <= 1`. `lambda = 0` gives the generalized inverse
//! Weibull distribution; fixing further parameters gives the inverse Weibull,
//! inverse exponential, inverse Rayleigh and Frechet families and their
//! transmuted versions (see [`SubModel`]).
//!
//! The crate provides the distribution functions and moments
//! ([`TgiwParams`]), order-statistic densities ([`order_stats`]), estimation
//! ([`estimation`]), goodness-of-fit and model comparison ([`selection`]),
//! and the 50-observation failure-time study ([`study`]).

pub mod dataset;
pub mod distribution;
pub mod error;
pub mod estimation;
pub mod moments;
pub mod order_stats;
pub mod params;
pub mod sampling;
pub mod selection;
pub mod study;

pub use dataset::Dataset;
pub use error::{Error, Result};
pub use estimation::{fit, fit_lse, fit_mle, fit_wlse, FitConfig, FitResult, Method, Mode, Solution};
pub use moments::ShapeStatistics;
pub use order_stats::OrderSpec;
pub use params::{Param, ParamSet, ReducedParams, SubModel, TgiwParams};
