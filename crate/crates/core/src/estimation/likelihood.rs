//! Log-likelihood and its analytic gradient.

use crate::dataset::Dataset;
use crate::distribution::{density_factor, ln_density_factor, Kernel};
use crate::params::TgiwParams;

/// Log-likelihood of an i.i.d. sample, accumulated in log space.
///
/// Returns `-inf` when a density factor `1 + lambda - 2 lambda exp(-z)`
/// vanishes, which can only happen on the `|lambda| = 1` edges.
pub fn log_likelihood(p: &TgiwParams, d: &Dataset) -> f64 {
    let lambda = p.lambda();
    let ln_beta = p.beta().ln();
    let mut total = 0.0;
    for &x in d.values() {
        let k = Kernel::new(p, x);
        let factor = ln_density_factor(lambda, &k);
        if factor == f64::NEG_INFINITY || factor.is_nan() {
            return f64::NEG_INFINITY;
        }
        total += ln_beta + k.ln_z - x.ln() - k.z + factor;
    }
    total
}

/// Gradient of [`log_likelihood`] with respect to `(alpha, beta, gamma, lambda)`.
///
/// With `y = alpha x`, `z = gamma y^(-beta)`, `u = exp(-z)` and
/// `B = 1 + lambda - 2 lambda u`:
///
/// ```text
/// d/d alpha  = beta/alpha * sum(z - 1 - 2 lambda u z / B)
/// d/d beta   = n/beta + sum(ln y * (z - 1 - 2 lambda u z / B))
/// d/d gamma  = 1/gamma * sum(1 - z + 2 lambda u z / B)
/// d/d lambda = sum((1 - 2u) / B)
/// ```
pub fn score(p: &TgiwParams, d: &Dataset) -> [f64; 4] {
    let (alpha, beta, gamma, lambda) = (p.alpha(), p.beta(), p.gamma(), p.lambda());
    let mut s_alpha = 0.0;
    let mut s_beta = d.len() as f64 / beta;
    let mut s_gamma = 0.0;
    let mut s_lambda = 0.0;
    for &x in d.values() {
        let k = Kernel::new(p, x);
        let b = density_factor(lambda, &k);
        let ln_y = (alpha * x).ln();
        let core = k.z - 1.0 - 2.0 * lambda * k.u * k.z / b;
        s_alpha += core;
        s_beta += ln_y * core;
        s_gamma -= core;
        s_lambda += (k.w - k.u) / b;
    }
    [s_alpha * beta / alpha, s_beta, s_gamma / gamma, s_lambda]
}
