//! Observed information and Wald intervals.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use super::layout::Layout;
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::params::{Param, TgiwParams};

/// Condition number above which the information is reported as ill-conditioned.
pub const ILL_CONDITIONED: f64 = 1e6;
/// Condition number above which the information is treated as singular.
pub const SINGULAR: f64 = 1e12;

/// Negative Hessian of the log-likelihood over a set of free parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InformationMatrix {
    pub params: Vec<Param>,
    pub matrix: Vec<Vec<f64>>,
    pub eigenvalues: Vec<f64>,
    /// `max |eigenvalue| / min |eigenvalue|`; `None` when an eigenvalue is exactly zero.
    pub condition_number: Option<f64>,
}

impl InformationMatrix {
    fn from_matrix(params: Vec<Param>, m: DMatrix<f64>) -> Self {
        let eigen = SymmetricEigen::new(m.clone());
        let mut eigenvalues: Vec<f64> = eigen.eigenvalues.iter().copied().collect();
        eigenvalues.sort_by(f64::total_cmp);
        let max = eigenvalues.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let min = eigenvalues.iter().fold(f64::INFINITY, |a, v| a.min(v.abs()));
        let condition_number = (min > 0.0).then(|| max / min);
        let n = m.nrows();
        let matrix = (0..n).map(|i| (0..n).map(|j| m[(i, j)]).collect()).collect();
        Self {
            params,
            matrix,
            eigenvalues,
            condition_number,
        }
    }

    pub fn dim(&self) -> usize {
        self.params.len()
    }

    pub fn positive_definite(&self) -> bool {
        self.eigenvalues.iter().all(|&v| v > 0.0)
    }

    pub fn is_ill_conditioned(&self) -> bool {
        self.condition_number.is_none_or(|c| c > ILL_CONDITIONED) || !self.positive_definite()
    }

    pub fn is_singular(&self) -> bool {
        self.condition_number.is_none_or(|c| c > SINGULAR)
    }

    fn as_dmatrix(&self) -> DMatrix<f64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |i, j| self.matrix[i][j])
    }

    /// Inverse of the information, the asymptotic covariance of the estimates.
    pub fn covariance(&self) -> Result<Vec<Vec<f64>>> {
        let cond = self.condition_number.unwrap_or(f64::INFINITY);
        if self.is_singular() || !self.positive_definite() {
            return Err(Error::SingularInformation(cond));
        }
        let inv = self
            .as_dmatrix()
            .try_inverse()
            .ok_or(Error::SingularInformation(cond))?;
        let n = self.dim();
        Ok((0..n).map(|i| (0..n).map(|j| inv[(i, j)]).collect()).collect())
    }

    pub fn standard_errors(&self) -> Result<Vec<f64>> {
        let cov = self.covariance()?;
        Ok((0..self.dim()).map(|i| cov[i][i].sqrt()).collect())
    }
}

/// Observed information at `p` over the free coordinates of `layout`.
///
/// Central differences of the analytic score with per-parameter step
/// `h = eps^(1/3) * max(1, |value|)`; the result is symmetrized. Differencing
/// the score rather than taking second differences of the log-likelihood
/// keeps rounding noise near `eps^(2/3)`, small enough for the null direction
/// of a non-identified parameterization to show in the condition number.
pub(crate) fn observed_information_in(
    layout: &Layout,
    p: &TgiwParams,
    d: &Dataset,
) -> Result<InformationMatrix> {
    let center = layout.natural_values(p);
    let dim = center.len();
    let mut hess = DMatrix::<f64>::zeros(dim, dim);
    for k in 0..dim {
        let h = f64::EPSILON.cbrt() * center[k].abs().max(1.0);
        let gradient_at = |delta: f64| -> Result<Vec<f64>> {
            let mut v = center.clone();
            v[k] += delta;
            Ok(layout.gradient(&layout.params_from_natural(&v)?, d))
        };
        let (up, down) = (gradient_at(h)?, gradient_at(-h)?);
        for r in 0..dim {
            hess[(r, k)] = (up[r] - down[r]) / (2.0 * h);
        }
    }
    if hess.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain(
            "log-likelihood is not finite around the evaluation point".into(),
        ));
    }
    let info = -(hess.clone() + hess.transpose()) * 0.5;
    Ok(InformationMatrix::from_matrix(layout.natural_params(), info))
}

/// Upper `level / 2` quantile of the standard normal distribution.
pub fn normal_critical(level: f64) -> Result<f64> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::Domain(format!("level must lie in (0, 1), got {level}")));
    }
    let normal = Normal::standard();
    Ok(normal.inverse_cdf(1.0 - level / 2.0))
}

/// `estimate -/+ z_(level/2) * sqrt(variance)`.
pub fn wald_interval(estimate: f64, variance: f64, level: f64) -> Result<(f64, f64)> {
    if !(variance >= 0.0 && variance.is_finite()) {
        return Err(Error::Domain(format!("variance must be finite and nonnegative, got {variance}")));
    }
    let half = normal_critical(level)? * variance.sqrt();
    Ok((estimate - half, estimate + half))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn standard_normal_interval() {
        let (lo, hi) = wald_interval(0.0, 1.0, 0.05).unwrap();
        assert_relative_eq!(hi, 1.959964, epsilon = 1e-6);
        assert_relative_eq!(lo, -1.959964, epsilon = 1e-6);
    }

    #[test]
    fn narrower_at_lower_confidence() {
        let (lo95, hi95) = wald_interval(2.0, 0.3, 0.05).unwrap();
        let (lo90, hi90) = wald_interval(2.0, 0.3, 0.10).unwrap();
        assert!(lo95 < lo90 && hi90 < hi95);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(wald_interval(0.0, -1.0, 0.05).is_err());
        assert!(wald_interval(0.0, 1.0, 0.0).is_err());
        assert!(wald_interval(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn conditioning_flags() {
        let good = InformationMatrix::from_matrix(
            vec![Param::Theta, Param::Beta],
            DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]),
        );
        assert!(good.positive_definite());
        assert!(!good.is_ill_conditioned());
        let cov = good.covariance().unwrap();
        assert_relative_eq!(cov[0][0], 1.0 / 1.75, max_relative = 1e-12);

        let ridge = InformationMatrix::from_matrix(
            vec![Param::Alpha, Param::Gamma],
            DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0 + 1e-13]),
        );
        assert!(ridge.is_ill_conditioned());
        assert!(ridge.is_singular());
        assert!(ridge.covariance().is_err());
    }
}
