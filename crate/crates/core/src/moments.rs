//! Raw moments, shape coefficients and the truncated moment series.
//!
//! The family has a polynomial right tail, `P(X > x) ~ x^(-beta)`, so the
//! r-th moment exists only for `r < beta` and the moment generating function
//! diverges for every `t > 0`. [`TgiwParams::mgf_partial_sum`] therefore
//! only evaluates a finite number of terms of the formal series and refuses
//! terms whose moment does not exist.

use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::params::TgiwParams;

/// Coefficient of variation, skewness and (non-excess) kurtosis. Each field is
/// independently available depending on how many moments exist.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeStatistics {
    pub cv: Result<f64>,
    pub skewness: Result<f64>,
    pub kurtosis: Result<f64>,
}

impl TgiwParams {
    /// `E[X^r] = gamma^(r/beta) Gamma(1 - r/beta) alpha^(-r) (1 + lambda - lambda 2^(r/beta))`.
    pub fn raw_moment(&self, r: u32) -> Result<f64> {
        if r == 0 {
            return Ok(1.0);
        }
        let order = f64::from(r);
        if order >= self.beta() {
            return Err(Error::MomentDoesNotExist {
                order: r,
                beta: self.beta(),
            });
        }
        let s = order / self.beta();
        let lambda = self.lambda();
        Ok(self.gamma().powf(s) * gamma(1.0 - s) / self.alpha().powf(order)
            * (1.0 + lambda - lambda * 2f64.powf(s)))
    }

    pub fn mean(&self) -> Result<f64> {
        self.raw_moment(1)
    }

    pub fn variance(&self) -> Result<f64> {
        let m1 = self.raw_moment(1)?;
        let m2 = self.raw_moment(2)?;
        Ok(m2 - m1 * m1)
    }

    pub fn shape_statistics(&self) -> ShapeStatistics {
        let m1 = self.raw_moment(1);
        let var = self.variance();
        let cv = var.clone().and_then(|v| Ok(v.sqrt() / m1.clone()?));
        let skewness = (|| {
            let (m1, m2, m3) = (m1.clone()?, self.raw_moment(2)?, self.raw_moment(3)?);
            let v = m2 - m1 * m1;
            Ok((m3 - 3.0 * m2 * m1 + 2.0 * m1.powi(3)) / v.powf(1.5))
        })();
        let kurtosis = (|| {
            let m1 = m1.clone()?;
            let (m2, m3, m4) = (self.raw_moment(2)?, self.raw_moment(3)?, self.raw_moment(4)?);
            let v = m2 - m1 * m1;
            Ok((m4 - 4.0 * m3 * m1 + 6.0 * m2 * m1 * m1 - 3.0 * m1.powi(4)) / (v * v))
        })();
        ShapeStatistics {
            cv,
            skewness,
            kurtosis,
        }
    }

    /// `sum_{r < terms} t^r E[X^r] / r!`. This is a partial sum of a formal
    /// series, not an approximation to a convergent MGF.
    pub fn mgf_partial_sum(&self, t: f64, terms: u32) -> Result<f64> {
        if terms == 0 {
            return Err(Error::Domain("at least one term is required".into()));
        }
        let mut sum = 0.0;
        let mut coeff = 1.0; // t^r / r!
        for r in 0..terms {
            if r > 0 {
                coeff *= t / f64::from(r);
            }
            sum += coeff * self.raw_moment(r)?;
        }
        Ok(sum)
    }
}
