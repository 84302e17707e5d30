//! Closed-form distribution functions.
//!
//! With `z = gamma * (alpha x)^(-beta)` and `u = exp(-z)` the base cdf is `u`
//! and the transmuted cdf is `u (1 + lambda - lambda u)`. Everything below is
//! written in terms of `z`, `u` and `w = 1 - u` (via `expm1`) so that both
//! tails keep full relative precision.

use crate::error::{Error, Result};
use crate::params::TgiwParams;

/// Cached intermediate quantities at a single point `x`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Kernel {
    /// `ln z`
    pub ln_z: f64,
    pub z: f64,
    /// `exp(-z)`, the base cdf.
    pub u: f64,
    /// `1 - u`, accurate when `z` is small.
    pub w: f64,
}

impl Kernel {
    pub fn new(p: &TgiwParams, x: f64) -> Self {
        let ln_z = p.gamma().ln() - p.beta() * (p.alpha() * x).ln();
        let z = ln_z.exp();
        Self {
            ln_z,
            z,
            u: (-z).exp(),
            w: -(-z).exp_m1(),
        }
    }
}

pub(crate) fn check_x(x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("x must be finite and positive, got {x}")))
    }
}

/// `1 + lambda - 2 lambda u`, the transmutation factor of the density,
/// evaluated as a sum of nonnegative terms.
pub(crate) fn density_factor(lambda: f64, k: &Kernel) -> f64 {
    if lambda >= 0.0 {
        (1.0 - lambda) + 2.0 * lambda * k.w
    } else {
        (1.0 + lambda) - 2.0 * lambda * k.u
    }
}

/// Natural log of [`density_factor`], finite down to the `|lambda| = 1` edges.
pub(crate) fn ln_density_factor(lambda: f64, k: &Kernel) -> f64 {
    if lambda >= 0.0 {
        let a = 1.0 - lambda;
        if a == 0.0 {
            (2.0 * lambda).ln() + k.w.ln()
        } else {
            (a + 2.0 * lambda * k.w).ln()
        }
    } else {
        let a = 1.0 + lambda;
        if a == 0.0 {
            (-2.0 * lambda).ln() - k.z
        } else {
            (a - 2.0 * lambda * k.u).ln()
        }
    }
}

/// Returns `(cdf, survival)`. The smaller of the two is computed directly and
/// the other as its complement.
pub(crate) fn cdf_and_survival(p: &TgiwParams, x: f64) -> (f64, f64) {
    let k = Kernel::new(p, x);
    let lambda = p.lambda();
    let cdf = k.u * (1.0 + lambda - lambda * k.u);
    if cdf <= 0.5 {
        (cdf, 1.0 - cdf)
    } else {
        // 1 - u(1 + l - l u) = (1 - u)(1 - l u)
        let survival = k.w * (1.0 - lambda * k.u);
        (1.0 - survival, survival)
    }
}

pub(crate) fn pdf_unchecked(p: &TgiwParams, x: f64) -> f64 {
    let k = Kernel::new(p, x);
    if k.u == 0.0 {
        return 0.0;
    }
    // alpha beta gamma (alpha x)^(-beta-1) = beta z / x
    p.beta() * k.z / x * k.u * density_factor(p.lambda(), &k)
}

pub(crate) fn ln_pdf_unchecked(p: &TgiwParams, x: f64) -> f64 {
    let k = Kernel::new(p, x);
    p.beta().ln() + k.ln_z - x.ln() - k.z + ln_density_factor(p.lambda(), &k)
}

impl TgiwParams {
    pub fn cdf(&self, x: f64) -> Result<f64> {
        check_x(x)?;
        Ok(cdf_and_survival(self, x).0)
    }

    pub fn pdf(&self, x: f64) -> Result<f64> {
        check_x(x)?;
        Ok(pdf_unchecked(self, x))
    }

    /// Natural log of the density; `-inf` only where the density is exactly zero.
    pub fn ln_pdf(&self, x: f64) -> Result<f64> {
        check_x(x)?;
        Ok(ln_pdf_unchecked(self, x))
    }

    /// Reliability function `1 - F(x)`.
    pub fn survival(&self, x: f64) -> Result<f64> {
        check_x(x)?;
        Ok(cdf_and_survival(self, x).1)
    }

    /// Failure rate `f(x) / (1 - F(x))`.
    pub fn hazard(&self, x: f64) -> Result<f64> {
        check_x(x)?;
        let survival = cdf_and_survival(self, x).1;
        if survival <= 0.0 {
            return Err(Error::HazardOverflow(x));
        }
        Ok(pdf_unchecked(self, x) / survival)
    }

    /// `-ln(1 - F(x))`.
    pub fn cumulative_hazard(&self, x: f64) -> Result<f64> {
        check_x(x)?;
        let (cdf, survival) = cdf_and_survival(self, x);
        if cdf <= 0.5 {
            Ok(-(-cdf).ln_1p())
        } else if survival > 0.0 {
            Ok(-survival.ln())
        } else {
            Err(Error::HazardOverflow(x))
        }
    }

    /// Inverse cdf.
    ///
    /// Solves `lambda u^2 - (1 + lambda) u + q = 0` for the base cdf value `u`
    /// using the root that lies in `(0, 1)`, written in rationalized form so
    /// that `lambda = 0` needs no special case, then inverts
    /// `u = exp(-gamma (alpha x)^(-beta))`.
    pub fn quantile(&self, q: f64) -> Result<f64> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::Domain(format!(
                "quantile level must lie in (0, 1), got {q}"
            )));
        }
        let lambda = self.lambda();
        let one_minus_q = 1.0 - q;
        // Discriminant (1 + l)^2 - 4 l q, arranged to avoid cancellation.
        let disc = if lambda >= 0.0 {
            (1.0 - lambda).powi(2) + 4.0 * lambda * one_minus_q
        } else {
            (1.0 + lambda).powi(2) - 4.0 * lambda * q
        };
        let root = disc.max(0.0).sqrt();
        let denom = (1.0 + lambda) + root;
        let u = 2.0 * q / denom;
        // 1 - u = ((1 + l - 2q) + sqrt(disc)) / denom
        let a = 1.0 + lambda - 2.0 * q;
        let num = if a >= 0.0 {
            a + root
        } else {
            4.0 * q * one_minus_q / (root - a)
        };
        let w = num / denom;
        let neg_ln_u = if u < 0.5 { -u.ln() } else { -(-w).ln_1p() };
        let x = (self.gamma() / neg_ln_u).powf(1.0 / self.beta()) / self.alpha();
        Ok(x)
    }

    pub fn median(&self) -> f64 {
        self.quantile(0.5).expect("0.5 is inside (0, 1)")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn p(a: f64, b: f64, g: f64, l: f64) -> TgiwParams {
        TgiwParams::new(a, b, g, l).unwrap()
    }

    const E1: f64 = 0.367_879_441_171_442_33;

    #[test]
    fn cdf_at_unit_point() {
        assert_relative_eq!(p(1., 1., 1., 0.).cdf(1.0).unwrap(), E1, max_relative = 1e-15);
        assert_relative_eq!(
            p(1., 1., 1., -1.).cdf(1.0).unwrap(),
            (-2.0f64).exp(),
            max_relative = 1e-15
        );
        assert_relative_eq!(
            p(1., 1., 1., 1.).cdf(1.0).unwrap(),
            2.0 * E1 - E1 * E1,
            max_relative = 1e-15
        );
        assert_relative_eq!(p(1., 1., 1., 1.).cdf(1.0).unwrap(), 0.600423, epsilon = 1e-6);
    }

    #[test]
    fn pdf_at_unit_point() {
        assert_relative_eq!(p(1., 1., 1., 0.).pdf(1.0).unwrap(), E1, max_relative = 1e-15);
        assert_relative_eq!(
            p(1., 1., 1., 1.).pdf(1.0).unwrap(),
            2.0 * E1 - 2.0 * E1 * E1,
            max_relative = 1e-15
        );
        let q = p(1., 1., 1., 0.5);
        let h = 1e-5;
        let fd = (q.cdf(1.0 + h).unwrap() - q.cdf(1.0 - h).unwrap()) / (2.0 * h);
        assert_relative_eq!(q.pdf(1.0).unwrap(), fd, max_relative = 1e-9);
    }

    #[test]
    fn survival_and_hazards() {
        let base = p(1., 1., 1., 0.);
        assert_relative_eq!(base.survival(1.0).unwrap(), 1.0 - E1, max_relative = 1e-15);
        assert_relative_eq!(
            p(1., 1., 1., -1.).survival(1.0).unwrap(),
            0.864665,
            epsilon = 1e-6
        );
        assert!(base.survival(1e8).unwrap() < 1e-7);
        assert_relative_eq!(base.hazard(1.0).unwrap(), E1 / (1.0 - E1), max_relative = 1e-14);
        assert_relative_eq!(base.hazard(1.0).unwrap(), 0.581977, epsilon = 1e-6);
        assert_relative_eq!(p(1., 1., 1., 1.).hazard(1.0).unwrap(), 1.163953, epsilon = 1e-6);
        assert_relative_eq!(
            base.cumulative_hazard(1.0).unwrap(),
            0.458675,
            epsilon = 1e-6
        );
        assert_relative_eq!(
            p(1., 1., 1., -1.).cumulative_hazard(1.0).unwrap(),
            0.145413,
            epsilon = 1e-6
        );
        assert!(base.cumulative_hazard(1e-8).unwrap() < 1e-12);
    }

    #[test]
    fn domain_errors() {
        let base = p(1., 1., 1., 0.);
        for x in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(base.cdf(x).is_err());
            assert!(base.pdf(x).is_err());
            assert!(base.survival(x).is_err());
            assert!(base.hazard(x).is_err());
            assert!(base.cumulative_hazard(x).is_err());
        }
        for q in [0.0, 1.0, -0.1, 1.1, f64::NAN] {
            assert!(base.quantile(q).is_err());
        }
    }

    #[test]
    fn underflow_gives_exact_zeros() {
        let q = p(1., 2., 1., 0.3);
        assert_eq!(q.cdf(1e-5).unwrap(), 0.0);
        assert_eq!(q.pdf(1e-5).unwrap(), 0.0);
        assert!(q.ln_pdf(1e-5).unwrap().is_finite());
        let edge = p(1., 2., 1., -1.);
        assert!(edge.ln_pdf(1e-5).unwrap().is_finite());
    }

    #[test]
    fn heavy_tail_hazard_stays_finite() {
        let q = p(1., 0.5, 1., 1.0);
        let h = q.hazard(1e12).unwrap();
        assert!(h.is_finite() && h > 0.0);
    }

    #[test]
    fn quantile_examples() {
        assert_relative_eq!(p(1., 1., 1., 0.).quantile(E1).unwrap(), 1.0, max_relative = 1e-14);
        let c = p(1., 1., 1., 1.).cdf(1.0).unwrap();
        assert_relative_eq!(p(1., 1., 1., 1.).quantile(c).unwrap(), 1.0, max_relative = 1e-12);
        assert_relative_eq!(
            p(1., 1., 1., 1.).quantile(0.600423).unwrap(),
            1.0,
            epsilon = 1e-5
        );
        assert_relative_eq!(
            p(1., 1., 1., 0.).median(),
            std::f64::consts::LN_2.recip(),
            max_relative = 1e-14
        );
        assert_relative_eq!(p(1., 2., 1., 0.).median(), 1.201123, epsilon = 1e-6);
    }

    #[test]
    fn quantile_restores_alpha_scale() {
        let q = p(3.0, 1.7, 0.8, -0.4);
        for level in [0.05, 0.5, 0.95] {
            let x = q.quantile(level).unwrap();
            assert_relative_eq!(q.cdf(x).unwrap(), level, epsilon = 1e-13);
        }
    }
}
