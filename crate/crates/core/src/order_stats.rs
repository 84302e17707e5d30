//! Densities of order statistics of an i.i.d. sample.
//!
//! All densities are composed from the distribution's `F` and `f`. Powers of
//! `F` and `1 - F` switch to log space once an exponent exceeds
//! [`LOG_SPACE_EXPONENT`].

use statrs::function::factorial::ln_factorial;

use crate::distribution::{cdf_and_survival, check_x, ln_pdf_unchecked, pdf_unchecked};
use crate::error::{Error, Result};
use crate::params::TgiwParams;

const LOG_SPACE_EXPONENT: u64 = 30;

/// Sample size `n`, rank `i` and an optional second rank `j > i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrderSpec {
    n: u64,
    i: u64,
    j: Option<u64>,
}

impl OrderSpec {
    pub fn new(n: u64, i: u64) -> Result<Self> {
        if n == 0 || i == 0 || i > n {
            return Err(Error::OrderSpec(format!("need 1 <= i <= n, got i = {i}, n = {n}")));
        }
        Ok(Self { n, i, j: None })
    }

    pub fn joint(n: u64, i: u64, j: u64) -> Result<Self> {
        let mut spec = Self::new(n, i)?;
        if j <= i || j > n {
            return Err(Error::OrderSpec(format!(
                "need i < j <= n, got i = {i}, j = {j}, n = {n}"
            )));
        }
        spec.j = Some(j);
        Ok(spec)
    }

    /// The sample median of an odd-sized sample `n = 2m + 1`.
    pub fn median(m: u64) -> Self {
        Self {
            n: 2 * m + 1,
            i: m + 1,
            j: None,
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn i(&self) -> u64 {
        self.i
    }

    pub fn j(&self) -> Option<u64> {
        self.j
    }
}

/// `n! / prod(k!)` for the supplied group sizes, which must sum to `n`.
fn multinomial(n: u64, groups: &[u64]) -> f64 {
    if n <= 60 {
        // Exact in double precision for these sizes: fold binomial factors.
        let mut coeff = 1.0;
        let mut remaining = n;
        for &g in groups {
            coeff *= binomial(remaining, g);
            remaining -= g;
        }
        coeff
    } else {
        ln_multinomial(n, groups).exp()
    }
}

fn ln_multinomial(n: u64, groups: &[u64]) -> f64 {
    ln_factorial(n) - groups.iter().map(|&g| ln_factorial(g)).sum::<f64>()
}

fn binomial(n: u64, k: u64) -> f64 {
    let k = k.min(n - k);
    let mut acc = 1.0;
    for t in 0..k {
        acc = acc * (n - t) as f64 / (t + 1) as f64;
    }
    acc.round()
}

/// `base^exp`, with the convention `0^0 = 1`.
fn pow_u(base: f64, exp: u64) -> f64 {
    if exp == 0 {
        1.0
    } else {
        base.powi(exp as i32)
    }
}

fn ln_pow_u(base: f64, exp: u64) -> f64 {
    if exp == 0 {
        0.0
    } else {
        exp as f64 * base.ln()
    }
}

/// `F(b) - F(a)` for `a < b`, taken from whichever tail is more accurate.
fn interval_mass(p: &TgiwParams, a: f64, b: f64) -> f64 {
    let (fa, sa) = cdf_and_survival(p, a);
    let (fb, sb) = cdf_and_survival(p, b);
    if fa > 0.5 {
        (sa - sb).max(0.0)
    } else {
        (fb - fa).max(0.0)
    }
}

impl TgiwParams {
    /// Density of the `i`-th smallest of `n` draws.
    pub fn os_density(&self, spec: OrderSpec, x: f64) -> Result<f64> {
        check_x(x)?;
        if spec.j.is_some() {
            return Err(Error::OrderSpec(
                "univariate density needs a spec without j".into(),
            ));
        }
        let (n, i) = (spec.n, spec.i);
        let (cdf, survival) = cdf_and_survival(self, x);
        let (below, above) = (i - 1, n - i);
        if below.max(above) > LOG_SPACE_EXPONENT {
            let ln = ln_multinomial(n, &[below, 1, above])
                + ln_pow_u(cdf, below)
                + ln_pow_u(survival, above)
                + ln_pdf_unchecked(self, x);
            return Ok(ln.exp());
        }
        Ok(multinomial(n, &[below, 1, above])
            * pow_u(cdf, below)
            * pow_u(survival, above)
            * pdf_unchecked(self, x))
    }

    pub fn min_density(&self, n: u64, x: f64) -> Result<f64> {
        self.os_density(OrderSpec::new(n, 1)?, x)
    }

    pub fn max_density(&self, n: u64, x: f64) -> Result<f64> {
        self.os_density(OrderSpec::new(n, n)?, x)
    }

    /// Density of the sample median for `n = 2m + 1`.
    pub fn median_density(&self, m: u64, x: f64) -> Result<f64> {
        self.os_density(OrderSpec::median(m), x)
    }

    /// Joint density of the `i`-th and `j`-th order statistics at `x_i < x_j`.
    pub fn joint_os_density(&self, spec: OrderSpec, x_i: f64, x_j: f64) -> Result<f64> {
        check_x(x_i)?;
        check_x(x_j)?;
        let Some(j) = spec.j else {
            return Err(Error::OrderSpec("joint density needs a spec with j".into()));
        };
        if x_i >= x_j {
            return Err(Error::Domain(format!(
                "joint density needs x_i < x_j, got {x_i} and {x_j}"
            )));
        }
        let (n, i) = (spec.n, spec.i);
        let groups = [i - 1, 1, j - i - 1, 1, n - j];
        let cdf_i = cdf_and_survival(self, x_i).0;
        let survival_j = cdf_and_survival(self, x_j).1;
        let mass = interval_mass(self, x_i, x_j);
        if groups.iter().any(|&g| g > LOG_SPACE_EXPONENT) {
            let ln = ln_multinomial(n, &groups)
                + ln_pow_u(cdf_i, groups[0])
                + ln_pow_u(mass, groups[2])
                + ln_pow_u(survival_j, groups[4])
                + ln_pdf_unchecked(self, x_i)
                + ln_pdf_unchecked(self, x_j);
            return Ok(ln.exp());
        }
        Ok(multinomial(n, &groups)
            * pow_u(cdf_i, groups[0])
            * pow_u(mass, groups[2])
            * pow_u(survival_j, groups[4])
            * pdf_unchecked(self, x_i)
            * pdf_unchecked(self, x_j))
    }

    /// Joint density of the sample minimum and maximum.
    pub fn min_max_joint_density(&self, n: u64, x_min: f64, x_max: f64) -> Result<f64> {
        check_x(x_min)?;
        check_x(x_max)?;
        if n < 2 {
            return Err(Error::OrderSpec(format!("need n >= 2, got {n}")));
        }
        if x_min >= x_max {
            return Err(Error::Domain(format!(
                "joint density needs x_min < x_max, got {x_min} and {x_max}"
            )));
        }
        let nf = n as f64;
        let mass = interval_mass(self, x_min, x_max);
        let spread = if n - 2 > LOG_SPACE_EXPONENT {
            ln_pow_u(mass, n - 2).exp()
        } else {
            pow_u(mass, n - 2)
        };
        Ok(nf * (nf - 1.0) * spread * pdf_unchecked(self, x_min) * pdf_unchecked(self, x_max))
    }
}
