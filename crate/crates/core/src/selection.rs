//! Goodness of fit and model comparison.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::dataset::Dataset;
use crate::distribution::cdf_and_survival;
use crate::error::{Error, Result};
use crate::estimation::{fit_mle, FitConfig, FitResult, Mode};
use crate::params::{SubModel, TgiwParams};

/// One-sample Kolmogorov-Smirnov distance between the empirical cdf of `d`
/// and the model cdf.
pub fn ks_statistic(p: &TgiwParams, d: &Dataset) -> f64 {
    ks_distance(d.values(), |x| cdf_and_survival(p, x).0)
}

/// Largest gap on either side of each step of the empirical cdf of the sorted `sorted`.
pub fn ks_distance(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(idx, &x)| {
            let f = cdf(x);
            let after = (idx + 1) as f64 / n;
            let before = idx as f64 / n;
            (after - f).abs().max((f - before).abs())
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InformationCriteria {
    pub aic: f64,
    pub aicc: f64,
}

/// `AIC = -2 loglik + 2k`, `AICC = AIC + 2k(k+1)/(n-k-1)`.
pub fn information_criteria(neg2_log_lik: f64, k: usize, n: usize) -> Result<InformationCriteria> {
    if n <= k + 1 {
        return Err(Error::Domain(format!(
            "AICC needs n > k + 1, got n = {n}, k = {k}"
        )));
    }
    let kf = k as f64;
    let aic = neg2_log_lik + 2.0 * kf;
    Ok(InformationCriteria {
        aic,
        aicc: aic + 2.0 * kf * (kf + 1.0) / (n - k - 1) as f64,
    })
}

/// Upper `level` quantile of the chi-squared distribution with `df` degrees of freedom.
pub fn chi2_upper_quantile(df: usize, level: f64) -> Result<f64> {
    if df == 0 {
        return Err(Error::Domain("chi-squared needs df >= 1".into()));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::Domain(format!("level must lie in (0, 1), got {level}")));
    }
    let chi2 = ChiSquared::new(df as f64).map_err(|e| Error::Domain(e.to_string()))?;
    Ok(chi2.inverse_cdf(1.0 - level))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LrTest {
    pub omega: f64,
    pub df: usize,
    pub level: f64,
    pub critical: f64,
    pub reject: bool,
}

/// Likelihood-ratio test of a restricted model against the model it is nested in.
pub fn lr_test(ell_full: f64, ell_restricted: f64, df: usize, level: f64) -> Result<LrTest> {
    let omega = 2.0 * (ell_full - ell_restricted);
    if omega < -1e-6 {
        return Err(Error::NestingViolation(omega));
    }
    let critical = chi2_upper_quantile(df, level)?;
    Ok(LrTest {
        omega,
        df,
        level,
        critical,
        reject: omega > critical,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareConfig {
    pub fit: FitConfig,
    /// Count every free natural parameter (4 for TGIW, 3 for GIW) instead of
    /// the identifiable ones.
    pub paper_k: bool,
    /// Level of the likelihood-ratio tests.
    pub lr_level: f64,
}

impl Default for CompareConfig {
    fn default() -> Self {
        Self {
            fit: FitConfig::default(),
            paper_k: false,
            lr_level: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelRow {
    pub model: SubModel,
    pub k: usize,
    pub neg2_log_lik: Option<f64>,
    pub aic: Option<f64>,
    pub aicc: Option<f64>,
    pub ks: Option<f64>,
    pub fit: Option<FitResult>,
    pub error: Option<String>,
}

impl ModelRow {
    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LrComparison {
    pub restricted: SubModel,
    pub full: SubModel,
    pub test: Option<LrTest>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub n: usize,
    pub paper_k: bool,
    pub rows: Vec<ModelRow>,
    pub lr: Vec<LrComparison>,
}

impl ComparisonReport {
    pub fn row(&self, model: SubModel) -> Option<&ModelRow> {
        self.rows.iter().find(|r| r.model == model)
    }
}

fn build_row(d: &Dataset, model: SubModel, cfg: &CompareConfig) -> ModelRow {
    let k = if cfg.paper_k {
        model.nominal_k()
    } else {
        model.reduced_k()
    };
    let fit_cfg = FitConfig {
        model,
        mode: Mode::Reduced,
        ..cfg.fit.clone()
    };
    let failed = |msg: String| ModelRow {
        model,
        k,
        neg2_log_lik: None,
        aic: None,
        aicc: None,
        ks: None,
        fit: None,
        error: Some(msg),
    };
    let fr = match fit_mle(d, &fit_cfg) {
        Ok(fr) => fr,
        Err(e) => return failed(e.to_string()),
    };
    let neg2 = 2.0 * fr.neg_log_lik;
    let ic = match information_criteria(neg2, k, d.len()) {
        Ok(ic) => ic,
        Err(e) => return failed(e.to_string()),
    };
    ModelRow {
        model,
        k,
        neg2_log_lik: Some(neg2),
        aic: Some(ic.aic),
        aicc: Some(ic.aicc),
        ks: Some(ks_statistic(&fr.params, d)),
        fit: Some(fr),
        error: None,
    }
}

/// Fit every model by maximum likelihood (reduced mode) and tabulate K-S,
/// `-2 loglik`, AIC and AICC. Adjacent models in the list that are nested get
/// a likelihood-ratio test with `df` equal to the number of parameters the
/// restricted model fixes in addition.
pub fn compare(d: &Dataset, models: &[SubModel], cfg: &CompareConfig) -> Result<ComparisonReport> {
    if models.is_empty() {
        return Err(Error::Domain("at least one model is required".into()));
    }
    cfg.fit.validate()?;
    let rows: Vec<ModelRow> = std::thread::scope(|scope| {
        let handles: Vec<_> = models
            .iter()
            .map(|&model| scope.spawn(move || build_row(d, model, cfg)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("fitting thread panicked"))
            .collect()
    });

    let mut lr = Vec::new();
    for pair in rows.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let (restricted, full) = if a.model.is_nested_in(b.model) {
            (a, b)
        } else if b.model.is_nested_in(a.model) {
            (b, a)
        } else {
            continue;
        };
        let df = full.model.nominal_k() - restricted.model.nominal_k();
        let outcome = match (&full.fit, &restricted.fit) {
            (Some(f), Some(r)) => lr_test(f.log_likelihood(), r.log_likelihood(), df, cfg.lr_level)
                .map_err(|e| e.to_string()),
            _ => Err("a model in the pair failed to fit".to_string()),
        };
        let (test, error) = match outcome {
            Ok(t) => (Some(t), None),
            Err(e) => (None, Some(e)),
        };
        lr.push(LrComparison {
            restricted: restricted.model,
            full: full.model,
            test,
            error,
        });
    }

    Ok(ComparisonReport {
        n: d.len(),
        paper_k: cfg.paper_k,
        rows,
        lr,
    })
}
