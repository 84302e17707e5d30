//! Parameter estimation: maximum likelihood, least squares and weighted
//! least squares on the cdf, with observed information and Wald intervals.
//!
//! The four-parameter family is not identifiable (the likelihood depends on
//! `alpha` and `gamma` only through `theta = gamma * alpha^(-beta)`), so fits
//! run in [`Mode::Reduced`] by default. [`Mode::Full`] searches all four
//! natural parameters and lands on an arbitrary point of the ridge; its
//! observed information is flagged as ill-conditioned.
//!
//! The likelihood can have more than one local maximum in `lambda`, including
//! a supremum on the `|lambda| = 1` edge. Every restart is kept as a
//! [`LocalMode`]. [`Solution::Stationary`] (the default) returns the best
//! interior root of the score equations and reports a better edge value, if
//! one exists, in [`FitResult::boundary_supremum`]; [`Solution::Global`]
//! returns the best value found anywhere on the closed parameter space.

pub mod information;
mod layout;
pub mod likelihood;
pub mod optimizer;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::distribution::cdf_and_survival;
use crate::error::{Error, Result};
use crate::params::{Param, ReducedParams, SubModel, TgiwParams};
use crate::sampling::rng_from_seed;
use information::{observed_information_in, wald_interval, InformationMatrix};
use layout::Layout;
use likelihood::log_likelihood;
use optimizer::NelderMead;

pub use information::normal_critical;

/// `|lambda|` beyond which an estimate is treated as sitting on the edge.
pub const LAMBDA_BOUNDARY: f64 = 0.999;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// `alpha = 1`, free `theta`.
    #[default]
    Reduced,
    /// All free natural parameters of the sub-model.
    Full,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[default]
    Mle,
    Lse,
    Wlse,
}

/// Which local optimum a maximum-likelihood fit reports.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Solution {
    /// Best interior root of the score equations.
    #[default]
    Stationary,
    /// Best objective value over the closed parameter space.
    Global,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitConfig {
    pub model: SubModel,
    pub mode: Mode,
    pub method: Method,
    pub solution: Solution,
    /// Simplex termination threshold on the spread of objective values.
    pub objective_tolerance: f64,
    /// Simplex termination threshold on the diameter in search coordinates.
    pub parameter_tolerance: f64,
    /// Score norm per observation below which a likelihood optimum counts as stationary.
    pub gradient_tolerance: f64,
    pub max_iterations: usize,
    /// Number of random restarts in addition to the quantile-matching start
    /// and, when lambda is free, a fixed grid of lambda starts.
    pub multistart: usize,
    pub seed: u64,
    /// Wald intervals are reported at confidence `1 - level`.
    pub level: f64,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            model: SubModel::Tgiw,
            mode: Mode::Reduced,
            method: Method::Mle,
            solution: Solution::Stationary,
            objective_tolerance: 1e-10,
            parameter_tolerance: 1e-9,
            gradient_tolerance: 1e-5,
            max_iterations: 20_000,
            multistart: 10,
            seed: 1,
            level: 0.05,
        }
    }
}

impl FitConfig {
    pub fn new(model: SubModel) -> Self {
        Self {
            model,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &'static str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter {
                    name,
                    value: v,
                    reason: "tolerance must be finite and positive",
                })
            }
        };
        positive("objective_tolerance", self.objective_tolerance)?;
        positive("parameter_tolerance", self.parameter_tolerance)?;
        positive("gradient_tolerance", self.gradient_tolerance)?;
        if self.multistart == 0 {
            return Err(Error::Domain("multistart must be at least 1".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::Domain("max_iterations must be at least 1".into()));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(Error::Domain(format!("level must lie in (0, 1), got {}", self.level)));
        }
        Ok(())
    }
}

/// Outcome of one restart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalMode {
    pub start: usize,
    pub params: TgiwParams,
    pub objective: f64,
    pub neg_log_lik: f64,
    pub at_boundary: bool,
    /// Score norm divided by the sample size.
    pub gradient_norm: f64,
    pub converged: bool,
    pub iterations: usize,
}

impl LocalMode {
    fn is_stationary(&self, tolerance: f64) -> bool {
        !self.at_boundary && self.gradient_norm <= tolerance
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub model: SubModel,
    pub mode: Mode,
    pub method: Method,
    pub solution: Solution,
    pub n: usize,
    pub params: TgiwParams,
    pub reduced: ReducedParams,
    pub free_params: Vec<Param>,
    pub estimates: Vec<f64>,
    pub neg_log_lik: f64,
    /// Value of the criterion that was minimized (`-loglik`, LSE or WLSE sum).
    pub objective: f64,
    pub converged: bool,
    pub iterations: usize,
    pub gradient_norm: f64,
    pub at_boundary: bool,
    pub level: f64,
    pub std_errors: Vec<Option<f64>>,
    pub conf_intervals: Vec<Option<(f64, f64)>>,
    pub information: Option<InformationMatrix>,
    /// Best edge optimum when it beats the reported stationary point.
    pub boundary_supremum: Option<LocalMode>,
    pub local_modes: Vec<LocalMode>,
    pub warnings: Vec<String>,
}

impl FitResult {
    pub fn log_likelihood(&self) -> f64 {
        -self.neg_log_lik
    }

    pub fn estimate(&self, param: Param) -> Option<f64> {
        self.free_params
            .iter()
            .position(|&p| p == param)
            .map(|i| self.estimates[i])
    }
}

/// Expected value `j / (n + 1)` of the j-th uniform order statistic.
fn plotting_position(j: usize, n: usize) -> f64 {
    j as f64 / (n + 1) as f64
}

/// `sum_j (F(x_(j)) - j/(n+1))^2`.
pub fn lse_objective(p: &TgiwParams, d: &Dataset) -> f64 {
    let n = d.len();
    d.values()
        .iter()
        .enumerate()
        .map(|(idx, &x)| (cdf_and_survival(p, x).0 - plotting_position(idx + 1, n)).powi(2))
        .sum()
}

/// Reciprocal variances `(n+1)^2 (n+2) / (j (n - j + 1))` of `F(x_(j))`.
pub fn wlse_weights(n: usize) -> Vec<f64> {
    let nf = n as f64;
    (1..=n)
        .map(|j| {
            let jf = j as f64;
            (nf + 1.0).powi(2) * (nf + 2.0) / (jf * (nf - jf + 1.0))
        })
        .collect()
}

pub fn wlse_objective(p: &TgiwParams, d: &Dataset) -> f64 {
    let n = d.len();
    d.values()
        .iter()
        .zip(wlse_weights(n))
        .enumerate()
        .map(|(idx, (&x, w))| w * (cdf_and_survival(p, x).0 - plotting_position(idx + 1, n)).powi(2))
        .sum()
}

pub fn fit(d: &Dataset, cfg: &FitConfig) -> Result<FitResult> {
    Fitter::new(d, cfg)?.run()
}

pub fn fit_mle(d: &Dataset, cfg: &FitConfig) -> Result<FitResult> {
    fit(d, &FitConfig { method: Method::Mle, ..cfg.clone() })
}

pub fn fit_lse(d: &Dataset, cfg: &FitConfig) -> Result<FitResult> {
    fit(d, &FitConfig { method: Method::Lse, ..cfg.clone() })
}

pub fn fit_wlse(d: &Dataset, cfg: &FitConfig) -> Result<FitResult> {
    fit(d, &FitConfig { method: Method::Wlse, ..cfg.clone() })
}

/// Observed information of `model` at `p`, over the free coordinates of `mode`.
pub fn observed_information(
    p: &TgiwParams,
    d: &Dataset,
    model: SubModel,
    mode: Mode,
) -> Result<InformationMatrix> {
    if p.lambda().abs() >= 1.0 && model.is_free(Param::Lambda) {
        return Err(Error::Domain(
            "observed information needs an interior lambda".into(),
        ));
    }
    observed_information_in(&Layout::new(model, mode), p, d)
}

/// Wald intervals at confidence `1 - level` for every free parameter of `fr`.
/// Parameters without a standard error (lambda on the edge) get `None`.
pub fn wald_intervals(fr: &FitResult, level: f64) -> Result<Vec<Option<(f64, f64)>>> {
    let info = fr
        .information
        .as_ref()
        .ok_or(Error::SingularInformation(f64::INFINITY))?;
    let cov = info.covariance()?;
    fr.free_params
        .iter()
        .zip(&fr.estimates)
        .map(|(param, &estimate)| {
            match info.params.iter().position(|p| p == param) {
                Some(k) => wald_interval(estimate, cov[k][k], level).map(Some),
                None => Ok(None),
            }
        })
        .collect()
}

struct Fitter<'a> {
    data: &'a Dataset,
    cfg: &'a FitConfig,
    layout: Layout,
}

impl<'a> Fitter<'a> {
    fn new(data: &'a Dataset, cfg: &'a FitConfig) -> Result<Self> {
        cfg.validate()?;
        let layout = Layout::new(cfg.model, cfg.mode);
        if data.len() <= layout.dim() {
            return Err(Error::Dataset(format!(
                "{} observations cannot determine {} free parameters",
                data.len(),
                layout.dim()
            )));
        }
        if data.is_degenerate() {
            return Err(Error::Dataset("all observations are identical".into()));
        }
        Ok(Self { data, cfg, layout })
    }

    fn objective(&self, p: &TgiwParams) -> f64 {
        match self.cfg.method {
            Method::Mle => -log_likelihood(p, self.data),
            Method::Lse => lse_objective(p, self.data),
            Method::Wlse => wlse_objective(p, self.data),
        }
    }

    fn simplex(&self) -> NelderMead {
        NelderMead {
            ftol: self.cfg.objective_tolerance,
            xtol: self.cfg.parameter_tolerance,
            max_iterations: self.cfg.max_iterations,
            ..NelderMead::default()
        }
    }

    /// Quantile-matching start under `lambda = 0`: beta from the quartiles,
    /// theta from the median.
    fn quantile_start(&self) -> Vec<f64> {
        let d = self.data;
        let fixed = self.cfg.model.fixed();
        let beta = fixed.beta.unwrap_or_else(|| {
            let spread = (d.empirical_quantile(0.75) / d.empirical_quantile(0.25)).ln();
            let target = 4f64.ln().ln() - (-(0.75f64).ln()).ln();
            if spread > 0.0 && spread.is_finite() {
                (target / spread).clamp(1e-3, 1e3)
            } else {
                1.0
            }
        });
        let median = d.empirical_quantile(0.5);
        let theta = (beta * median.ln() + 2f64.ln().ln()).exp();
        let alpha_fixed = fixed.alpha;
        let gamma_fixed = fixed.gamma;
        self.layout
            .natural_params()
            .into_iter()
            .map(|param| match param {
                Param::Theta => theta,
                Param::Beta => beta,
                Param::Lambda => 0.0,
                Param::Alpha => match gamma_fixed {
                    Some(g) => (g / theta).powf(1.0 / beta),
                    None => 1.0,
                },
                Param::Gamma => theta * alpha_fixed.unwrap_or(1.0).powf(beta),
            })
            .collect()
    }

    fn starts(&self) -> Vec<Vec<f64>> {
        let base = self.layout.unconstrain(&self.quantile_start());
        let mut rng = rng_from_seed(self.cfg.seed);
        let mut starts = vec![base.clone()];
        let lambda_idx = self.layout.lambda_index();
        // Fixed spread over the skewing parameter, which is where separate
        // likelihood modes tend to sit.
        if let Some(k) = lambda_idx {
            for lambda in [-0.8, -0.4, 0.4, 0.8] {
                let mut s = base.clone();
                s[k] = f64::atanh(lambda);
                starts.push(s);
            }
        }
        for _ in 0..self.cfg.multistart {
            let start = base
                .iter()
                .enumerate()
                .map(|(k, &b)| {
                    if Some(k) == lambda_idx {
                        rng.random_range(-2.0..2.0)
                    } else {
                        b + rng.random_range(-1.0..1.0)
                    }
                })
                .collect();
            starts.push(start);
        }
        starts
    }

    fn minimize_on(&self, layout: &Layout, start: &[f64]) -> (Vec<f64>, f64, usize, bool) {
        let nm = self.simplex();
        let f = |t: &[f64]| match layout.params_constrain(t) {
            Ok(p) => self.objective(&p),
            Err(_) => f64::INFINITY,
        };
        let first = nm.minimize(f, start);
        // A fresh simplex at the optimum guards against premature collapse.
        let second = nm.minimize(f, &first.x);
        (
            second.x,
            second.f,
            first.iterations + second.iterations,
            second.converged,
        )
    }

    fn local_search(&self, index: usize, start: &[f64]) -> Option<LocalMode> {
        let (t, _, mut iterations, mut converged) = self.minimize_on(&self.layout, start);
        let mut params = self.layout.params_constrain(&t).ok()?;
        let mut active = self.layout.clone();
        let mut at_boundary = false;
        if self.layout.lambda_free() && params.lambda().abs() > LAMBDA_BOUNDARY {
            let edge = params.lambda().signum();
            active = self.layout.with_lambda_pinned(edge);
            let t0 = active.unconstrain(&active.natural_values(&params));
            let (t, _, extra, ok) = self.minimize_on(&active, &t0);
            params = active.params_constrain(&t).ok()?;
            iterations += extra;
            converged = ok;
            at_boundary = true;
        }
        if self.cfg.method == Method::Mle {
            params = polish(&active, params, self.data);
        }
        let gradient_norm = norm(&active.gradient(&params, self.data)) / self.data.len() as f64;
        if self.cfg.method == Method::Mle {
            converged = converged && gradient_norm <= self.cfg.gradient_tolerance;
        }
        let objective = self.objective(&params);
        if !objective.is_finite() {
            return None;
        }
        Some(LocalMode {
            start: index,
            params,
            objective,
            neg_log_lik: -log_likelihood(&params, self.data),
            at_boundary,
            gradient_norm,
            converged,
            iterations,
        })
    }

    fn run(&self) -> Result<FitResult> {
        let modes: Vec<LocalMode> = self
            .starts()
            .iter()
            .enumerate()
            .filter_map(|(i, s)| self.local_search(i, s))
            .collect();
        let best_of = |candidates: &mut dyn Iterator<Item = &LocalMode>| -> Option<LocalMode> {
            candidates
                .fold(None::<&LocalMode>, |best, m| match best {
                    Some(b) if b.objective <= m.objective => Some(b),
                    _ => Some(m),
                })
                .cloned()
        };
        let global = best_of(&mut modes.iter())
            .ok_or_else(|| Error::Domain("objective is not finite at any start".into()))?;

        let mut warnings = Vec::new();
        let mut boundary_supremum = None;
        let selected = if self.cfg.method == Method::Mle && self.cfg.solution == Solution::Stationary {
            let tol = self.cfg.gradient_tolerance;
            match best_of(&mut modes.iter().filter(|m| m.is_stationary(tol))) {
                Some(root) => {
                    if global.at_boundary && global.objective < root.objective - self.cfg.objective_tolerance {
                        warnings.push(format!(
                            "likelihood is larger on the lambda = {} edge (-loglik {:.6}) than at the reported stationary point (-loglik {:.6})",
                            global.params.lambda(),
                            global.neg_log_lik,
                            root.neg_log_lik
                        ));
                        boundary_supremum = Some(global.clone());
                    }
                    root
                }
                None => {
                    warnings.push("no interior stationary point found; reporting the best value found".into());
                    global.clone()
                }
            }
        } else {
            global.clone()
        };
        self.finish(selected, modes, boundary_supremum, warnings)
    }

    fn finish(
        &self,
        selected: LocalMode,
        local_modes: Vec<LocalMode>,
        boundary_supremum: Option<LocalMode>,
        mut warnings: Vec<String>,
    ) -> Result<FitResult> {
        let p = selected.params;
        let free_params = self.layout.natural_params();
        let estimates = self.layout.natural_values(&p);
        let mut std_errors = vec![None; free_params.len()];
        let mut conf_intervals = vec![None; free_params.len()];
        let mut information = None;

        if selected.at_boundary {
            warnings.push(format!(
                "lambda estimate is on the edge of its range ({}); no interval is reported for it",
                p.lambda()
            ));
        }
        if self.cfg.method == Method::Mle {
            let info_layout = if selected.at_boundary {
                self.layout.with_lambda_pinned(p.lambda())
            } else {
                self.layout.clone()
            };
            match observed_information_in(&info_layout, &p, self.data) {
                Ok(info) => {
                    if info.is_ill_conditioned() {
                        let cond = info
                            .condition_number
                            .map_or_else(|| "infinite".to_string(), |c| format!("{c:.3e}"));
                        let mut msg = format!("observed information is ill-conditioned (condition number {cond})");
                        if self.cfg.mode == Mode::Full && free_params.contains(&Param::Alpha) && free_params.contains(&Param::Gamma) {
                            msg.push_str("; alpha and gamma enter only through gamma * alpha^(-beta), so they are not separately identified");
                        }
                        warnings.push(msg);
                    }
                    match info.standard_errors() {
                        Ok(se) => {
                            for (param, s) in info.params.iter().zip(se) {
                                if let Some(k) = free_params.iter().position(|q| q == param) {
                                    std_errors[k] = Some(s);
                                    conf_intervals[k] =
                                        Some(wald_interval(estimates[k], s * s, self.cfg.level)?);
                                }
                            }
                        }
                        Err(e) => warnings.push(format!("standard errors unavailable: {e}")),
                    }
                    information = Some(info);
                }
                Err(e) => warnings.push(format!("observed information unavailable: {e}")),
            }
        }
        for (param, ci) in free_params.iter().zip(&conf_intervals) {
            if let Some((lo, hi)) = *ci {
                let outside = match param {
                    Param::Lambda => lo < -1.0 || hi > 1.0,
                    _ => lo <= 0.0,
                };
                if outside {
                    warnings.push(format!(
                        "Wald interval for {param} [{lo:.6}, {hi:.6}] extends outside the parameter range"
                    ));
                }
            }
        }
        if !selected.converged {
            warnings.push("optimizer did not meet its convergence criteria".into());
        }

        Ok(FitResult {
            model: self.cfg.model,
            mode: self.cfg.mode,
            method: self.cfg.method,
            solution: self.cfg.solution,
            n: self.data.len(),
            params: p,
            reduced: p.reduce(),
            free_params,
            estimates,
            neg_log_lik: selected.neg_log_lik,
            objective: selected.objective,
            converged: selected.converged,
            iterations: selected.iterations,
            gradient_norm: selected.gradient_norm,
            at_boundary: selected.at_boundary,
            level: self.cfg.level,
            std_errors,
            conf_intervals,
            information,
            boundary_supremum,
            local_modes,
            warnings,
        })
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Newton refinement of a likelihood optimum using the analytic score and a
/// finite-difference Jacobian of it. Directions of (numerically) zero
/// curvature are skipped, so ridge points stay where they are.
fn polish(layout: &Layout, start: TgiwParams, d: &Dataset) -> TgiwParams {
    let dim = layout.dim();
    let mut v = layout.natural_values(&start);
    let mut current = start;
    let mut ll = log_likelihood(&current, d);
    for _ in 0..50 {
        let g = layout.gradient(&current, d);
        let gnorm = norm(&g);
        if gnorm < 1e-11 {
            break;
        }
        let mut jac = DMatrix::<f64>::zeros(dim, dim);
        for k in 0..dim {
            let h = 1e-6 * v[k].abs().max(1.0);
            let mut up = v.clone();
            let mut down = v.clone();
            up[k] += h;
            down[k] -= h;
            let (Ok(pu), Ok(pd)) = (layout.params_from_natural(&up), layout.params_from_natural(&down)) else {
                return current;
            };
            let (gu, gd) = (layout.gradient(&pu, d), layout.gradient(&pd, d));
            for r in 0..dim {
                jac[(r, k)] = (gu[r] - gd[r]) / (2.0 * h);
            }
        }
        let info = -(jac.clone() + jac.transpose()) * 0.5;
        let eigen = SymmetricEigen::new(info);
        let scale = eigen.eigenvalues.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if !(scale > 0.0 && scale.is_finite()) {
            break;
        }
        if eigen.eigenvalues.iter().any(|&mu| mu < -1e-6 * scale) {
            break; // not a local maximum
        }
        let mut step = vec![0.0; dim];
        for (k, &mu) in eigen.eigenvalues.iter().enumerate() {
            if mu <= 1e-6 * scale {
                continue;
            }
            let q = eigen.eigenvectors.column(k);
            let coeff = q.iter().zip(&g).map(|(a, b)| a * b).sum::<f64>() / mu;
            for (s, qi) in step.iter_mut().zip(q.iter()) {
                *s += coeff * qi;
            }
        }
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let trial: Vec<f64> = v.iter().zip(&step).map(|(a, s)| a + t * s).collect();
            if let Ok(p) = layout.params_from_natural(&trial) {
                let trial_ll = log_likelihood(&p, d);
                // Close to the optimum the likelihood change drops below its
                // rounding error, so a smaller score also counts as progress.
                let flat = (trial_ll - ll).abs() <= 1e-13 * ll.abs().max(1.0);
                if trial_ll >= ll || (flat && norm(&layout.gradient(&p, d)) < gnorm) {
                    v = trial;
                    current = p;
                    ll = trial_ll;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    current
}
