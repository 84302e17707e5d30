//! Free-coordinate bookkeeping for a (sub-model, mode) pair.
//!
//! Three views of the same point are used: the [`TgiwParams`] value, the
//! vector of free natural coordinates (what information matrices and Wald
//! intervals refer to) and the unconstrained vector the simplex searches over
//! (`ln` for positive parameters, `atanh` for lambda).

use super::Mode;
use crate::dataset::Dataset;
use crate::error::Result;
use crate::estimation::likelihood::score;
use crate::params::{Param, SubModel, TgiwParams};

/// Largest `|atanh(lambda)|` handed to the optimizer; `tanh` is exactly 1 beyond this.
const ATANH_LIMIT: f64 = 20.0;

#[derive(Debug, Clone)]
pub(crate) struct Layout {
    model: SubModel,
    mode: Mode,
    coords: Vec<Param>,
    lambda_pin: Option<f64>,
}

impl Layout {
    pub fn new(model: SubModel, mode: Mode) -> Self {
        let coords = match mode {
            Mode::Reduced => model.reduced_free_params(),
            Mode::Full => model.free_params(),
        };
        Self {
            model,
            mode,
            coords,
            lambda_pin: None,
        }
    }

    /// Same layout with lambda held at `value`.
    pub fn with_lambda_pinned(&self, value: f64) -> Self {
        Self {
            coords: self
                .coords
                .iter()
                .copied()
                .filter(|&c| c != Param::Lambda)
                .collect(),
            lambda_pin: Some(value),
            ..self.clone()
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn lambda_free(&self) -> bool {
        self.coords.contains(&Param::Lambda)
    }

    pub fn lambda_index(&self) -> Option<usize> {
        self.coords.iter().position(|&c| c == Param::Lambda)
    }

    pub fn natural_params(&self) -> Vec<Param> {
        self.coords.clone()
    }

    fn fixed_or(&self, param: Param, default: f64) -> f64 {
        self.model.fixed().get(param).unwrap_or(default)
    }

    pub fn natural_values(&self, p: &TgiwParams) -> Vec<f64> {
        let theta = p.reduce().theta();
        self.coords
            .iter()
            .map(|c| match c {
                Param::Alpha => p.alpha(),
                Param::Beta => p.beta(),
                Param::Gamma => p.gamma(),
                Param::Lambda => p.lambda(),
                Param::Theta => theta,
            })
            .collect()
    }

    pub fn params_from_natural(&self, v: &[f64]) -> Result<TgiwParams> {
        let value = |param: Param| self.coords.iter().position(|&c| c == param).map(|i| v[i]);
        let lambda = value(Param::Lambda)
            .or(self.lambda_pin)
            .unwrap_or_else(|| self.fixed_or(Param::Lambda, 0.0));
        let beta = value(Param::Beta).unwrap_or_else(|| self.fixed_or(Param::Beta, 1.0));
        match self.mode {
            Mode::Reduced => {
                let theta = value(Param::Theta).expect("theta is always free in reduced mode");
                TgiwParams::new(1.0, beta, theta, lambda)
            }
            Mode::Full => {
                let alpha = value(Param::Alpha).unwrap_or_else(|| self.fixed_or(Param::Alpha, 1.0));
                let gamma = value(Param::Gamma).unwrap_or_else(|| self.fixed_or(Param::Gamma, 1.0));
                TgiwParams::new(alpha, beta, gamma, lambda)
            }
        }
    }

    pub fn unconstrain(&self, v: &[f64]) -> Vec<f64> {
        self.coords
            .iter()
            .zip(v)
            .map(|(c, &x)| match c {
                Param::Lambda => x.clamp(-1.0, 1.0).atanh().clamp(-ATANH_LIMIT, ATANH_LIMIT),
                _ => x.ln(),
            })
            .collect()
    }

    pub fn constrain(&self, t: &[f64]) -> Vec<f64> {
        self.coords
            .iter()
            .zip(t)
            .map(|(c, &x)| match c {
                Param::Lambda => x.clamp(-ATANH_LIMIT, ATANH_LIMIT).tanh(),
                _ => x.exp(),
            })
            .collect()
    }

    pub fn params_constrain(&self, t: &[f64]) -> Result<TgiwParams> {
        self.params_from_natural(&self.constrain(t))
    }

    /// Gradient of the log-likelihood over the free natural coordinates.
    pub fn gradient(&self, p: &TgiwParams, d: &Dataset) -> Vec<f64> {
        let full = score(p, d);
        self.coords
            .iter()
            .map(|c| match c {
                Param::Alpha => full[0],
                Param::Beta => full[1],
                Param::Gamma => full[2],
                Param::Lambda => full[3],
                // Reduced points have alpha = 1 and gamma = theta.
                Param::Theta => full[2],
            })
            .collect()
    }
}
