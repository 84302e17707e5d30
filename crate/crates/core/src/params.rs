//! Parameter containers for the transmuted generalized inverse Weibull family.
//!
//! The four-parameter form `(alpha, beta, gamma, lambda)` enters the
//! distribution only through `theta = gamma * alpha^(-beta)`, `beta` and
//! `lambda`, so [`ReducedParams`] is the identifiable coordinate system used
//! for fitting by default.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and strictly positive",
        })
    }
}

fn check_lambda(value: f64) -> Result<()> {
    if value.is_finite() && (-1.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "lambda",
            value,
            reason: "must lie in [-1, 1]",
        })
    }
}

/// Parameter point `(alpha, beta, gamma, lambda)`.
///
/// `alpha` is a scale (in reciprocal units of x), `beta` and `gamma` are shape
/// parameters and `lambda` is the transmutation parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct TgiwParams {
    alpha: f64,
    beta: f64,
    gamma: f64,
    lambda: f64,
}

#[derive(Deserialize)]
struct RawParams {
    alpha: f64,
    beta: f64,
    gamma: f64,
    lambda: f64,
}

impl TryFrom<RawParams> for TgiwParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        TgiwParams::new(raw.alpha, raw.beta, raw.gamma, raw.lambda)
    }
}

impl TgiwParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64, lambda: f64) -> Result<Self> {
        check_positive("alpha", alpha)?;
        check_positive("beta", beta)?;
        check_positive("gamma", gamma)?;
        check_lambda(lambda)?;
        Ok(Self {
            alpha,
            beta,
            gamma,
            lambda,
        })
    }

    /// The untransmuted base distribution (`lambda = 0`).
    pub fn giw(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        Self::new(alpha, beta, gamma, 0.0)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn with_lambda(self, lambda: f64) -> Result<Self> {
        Self::new(self.alpha, self.beta, self.gamma, lambda)
    }

    /// Collapse the `alpha`/`gamma` pair into `theta = gamma * alpha^(-beta)`.
    pub fn reduce(&self) -> ReducedParams {
        ReducedParams {
            theta: self.gamma * self.alpha.powf(-self.beta),
            beta: self.beta,
            lambda: self.lambda,
        }
    }
}

impl fmt::Display for TgiwParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "alpha = {}, beta = {}, gamma = {}, lambda = {}",
            self.alpha, self.beta, self.gamma, self.lambda
        )
    }
}

/// Identifiable parameter point `(theta, beta, lambda)` with `theta = gamma * alpha^(-beta)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawReduced")]
pub struct ReducedParams {
    theta: f64,
    beta: f64,
    lambda: f64,
}

#[derive(Deserialize)]
struct RawReduced {
    theta: f64,
    beta: f64,
    lambda: f64,
}

impl TryFrom<RawReduced> for ReducedParams {
    type Error = Error;

    fn try_from(raw: RawReduced) -> Result<Self> {
        ReducedParams::new(raw.theta, raw.beta, raw.lambda)
    }
}

impl ReducedParams {
    pub fn new(theta: f64, beta: f64, lambda: f64) -> Result<Self> {
        check_positive("theta", theta)?;
        check_positive("beta", beta)?;
        check_lambda(lambda)?;
        Ok(Self {
            theta,
            beta,
            lambda,
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Representative four-parameter point with `alpha = 1` and `gamma = theta`.
    pub fn expand(&self) -> TgiwParams {
        TgiwParams {
            alpha: 1.0,
            beta: self.beta,
            gamma: self.theta,
            lambda: self.lambda,
        }
    }
}

impl From<ReducedParams> for TgiwParams {
    fn from(rp: ReducedParams) -> Self {
        rp.expand()
    }
}

/// Named members of the family, each defined by fixing some parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubModel {
    Tgiw,
    Giw,
    Tiw,
    Iw,
    Tie,
    Ie,
    Tir,
    Ir,
    TFrechet,
    Frechet,
}

/// Parameter values pinned by a sub-model; `None` means free.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ParamSet {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    pub lambda: Option<f64>,
}

impl ParamSet {
    pub fn get(&self, param: Param) -> Option<f64> {
        match param {
            Param::Alpha => self.alpha,
            Param::Beta => self.beta,
            Param::Gamma => self.gamma,
            Param::Lambda => self.lambda,
            Param::Theta => None,
        }
    }

    fn set(&mut self, param: Param, value: f64) {
        match param {
            Param::Alpha => self.alpha = Some(value),
            Param::Beta => self.beta = Some(value),
            Param::Gamma => self.gamma = Some(value),
            Param::Lambda => self.lambda = Some(value),
            Param::Theta => {}
        }
    }
}

/// Names of the scalar parameters, including the combined `theta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Param {
    Alpha,
    Beta,
    Gamma,
    Lambda,
    Theta,
}

impl Param {
    pub const NATURAL: [Param; 4] = [Param::Alpha, Param::Beta, Param::Gamma, Param::Lambda];

    pub fn name(self) -> &'static str {
        match self {
            Param::Alpha => "alpha",
            Param::Beta => "beta",
            Param::Gamma => "gamma",
            Param::Lambda => "lambda",
            Param::Theta => "theta",
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl SubModel {
    pub const ALL: [SubModel; 10] = [
        SubModel::Tgiw,
        SubModel::Giw,
        SubModel::Tiw,
        SubModel::Iw,
        SubModel::Tie,
        SubModel::Ie,
        SubModel::Tir,
        SubModel::Ir,
        SubModel::TFrechet,
        SubModel::Frechet,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SubModel::Tgiw => "TGIW",
            SubModel::Giw => "GIW",
            SubModel::Tiw => "TIW",
            SubModel::Iw => "IW",
            SubModel::Tie => "TIE",
            SubModel::Ie => "IE",
            SubModel::Tir => "TIR",
            SubModel::Ir => "IR",
            SubModel::TFrechet => "TFrechet",
            SubModel::Frechet => "Frechet",
        }
    }

    /// Parse a case-insensitive model tag such as `tgiw` or `frechet`.
    pub fn parse(tag: &str) -> Option<Self> {
        let tag = tag.trim();
        Self::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(tag))
    }

    pub fn fixed(self) -> ParamSet {
        let mut set = ParamSet::default();
        let pins: &[(Param, f64)] = match self {
            SubModel::Tgiw => &[],
            SubModel::Giw => &[(Param::Lambda, 0.0)],
            SubModel::Tiw => &[(Param::Gamma, 1.0)],
            SubModel::Iw => &[(Param::Gamma, 1.0), (Param::Lambda, 0.0)],
            SubModel::Tie => &[(Param::Beta, 1.0), (Param::Gamma, 1.0)],
            SubModel::Ie => &[(Param::Beta, 1.0), (Param::Gamma, 1.0), (Param::Lambda, 0.0)],
            SubModel::Tir => &[(Param::Beta, 2.0), (Param::Gamma, 1.0)],
            SubModel::Ir => &[(Param::Beta, 2.0), (Param::Gamma, 1.0), (Param::Lambda, 0.0)],
            SubModel::TFrechet => &[(Param::Alpha, 1.0)],
            SubModel::Frechet => &[(Param::Alpha, 1.0), (Param::Lambda, 0.0)],
        };
        for &(param, value) in pins {
            set.set(param, value);
        }
        set
    }

    pub fn is_free(self, param: Param) -> bool {
        self.fixed().get(param).is_none()
    }

    /// Free natural parameters, in `alpha, beta, gamma, lambda` order.
    pub fn free_params(self) -> Vec<Param> {
        Param::NATURAL
            .into_iter()
            .filter(|&p| self.is_free(p))
            .collect()
    }

    /// Free parameters of the identifiable `(theta, beta, lambda)` form.
    pub fn reduced_free_params(self) -> Vec<Param> {
        let mut out = vec![Param::Theta];
        if self.is_free(Param::Beta) {
            out.push(Param::Beta);
        }
        if self.is_free(Param::Lambda) {
            out.push(Param::Lambda);
        }
        out
    }

    /// Parameter count as usually quoted for the model (free natural parameters).
    pub fn nominal_k(self) -> usize {
        self.free_params().len()
    }

    /// Number of identifiable free parameters.
    pub fn reduced_k(self) -> usize {
        self.reduced_free_params().len()
    }

    /// True when every constraint of `other` is also imposed by `self`, so
    /// that `self` is a special case of `other`.
    pub fn is_nested_in(self, other: SubModel) -> bool {
        if self == other {
            return false;
        }
        let mine = self.fixed();
        let theirs = other.fixed();
        Param::NATURAL
            .into_iter()
            .all(|p| match theirs.get(p) {
                Some(v) => mine.get(p) == Some(v),
                None => true,
            })
    }

    /// Apply the sub-model constraints to a set of free values.
    pub fn constrain(self, free: ParamSet) -> Result<TgiwParams> {
        let fixed = self.fixed();
        let mut values = [0.0; 4];
        for (slot, param) in values.iter_mut().zip(Param::NATURAL) {
            *slot = match (fixed.get(param), free.get(param)) {
                (Some(_), Some(_)) => {
                    return Err(Error::FixedParameter {
                        name: param.name(),
                        model: self.name(),
                    })
                }
                (Some(v), None) | (None, Some(v)) => v,
                (None, None) => {
                    return Err(Error::MissingParameter {
                        name: param.name(),
                        model: self.name(),
                    })
                }
            };
        }
        TgiwParams::new(values[0], values[1], values[2], values[3])
    }
}

impl fmt::Display for SubModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
