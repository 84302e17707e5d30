use thiserror::Error;

/// Errors raised by the distribution, estimation and model-selection routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("moment of order {order} does not exist (requires order < beta = {beta})")]
    MomentDoesNotExist { order: u32, beta: f64 },

    #[error("hazard overflow: survival underflows to zero at x = {0}")]
    HazardOverflow(f64),

    #[error("invalid order-statistic specification: {0}")]
    OrderSpec(String),

    #[error("parameter {name} is fixed by sub-model {model} and cannot be supplied")]
    FixedParameter {
        name: &'static str,
        model: &'static str,
    },

    #[error("parameter {name} is free in sub-model {model} and must be supplied")]
    MissingParameter {
        name: &'static str,
        model: &'static str,
    },

    #[error("invalid dataset: {0}")]
    Dataset(String),

    #[error("models are not nested: omega = {0} is negative")]
    NestingViolation(f64),

    #[error("observed information is singular (condition number {0:.3e})")]
    SingularInformation(f64),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
