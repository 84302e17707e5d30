use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sorted, validated sample of positive observations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    values: Vec<f64>,
    label: String,
}

impl Dataset {
    /// Validates and sorts `values` ascending (stable, so ties keep input order).
    pub fn new(mut values: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Dataset("no observations".into()));
        }
        if let Some((idx, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v > 0.0))
        {
            return Err(Error::Dataset(format!(
                "observation {} is {v}; values must be finite and positive",
                idx + 1
            )));
        }
        values.sort_by(f64::total_cmp);
        Ok(Self {
            values,
            label: label.into(),
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Empirical quantile by linear interpolation between order statistics.
    pub fn empirical_quantile(&self, q: f64) -> f64 {
        let n = self.values.len();
        let pos = q.clamp(0.0, 1.0) * (n - 1) as f64;
        let lo = pos.floor() as usize;
        let hi = pos.ceil() as usize;
        let frac = pos - lo as f64;
        self.values[lo] * (1.0 - frac) + self.values[hi] * frac
    }

    /// True when every observation is identical.
    pub fn is_degenerate(&self) -> bool {
        self.values.first() == self.values.last()
    }
}
