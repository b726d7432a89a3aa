use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Spacing {
    Log,
    Linear,
}

/// Frequency grid in units of the mechanical resonance frequency.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl Default for Grid {
    fn default() -> Self {
        Self {
            min: 1e-3,
            max: 1e1,
            points: 400,
            spacing: Spacing::Log,
        }
    }
}

impl Grid {
    pub fn log(min: f64, max: f64, points: usize) -> Self {
        Self {
            min,
            max,
            points,
            spacing: Spacing::Log,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |path: &str, message: &str| {
            Err(Error::Config {
                path: path.into(),
                message: message.into(),
            })
        };
        if !(self.min.is_finite() && self.max.is_finite()) {
            return bad("grid", "bounds must be finite");
        }
        if !(self.min < self.max) {
            return bad("grid.min", "must be smaller than grid.max");
        }
        if self.points < 2 {
            return bad("grid.points", "need at least 2 points");
        }
        if self.spacing == Spacing::Log && self.min <= 0.0 {
            return bad("grid.min", "log spacing needs a positive lower bound");
        }
        if self.spacing == Spacing::Linear && self.min < 0.0 {
            return bad("grid.min", "frequencies must be non-negative");
        }
        Ok(())
    }

    /// Grid points in units of ω_m, strictly increasing.
    pub fn normalized(&self) -> Vec<f64> {
        let n = self.points;
        let last = (n - 1) as f64;
        match self.spacing {
            Spacing::Linear => (0..n)
                .map(|i| self.min + (self.max - self.min) * i as f64 / last)
                .collect(),
            Spacing::Log => {
                let (lo, hi) = (self.min.log10(), self.max.log10());
                (0..n)
                    .map(|i| 10f64.powf(lo + (hi - lo) * i as f64 / last))
                    .collect()
            }
        }
    }

    /// Grid points as angular frequencies for a resonance `omega_m` (rad/s).
    pub fn omegas(&self, omega_m: f64) -> Vec<f64> {
        self.normalized().into_iter().map(|x| x * omega_m).collect()
    }
}
