//! One-dimensional minimization of a positive objective over a logarithmic
//! bracket: a coarse scan followed by golden-section refinement.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OptimizerSettings {
    /// Lower end of the bracket, as a multiple of the reference rate.
    pub lower: f64,
    /// Upper end of the bracket, as a multiple of the reference rate.
    pub upper: f64,
    pub points_per_decade: f64,
    /// Width in decades at which refinement stops.
    pub log_tolerance: f64,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        Self {
            lower: 1e-6,
            upper: 1e9,
            points_per_decade: 4.0,
            log_tolerance: 1e-6,
        }
    }
}

impl OptimizerSettings {
    pub fn validate(&self) -> Result<()> {
        let bad = |path: &str, message: &str| {
            Err(Error::Config {
                path: format!("optimizer.{path}"),
                message: message.into(),
            })
        };
        if !(self.lower > 0.0 && self.lower.is_finite()) {
            return bad("lower", "must be positive");
        }
        if !(self.upper > self.lower && self.upper.is_finite()) {
            return bad("upper", "must exceed optimizer.lower");
        }
        if !(self.points_per_decade >= 1.0 && self.points_per_decade <= 1e3) {
            return bad("points_per_decade", "must lie in [1, 1000]");
        }
        if !(self.log_tolerance > 0.0 && self.log_tolerance < 1.0) {
            return bad("log_tolerance", "must lie in (0, 1)");
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GOptimum {
    pub g_opt: f64,
    pub s_min: f64,
    /// The minimum sits at an end of the bracket, so the objective may keep
    /// decreasing outside it.
    pub at_boundary: bool,
    pub evaluations: usize,
}

impl GOptimum {
    pub fn require_interior(self, omega: f64) -> Result<Self> {
        if self.at_boundary {
            Err(Error::NotBracketed { omega })
        } else {
            Ok(self)
        }
    }
}

fn is_infeasible(e: &Error) -> bool {
    matches!(e, Error::SingularResolvent { .. } | Error::VanishingCoefficient { .. })
}

/// Minimizes `f(G)` for `G` in `[lo, hi]`. Points where the engine reports a
/// singular resolvent or a vanishing signal are skipped; other errors abort.
/// `omega` only labels errors.
pub fn minimize_log<F>(f: F, lo: f64, hi: f64, settings: &OptimizerSettings, omega: f64) -> Result<GOptimum>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut evaluations = 0;
    let mut eval = |x: f64| -> Result<f64> {
        evaluations += 1;
        match f(10f64.powf(x)) {
            Ok(v) if v.is_finite() => Ok(v),
            Ok(_) => Ok(f64::INFINITY),
            Err(e) if is_infeasible(&e) => Ok(f64::INFINITY),
            Err(e) => Err(e),
        }
    };

    let (a, b) = (lo.log10(), hi.log10());
    let steps = ((b - a) * settings.points_per_decade).ceil().max(2.0) as usize;
    let xs: Vec<f64> = (0..=steps).map(|i| a + (b - a) * i as f64 / steps as f64).collect();
    let mut ys = Vec::with_capacity(xs.len());
    for &x in &xs {
        ys.push(eval(x)?);
    }
    let best = ys
        .iter()
        .enumerate()
        .filter(|(_, y)| y.is_finite())
        .min_by(|p, q| p.1.total_cmp(q.1))
        .map(|(i, _)| i)
        .ok_or(Error::NotBracketed { omega })?;

    let (mut left, mut right) = (xs[best.saturating_sub(1)], xs[(best + 1).min(steps)]);
    let (mut x_best, mut y_best) = (xs[best], ys[best]);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = right - inv_phi * (right - left);
    let mut d = left + inv_phi * (right - left);
    let (mut fc, mut fd) = (eval(c)?, eval(d)?);
    while right - left > settings.log_tolerance {
        if fc <= fd {
            right = d;
            d = c;
            fd = fc;
            c = right - inv_phi * (right - left);
            fc = eval(c)?;
        } else {
            left = c;
            c = d;
            fc = fd;
            d = left + inv_phi * (right - left);
            fd = eval(d)?;
        }
        for (x, y) in [(c, fc), (d, fd)] {
            if y < y_best {
                x_best = x;
                y_best = y;
            }
        }
    }

    let edge = 0.5 * (b - a) / steps as f64;
    let at_boundary = x_best - a < edge || b - x_best < edge;
    Ok(GOptimum {
        g_opt: 10f64.powf(x_best),
        s_min: y_best,
        at_boundary,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_interior_minimum() {
        // a/G + bG has its minimum 2√(ab) at √(a/b)
        let (a, b) = (3.0, 0.02);
        let opt = minimize_log(|g| Ok(a / g + b * g), 1e-6, 1e6, &OptimizerSettings::default(), 0.0).unwrap();
        assert!(((opt.g_opt - (a / b).sqrt()) / (a / b).sqrt()).abs() < 1e-5);
        assert!((opt.s_min - 2.0 * (a * b).sqrt()).abs() < 1e-10);
        assert!(!opt.at_boundary);
        assert!(opt.require_interior(0.0).is_ok());
    }

    #[test]
    fn monotone_objective_reports_boundary() {
        let opt = minimize_log(|g| Ok(1.0 + 1.0 / g), 1e-3, 1e3, &OptimizerSettings::default(), 2.0).unwrap();
        assert!(opt.at_boundary);
        assert!((opt.g_opt - 1e3).abs() < 1e-2);
        assert!(matches!(opt.require_interior(2.0), Err(Error::NotBracketed { .. })));
    }

    #[test]
    fn skips_singular_points() {
        let f = |g: f64| {
            if g > 10.0 {
                Err(Error::SingularResolvent {
                    omega: 0.0,
                    condition: 1e13,
                })
            } else {
                Ok((g.log10() - 0.5).powi(2))
            }
        };
        let opt = minimize_log(f, 1e-3, 1e3, &OptimizerSettings::default(), 0.0).unwrap();
        assert!((opt.g_opt.log10() - 0.5).abs() < 1e-5);
    }

    #[test]
    fn all_infeasible_is_not_bracketed() {
        let f = |_: f64| -> Result<f64> {
            Err(Error::VanishingCoefficient {
                omega: 0.0,
                coefficient: 0.0,
            })
        };
        assert!(matches!(
            minimize_log(f, 1.0, 10.0, &OptimizerSettings::default(), 0.0),
            Err(Error::NotBracketed { .. })
        ));
    }

    #[test]
    fn other_errors_abort() {
        let f = |_: f64| -> Result<f64> { Err(Error::MissingMass) };
        assert!(matches!(
            minimize_log(f, 1.0, 10.0, &OptimizerSettings::default(), 0.0),
            Err(Error::MissingMass)
        ));
    }

    #[test]
    fn settings_validation() {
        let mut s = OptimizerSettings::default();
        assert!(s.validate().is_ok());
        s.upper = s.lower;
        assert!(s.validate().is_err());
    }
}
