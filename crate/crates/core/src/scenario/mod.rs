//! Declarative experiments: which subsystems, in which order, with which
//! losses, evaluated over which frequency grid.

mod config;
mod emit;
mod preset;
mod sweep;

pub use config::{parse_config, NmoConfig, OmsConfig, ScenarioConfig};
pub use emit::{emit, parse_result, Format, CSV_HEADER};
pub use preset::{preset, preset_names};
pub use sweep::{run_sweep, Metadata, SweepResult, SweepRow, FORMAT_VERSION};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::linsys::{added_force_noise, cascade, transfer, TransferSet};
use crate::models::{build_nmo, build_oms, meas_strength_om, NmoParams, OmsParams};
use crate::optimize::{minimize_log, GOptimum, OptimizerSettings};
use crate::spectra::{s_cascaded, s_single, thermal_term, CascadeOrder, LossBudget, Normalization};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Order {
    NmoOms,
    OmsNmo,
    SingleOms,
    /// The matched-measurement-strength, lossless-link limit of `nmo-oms`.
    IntegratedReference,
}

impl Order {
    pub fn needs_nmo(self) -> bool {
        self != Order::SingleOms
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GMode {
    /// Couplings exactly as configured.
    Fixed,
    /// Measurement strength optimized independently at each frequency.
    Optimal,
}

/// How the added noise is computed at a single point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Evaluation {
    /// Closed form where one applies, numeric pipeline otherwise.
    Auto,
    Numeric,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub label: String,
    pub order: Order,
    pub oms: OmsParams,
    pub nmo: Option<NmoParams>,
    pub losses: LossBudget,
    pub g_mode: GMode,
    pub grid: Grid,
    pub normalization: Normalization,
    pub include_thermal: bool,
    pub optimizer: OptimizerSettings,
}

/// A scenario reduced to a plain single system or two-system cascade.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Resolved {
    order: Option<CascadeOrder>,
    oms: OmsParams,
    nmo: Option<NmoParams>,
    losses: LossBudget,
}

impl Scenario {
    pub fn single(oms: OmsParams) -> Self {
        Self {
            label: "single-oms".into(),
            order: Order::SingleOms,
            oms,
            nmo: None,
            losses: LossBudget::default(),
            g_mode: GMode::Optimal,
            grid: Grid::default(),
            normalization: Normalization::Dimensionless,
            include_thermal: false,
            optimizer: OptimizerSettings::default(),
        }
    }

    pub fn cascade(order: Order, oms: OmsParams, nmo: NmoParams) -> Self {
        Self {
            label: format!("{order:?}").to_lowercase(),
            order,
            nmo: Some(nmo),
            ..Self::single(oms)
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.oms.validate()?;
        match (self.order.needs_nmo(), &self.nmo) {
            (true, None) => {
                return Err(Error::Config {
                    path: "nmo".into(),
                    message: "required for cascaded orders".into(),
                })
            }
            (_, Some(n)) => n.validate()?,
            _ => {}
        }
        self.losses.validate()?;
        self.grid.validate()?;
        self.optimizer.validate()?;
        if self.normalization == Normalization::Physical && self.oms.mass.is_none() {
            return Err(Error::MissingMass);
        }
        if self.include_thermal && self.oms.temperature.is_none() {
            return Err(Error::MissingTemperature("include_thermal is set"));
        }
        if self.g_mode == GMode::Optimal && self.oms.g <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "g",
                value: self.oms.g,
                reason: "optimizing the measurement strength needs a non-zero coupling",
            });
        }
        Ok(())
    }

    fn resolved(&self) -> Result<Resolved> {
        let nmo = || {
            self.nmo.ok_or(Error::Config {
                path: "nmo".into(),
                message: "required for cascaded orders".into(),
            })
        };
        Ok(match self.order {
            Order::SingleOms => Resolved {
                order: None,
                oms: self.oms,
                nmo: None,
                losses: self.losses,
            },
            Order::NmoOms | Order::OmsNmo => Resolved {
                order: Some(if self.order == Order::NmoOms {
                    CascadeOrder::NmoOms
                } else {
                    CascadeOrder::OmsNmo
                }),
                oms: self.oms,
                nmo: Some(nmo()?),
                losses: self.losses,
            },
            Order::IntegratedReference => {
                let base = nmo()?;
                Resolved {
                    order: Some(CascadeOrder::NmoOms),
                    oms: self.oms,
                    nmo: Some(NmoParams {
                        kappa_c: self.oms.kappa_om,
                        g_bs: self.oms.g / 2.0,
                        g_dc: self.oms.g / 2.0,
                        ..base
                    }),
                    losses: LossBudget {
                        eta_prop: 1.0,
                        ..self.losses
                    },
                }
            }
        })
    }

    /// The negative-mass oscillator actually used, after resolving the
    /// integrated reference.
    pub fn effective_nmo(&self) -> Result<Option<NmoParams>> {
        Ok(self.resolved()?.nmo)
    }

    pub fn thermal_n(&self) -> Result<f64> {
        thermal_term(&self.oms, self.include_thermal)
    }

    /// Whether a closed form covers this scenario at every frequency.
    pub fn closed_form_applies(&self) -> bool {
        let Ok(r) = self.resolved() else {
            return false;
        };
        let oms_ok = r.oms.delta_om == 0.0 && r.oms.eta_esc == 1.0 && r.losses.is_lossless();
        match r.nmo {
            None => oms_ok,
            Some(n) => {
                oms_ok && n.delta_c == 0.0 && n.eta_esc == 1.0 && n.g_bs == n.g_dc && r.oms.g > 0.0
            }
        }
    }

    /// Output transfer set with every coupling multiplied by `scale`.
    pub fn transfer_at(&self, omega: f64, scale: f64) -> Result<TransferSet> {
        let r = self.resolved()?;
        let oms = build_oms(&r.oms.with_coupling_scale(scale))?;
        let t_oms = transfer(&oms, omega)?;
        let chain = match (r.order, r.nmo) {
            (Some(order), Some(nmo)) => {
                let t_nmo = transfer(&build_nmo(&nmo.with_coupling_scale(scale))?, omega)?;
                let (first, second) = match order {
                    CascadeOrder::NmoOms => (t_nmo, t_oms),
                    CascadeOrder::OmsNmo => (t_oms, t_nmo),
                };
                cascade(&first.with_loss(r.losses.eta_prop, "propagation loss")?, &second)?
            }
            _ => t_oms,
        };
        chain.with_loss(r.losses.eta_det, "detection loss")
    }

    /// Dimensionless added noise with every coupling multiplied by `scale`.
    pub fn added_noise(&self, omega: f64, scale: f64, how: Evaluation) -> Result<f64> {
        let n_th = self.thermal_n()?;
        if how == Evaluation::Auto && self.closed_form_applies() {
            let r = self.resolved()?;
            let g_om = meas_strength_om(omega, &r.oms) * scale * scale;
            return match r.nmo {
                None => s_single(omega, &r.oms, g_om, self.include_thermal),
                Some(nmo) => Ok(n_th + s_cascaded(omega, &r.oms, &nmo, g_om)?),
            };
        }
        added_force_noise(&self.transfer_at(omega, scale)?, n_th)
    }

    /// Measurement strength `G_om(ω)` of the configured couplings.
    pub fn base_strength(&self, omega: f64) -> f64 {
        meas_strength_om(omega, &self.oms)
    }

    /// Minimizes the added noise over the sensor measurement strength `G_om(ω)`,
    /// scaling all couplings together.
    pub fn optimize_g(&self, omega: f64, how: Evaluation) -> Result<GOptimum> {
        let base = self.base_strength(omega);
        if !(base > 0.0) {
            return Err(Error::InvalidParameter {
                name: "g",
                value: self.oms.g,
                reason: "optimizing the measurement strength needs a non-zero coupling",
            });
        }
        let rate = self.oms.gamma_om();
        let (lo, hi) = (rate * self.optimizer.lower, rate * self.optimizer.upper);
        minimize_log(
            |g| self.added_noise(omega, (g / base).sqrt(), how),
            lo,
            hi,
            &self.optimizer,
            omega,
        )
    }
}
