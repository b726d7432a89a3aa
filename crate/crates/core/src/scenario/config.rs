//! JSON configuration. Frequencies are given in Hz and converted to rad/s.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::{GMode, Order, Scenario};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::models::{NmoParams, OmsParams};
use crate::optimize::OptimizerSettings;
use crate::spectra::{LossBudget, Normalization};

fn one() -> f64 {
    1.0
}

fn is_zero(v: &f64) -> bool {
    *v == 0.0
}

fn is_one(v: &f64) -> bool {
    *v == 1.0
}

fn is_false(v: &bool) -> bool {
    !*v
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OmsConfig {
    pub omega_m_hz: f64,
    pub gamma_m_hz: f64,
    pub kappa_om_hz: f64,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub delta_om_hz: f64,
    pub g_hz: f64,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub eta_esc: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub temperature_k: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass_kg: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NmoConfig {
    pub kappa_c_hz: f64,
    pub kappa_a_hz: f64,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub delta_c_hz: f64,
    pub delta_a_hz: f64,
    pub g_bs_hz: f64,
    pub g_dc_hz: f64,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub eta_esc: f64,
}

fn default_g_mode() -> GMode {
    GMode::Fixed
}

fn default_normalization() -> Normalization {
    Normalization::Dimensionless
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub order: Order,
    pub oms: OmsConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nmo: Option<NmoConfig>,
    #[serde(default)]
    pub losses: LossBudget,
    #[serde(default = "default_g_mode")]
    pub g_mode: GMode,
    #[serde(default)]
    pub grid: Grid,
    #[serde(default = "default_normalization")]
    pub normalization: Normalization,
    #[serde(default, skip_serializing_if = "is_false")]
    pub include_thermal: bool,
    #[serde(default)]
    pub optimizer: OptimizerSettings,
}

/// Config key that holds a given parameter.
fn key_path(name: &str) -> String {
    let key = match name {
        "omega_m" => "oms.omega_m_hz",
        "gamma_m" => "oms.gamma_m_hz",
        "kappa_om" => "oms.kappa_om_hz",
        "delta_om" => "oms.delta_om_hz",
        "g" => "oms.g_hz",
        "eta_esc_om" => "oms.eta_esc",
        "temperature" => "oms.temperature_k",
        "mass" => "oms.mass_kg",
        "kappa_c" => "nmo.kappa_c_hz",
        "kappa_a" => "nmo.kappa_a_hz",
        "delta_c" => "nmo.delta_c_hz",
        "delta_a" => "nmo.delta_a_hz",
        "g_bs" => "nmo.g_bs_hz",
        "g_dc" => "nmo.g_dc_hz",
        "eta_esc_c" => "nmo.eta_esc",
        "eta_prop" => "losses.eta_prop",
        "eta_det" => "losses.eta_det",
        other => other,
    };
    key.to_owned()
}

fn with_key_path(e: Error) -> Error {
    match e {
        Error::InvalidParameter { name, value, reason } | Error::Domain { name, value, reason } => Error::Config {
            path: key_path(name),
            message: format!("{value} is invalid: {reason}"),
        },
        Error::MissingMass => Error::Config {
            path: "oms.mass_kg".into(),
            message: "required for physical normalization".into(),
        },
        Error::MissingTemperature(why) => Error::Config {
            path: "oms.temperature_k".into(),
            message: format!("required: {why}"),
        },
        other => other,
    }
}

impl ScenarioConfig {
    pub fn to_scenario(&self) -> Result<Scenario> {
        let o = &self.oms;
        let oms = OmsParams {
            omega_m: TAU * o.omega_m_hz,
            gamma_m: TAU * o.gamma_m_hz,
            kappa_om: TAU * o.kappa_om_hz,
            delta_om: TAU * o.delta_om_hz,
            g: TAU * o.g_hz,
            eta_esc: o.eta_esc,
            temperature: o.temperature_k,
            mass: o.mass_kg,
        };
        let nmo = self.nmo.as_ref().map(|n| NmoParams {
            kappa_c: TAU * n.kappa_c_hz,
            kappa_a: TAU * n.kappa_a_hz,
            delta_c: TAU * n.delta_c_hz,
            delta_a: TAU * n.delta_a_hz,
            g_bs: TAU * n.g_bs_hz,
            g_dc: TAU * n.g_dc_hz,
            eta_esc: n.eta_esc,
        });
        let scenario = Scenario {
            label: self.label.clone().unwrap_or_else(|| format!("{:?}", self.order).to_lowercase()),
            order: self.order,
            oms,
            nmo,
            losses: self.losses,
            g_mode: self.g_mode,
            grid: self.grid,
            normalization: self.normalization,
            include_thermal: self.include_thermal,
            optimizer: self.optimizer,
        };
        scenario.validate().map_err(with_key_path)?;
        Ok(scenario)
    }

    pub fn from_scenario(s: &Scenario) -> Self {
        let o = &s.oms;
        Self {
            label: Some(s.label.clone()),
            order: s.order,
            oms: OmsConfig {
                omega_m_hz: o.omega_m / TAU,
                gamma_m_hz: o.gamma_m / TAU,
                kappa_om_hz: o.kappa_om / TAU,
                delta_om_hz: o.delta_om / TAU,
                g_hz: o.g / TAU,
                eta_esc: o.eta_esc,
                temperature_k: o.temperature,
                mass_kg: o.mass,
            },
            nmo: s.nmo.map(|n| NmoConfig {
                kappa_c_hz: n.kappa_c / TAU,
                kappa_a_hz: n.kappa_a / TAU,
                delta_c_hz: n.delta_c / TAU,
                delta_a_hz: n.delta_a / TAU,
                g_bs_hz: n.g_bs / TAU,
                g_dc_hz: n.g_dc / TAU,
                eta_esc: n.eta_esc,
            }),
            losses: s.losses,
            g_mode: s.g_mode,
            grid: s.grid,
            normalization: s.normalization,
            include_thermal: s.include_thermal,
            optimizer: s.optimizer,
        }
    }
}

/// Parses and validates a JSON scenario. Errors name the offending key.
pub fn parse_config(text: &str) -> Result<Scenario> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let cfg: ScenarioConfig = serde_path_to_error::deserialize(de).map_err(|e| Error::Config {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    cfg.to_scenario()
}

impl Scenario {
    /// Plausibility warnings that do not prevent evaluation.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        let o = &self.oms;
        if o.gamma_m > o.omega_m {
            w.push(format!(
                "oms.gamma_m_hz exceeds oms.omega_m_hz (Q_m = {:.3e}); check units",
                o.q_m()
            ));
        }
        if o.g > o.kappa_om {
            w.push("oms.g_hz exceeds oms.kappa_om_hz; the linearized model may not apply".into());
        }
        if let Some(n) = &self.nmo {
            if n.kappa_a >= o.omega_m {
                w.push("nmo.kappa_a_hz is not below oms.omega_m_hz; the ancilla is not sideband resolved".into());
            }
            if n.delta_a > 0.0 {
                w.push("nmo.delta_a_hz is positive; the ancilla mimics a positive mass".into());
            }
        }
        if !self.order.needs_nmo() && self.nmo.is_some() {
            w.push("nmo is ignored for order single-oms".into());
        }
        if self.order == Order::SingleOms && self.losses.eta_prop != 1.0 {
            w.push("losses.eta_prop is ignored for order single-oms".into());
        }
        if self.oms.temperature.is_some() && !self.include_thermal {
            w.push("oms.temperature_k is set but include_thermal is false".into());
        }
        w
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASELINE_SINGLE: &str = r#"{
        "order": "single-oms",
        "oms": {"omega_m_hz": 5e5, "gamma_m_hz": 500, "kappa_om_hz": 5e6, "g_hz": 5e5},
        "g_mode": "optimal"
    }"#;

    #[test]
    fn baseline_single() {
        let s = parse_config(BASELINE_SINGLE).unwrap();
        assert_eq!(s.order, Order::SingleOms);
        assert!((s.oms.q_m() - 1000.0).abs() < 1e-9);
        assert!((s.oms.omega_m - TAU * 5e5).abs() < 1e-6);
        assert_eq!(s.grid, Grid::default());
        assert!(s.warnings().is_empty());
    }

    #[test]
    fn unknown_key_named() {
        let text = BASELINE_SINGLE.replace("\"g_hz\"", "\"g_khz\"");
        match parse_config(&text) {
            Err(Error::Config { path, message }) => {
                assert!(path.starts_with("oms"), "{path}");
                assert!(message.contains("g_khz"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn wrong_type_named() {
        let text = BASELINE_SINGLE.replace("500,", "\"fast\",");
        match parse_config(&text) {
            Err(Error::Config { path, .. }) => assert_eq!(path, "oms.gamma_m_hz"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn missing_nmo_named() {
        let text = BASELINE_SINGLE.replace("single-oms", "nmo-oms");
        match parse_config(&text) {
            Err(Error::Config { path, .. }) => assert_eq!(path, "nmo"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn invalid_value_named() {
        let text = BASELINE_SINGLE.replace("\"gamma_m_hz\": 500", "\"gamma_m_hz\": -1");
        match parse_config(&text) {
            Err(e @ Error::Config { .. }) => {
                assert!(e.to_string().contains("oms.gamma_m_hz"));
                assert!(e.is_config());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unit_sanity_warning() {
        let text = BASELINE_SINGLE.replace("\"gamma_m_hz\": 500", "\"gamma_m_hz\": 6e5");
        let s = parse_config(&text).unwrap();
        assert!(s.warnings().iter().any(|w| w.contains("gamma_m_hz")));
    }

    #[test]
    fn config_round_trip() {
        let s = parse_config(BASELINE_SINGLE).unwrap();
        let cfg = ScenarioConfig::from_scenario(&s);
        let back = cfg.to_scenario().unwrap();
        assert!((back.oms.omega_m - s.oms.omega_m).abs() <= 1e-9 * s.oms.omega_m);
        let text = serde_json::to_string(&cfg).unwrap();
        let again: ScenarioConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(again, cfg);
    }
}
