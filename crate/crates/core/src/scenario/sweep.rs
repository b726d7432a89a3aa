use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Evaluation, GMode, Scenario, ScenarioConfig};
use crate::error::Result;
use crate::models::{check_matching, MatchingReport};
use crate::spectra::{cooperativity, s_cqnc, s_sql};

pub const FORMAT_VERSION: &str = "1";

/// Tolerance used for the matching report attached to sweep results.
const MATCHING_TOL: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub omega_over_omega_m: f64,
    #[serde(rename = "S_F")]
    pub s_f: f64,
    #[serde(rename = "S_SQL")]
    pub s_sql: f64,
    #[serde(rename = "S_CQNC")]
    pub s_cqnc: f64,
    pub ratio: f64,
    /// Optimal measurement strength in units of ω_m.
    #[serde(rename = "G_opt")]
    pub g_opt: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub matching: Option<MatchingReport>,
    pub cooperativity: Option<f64>,
    pub warnings: Vec<String>,
    pub generated_unix_s: u64,
    pub format_version: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub scenario: ScenarioConfig,
    pub rows: Vec<SweepRow>,
    pub metadata: Metadata,
}

fn row(s: &Scenario, x: f64, factor: f64) -> Result<SweepRow> {
    let omega = x * s.oms.omega_m;
    let (s_f, g_opt) = match s.g_mode {
        GMode::Fixed => (s.added_noise(omega, 1.0, Evaluation::Auto)?, None),
        GMode::Optimal => {
            let opt = s.optimize_g(omega, Evaluation::Auto)?;
            (opt.s_min, Some(opt.g_opt / s.oms.omega_m))
        }
    };
    let sql = s_sql(omega, &s.oms);
    Ok(SweepRow {
        omega_over_omega_m: x,
        s_f: s_f * factor,
        s_sql: sql * factor,
        s_cqnc: s_cqnc(omega, &s.oms) * factor,
        ratio: s_f / sql,
        g_opt,
    })
}

/// Evaluates the scenario on its grid. Rows are computed in parallel and
/// returned in grid order.
pub fn run_sweep(s: &Scenario) -> Result<SweepResult> {
    s.validate()?;
    let factor = s.normalization.factor(&s.oms)?;
    let rows = s
        .grid
        .normalized()
        .into_par_iter()
        .map(|x| row(s, x, factor).map_err(|e| e.at_frequency(x)))
        .collect::<Result<Vec<_>>>()?;
    let matching = s
        .effective_nmo()?
        .map(|nmo| check_matching(&s.oms, &nmo, MATCHING_TOL));
    let cooperativity = s.oms.temperature.map(|t| cooperativity(&s.oms, t)).transpose()?;
    let generated_unix_s = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    Ok(SweepResult {
        scenario: ScenarioConfig::from_scenario(s),
        rows,
        metadata: Metadata {
            matching,
            cooperativity,
            warnings: s.warnings(),
            generated_unix_s,
            format_version: FORMAT_VERSION.into(),
        },
    })
}
