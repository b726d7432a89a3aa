//! Figure presets, stored as ordinary config files under `presets/`.

use super::{parse_config, Scenario};
use crate::error::{Error, Result};

macro_rules! fixture {
    ($file:literal) => {
        include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/presets/", $file))
    };
}

const PRESETS: &[(&str, &[&str])] = &[
    (
        "fig2",
        &[fixture!("fig2-kappa-a-0.1.json"), fixture!("fig2-kappa-a-100.json")],
    ),
    (
        "fig3",
        &[
            fixture!("fig3-eps-delta-0.9.json"),
            fixture!("fig3-delta-0.9.json"),
            fixture!("fig3-eps-0.9.json"),
        ],
    ),
    (
        "fig4a",
        &[fixture!("fig4a-nmo-oms.json"), fixture!("fig4a-oms-nmo.json")],
    ),
    (
        "fig4b",
        &[fixture!("fig4b-nmo-oms.json"), fixture!("fig4b-oms-nmo.json")],
    ),
    (
        "fig5",
        &[
            fixture!("fig5-nmo-oms.json"),
            fixture!("fig5-oms-nmo.json"),
            fixture!("fig5-integrated.json"),
        ],
    ),
    ("sql-baseline", &[fixture!("sql-baseline.json")]),
];

pub fn preset_names() -> Vec<&'static str> {
    PRESETS.iter().map(|(n, _)| *n).collect()
}

/// Scenarios drawing the curves of one figure.
pub fn preset(name: &str) -> Result<Vec<Scenario>> {
    let (_, files) = PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::UnknownPreset(name.to_owned()))?;
    files.iter().map(|text| parse_config(text)).collect()
}
