use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::SweepResult;
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "omega_over_omega_m,S_F,S_SQL,S_CQNC,ratio,G_opt";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Config {
                path: "format".into(),
                message: format!("unknown format `{other}`, expected csv or json"),
            }),
        }
    }
}

fn csv(result: &SweepResult) -> String {
    let mut out = String::with_capacity(96 * (result.rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in &result.rows {
        let _ = write!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},",
            r.omega_over_omega_m, r.s_f, r.s_sql, r.s_cqnc, r.ratio
        );
        if let Some(g) = r.g_opt {
            let _ = write!(out, "{g:.16e}");
        }
        out.push('\n');
    }
    out
}

pub fn emit(result: &SweepResult, format: Format) -> Result<String> {
    match format {
        Format::Csv => Ok(csv(result)),
        Format::Json => {
            let mut text = serde_json::to_string_pretty(result)?;
            text.push('\n');
            Ok(text)
        }
    }
}

/// Reads back a result written with [`Format::Json`].
pub fn parse_result(text: &str) -> Result<SweepResult> {
    Ok(serde_json::from_str(text)?)
}
