//! Flat key=value scenario files.
//!
//! Keys: `a_m`, `R_m`, `L_m`, `phi_deg`, `dx_m`. `R_m` is required; the
//! rest default to the parallel-plate baseline (a 4e-7 m, L 1 m, phi 0,
//! dx 0). `#` starts a comment, unknown keys are rejected.

use crate::geometry::CavityConfig;
use thiserror::Error;

pub const DEFAULT_A_M: f64 = 4e-7;
pub const DEFAULT_L_M: f64 = 1.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigParseError {
    #[error("missing required key `{0}`")]
    MissingKey(&'static str),
    #[error("value `{value}` for key `{key}` is not a number")]
    MalformedNumber { key: String, value: String },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("line {0} is not a key=value pair")]
    MalformedLine(usize),
}

/// Parses a scenario document into an (unvalidated) configuration.
/// Geometric invariants are the business of `geometry::validate`.
pub fn parse_config(text: &str) -> Result<CavityConfig<f64>, ConfigParseError> {
    let mut a = DEFAULT_A_M;
    let mut r_wing: Option<f64> = None;
    let mut width = DEFAULT_L_M;
    let mut phi_deg = 0.0;
    let mut dx = 0.0;

    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or(ConfigParseError::MalformedLine(idx + 1))?;
        let key = key.trim();
        let value = value.trim();
        let number: f64 = value.parse().map_err(|_| ConfigParseError::MalformedNumber {
            key: key.to_string(),
            value: value.to_string(),
        })?;
        match key {
            "a_m" => a = number,
            "R_m" => r_wing = Some(number),
            "L_m" => width = number,
            "phi_deg" => phi_deg = number,
            "dx_m" => dx = number,
            other => return Err(ConfigParseError::UnknownKey(other.to_string())),
        }
    }

    let r_wing = r_wing.ok_or(ConfigParseError::MissingKey("R_m"))?;
    Ok(CavityConfig::new(a, r_wing, width, phi_deg.to_radians(), dx))
}
