//! Scenario JSON: `{txs: [{pos, vel}], rxs: [...], target: {pos, vel},
//! sigma0, R}` with positions in meters and velocities in meters/second.

use std::path::Path;

use nalgebra::Vector3;
use serde::Deserialize;

use mimo_crlb::{PlatformState, Scenario};

use crate::error::CliError;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PlatformJson {
    pos: [f64; 3],
    vel: [f64; 3],
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioJson {
    txs: Vec<PlatformJson>,
    rxs: Vec<PlatformJson>,
    target: PlatformJson,
    sigma0: f64,
    #[serde(rename = "R")]
    radius: f64,
}

fn platform(p: &PlatformJson) -> Result<PlatformState, CliError> {
    Ok(PlatformState::new(Vector3::from(p.pos), Vector3::from(p.vel))?)
}

/// Loads a scenario file, optionally overriding its noise constant.
pub fn load(path: &Path, sigma0_override: Option<f64>) -> Result<Scenario, CliError> {
    let text = std::fs::read_to_string(path)?;
    let parsed: ScenarioJson = serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    let txs = parsed.txs.iter().map(platform).collect::<Result<Vec<_>, _>>()?;
    let rxs = parsed.rxs.iter().map(platform).collect::<Result<Vec<_>, _>>()?;
    let target = platform(&parsed.target)?;
    let sigma0 = sigma0_override.unwrap_or(parsed.sigma0);
    Ok(Scenario::new(txs, rxs, target, sigma0, parsed.radius)?)
}
