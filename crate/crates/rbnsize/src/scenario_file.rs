//! Versioned simulation scenario files (TOML). The format is described in
//! `docs/scenario-format.md`.

use std::path::Path;

use rbnsize_core::energy::DeviceProfile;
use rbnsize_core::frame::Address;
use rbnsize_core::rbn::BitString;
use rbnsize_core::sim::presets::filler;
use rbnsize_core::sim::{Link, NodeSpec, SimScenario, Timing, Topology, TrafficSpec};
use serde::Deserialize;

use crate::error::ConfigError;
use crate::profiles::{find_profile, DeviceEntry};

pub const SCENARIO_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum ProfileRef {
    Named(String),
    Inline(DeviceEntry),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct TimingFile {
    slot_us: Option<f64>,
    sifs_us: Option<f64>,
    nifs_us: Option<f64>,
    b_us: Option<f64>,
    cw_min: Option<u32>,
    cw_max: Option<u32>,
    retry_limit: Option<u32>,
    timeout_margin_us: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeFile {
    address: Option<String>,
    position: Option<[f64; 2]>,
    #[serde(default)]
    wake_at_us: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LinkFile {
    a: usize,
    b: usize,
    #[serde(default)]
    delay_us: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TrafficFile {
    at_us: f64,
    src: usize,
    dest: usize,
    payload_hex: Option<String>,
    payload_text: Option<String>,
    payload_octets: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    version: u32,
    profile: ProfileRef,
    #[serde(default)]
    seed: u64,
    duration_us: f64,
    #[serde(default)]
    count_transients: bool,
    range: Option<f64>,
    #[serde(default)]
    timing: TimingFile,
    #[serde(rename = "node")]
    nodes: Vec<NodeFile>,
    #[serde(default, rename = "link")]
    links: Vec<LinkFile>,
    #[serde(default, rename = "traffic")]
    traffic: Vec<TrafficFile>,
}

fn payload(i: usize, t: &TrafficFile) -> Result<BitString, ConfigError> {
    let invalid = |msg: &str| ConfigError::Invalid(format!("traffic item {i}: {msg}"));
    match (&t.payload_hex, &t.payload_text, t.payload_octets) {
        (Some(hex), None, None) => BitString::parse_hex(hex).map_err(|e| invalid(&e.to_string())),
        (None, Some(text), None) => Ok(BitString::from_octets(text.as_bytes())),
        (None, None, Some(n)) => Ok(filler(n, i as u8)),
        (None, None, None) => Ok(BitString::new()),
        _ => Err(invalid("give at most one of payload_hex, payload_text, payload_octets")),
    }
}

/// Builds a scenario; named profiles are resolved against `profiles`.
pub fn parse_scenario(text: &str, profiles: &[DeviceProfile]) -> Result<SimScenario, ConfigError> {
    let file: ScenarioFile = toml::from_str(text)?;
    if file.version != SCENARIO_FORMAT_VERSION {
        return Err(ConfigError::Version { found: file.version, expected: SCENARIO_FORMAT_VERSION });
    }
    let profile = match &file.profile {
        ProfileRef::Named(name) => find_profile(profiles, name)?,
        ProfileRef::Inline(entry) => entry.to_profile()?,
    };

    let mut nodes = Vec::with_capacity(file.nodes.len());
    for (i, n) in file.nodes.iter().enumerate() {
        let address = match &n.address {
            Some(text) => {
                text.parse::<Address>().map_err(|e| ConfigError::Invalid(format!("node {i}: {e}")))?
            }
            None => Address::from_id(i as u64 + 1),
        };
        nodes.push(NodeSpec { address, position: n.position.map(|[x, y]| (x, y)), wake_at_us: n.wake_at_us });
    }

    let topology = match (file.range, file.links.is_empty()) {
        (Some(_), false) => {
            return Err(ConfigError::Invalid("give either range or [[link]] tables, not both".into()))
        }
        (Some(radius), true) => Topology::Range { radius },
        (None, false) => Topology::Links(
            file.links.iter().map(|l| Link { a: l.a, b: l.b, delay_us: l.delay_us }).collect(),
        ),
        (None, true) => Topology::Full,
    };

    let traffic = file
        .traffic
        .iter()
        .enumerate()
        .map(|(i, t)| Ok(TrafficSpec { at_us: t.at_us, src: t.src, dest: t.dest, payload: payload(i, t)? }))
        .collect::<Result<Vec<_>, ConfigError>>()?;

    let mut timing = Timing::for_profile(&profile);
    let t = &file.timing;
    timing.slot_us = t.slot_us.unwrap_or(timing.slot_us);
    timing.sifs_us = t.sifs_us.unwrap_or(timing.sifs_us);
    timing.nifs_us = t.nifs_us.unwrap_or(timing.nifs_us);
    timing.b_override_us = t.b_us;
    timing.cw_min = t.cw_min.unwrap_or(timing.cw_min);
    timing.cw_max = t.cw_max.unwrap_or(timing.cw_max);
    timing.retry_limit = t.retry_limit.unwrap_or(timing.retry_limit);
    timing.timeout_margin_us = t.timeout_margin_us.unwrap_or(timing.timeout_margin_us);

    let scenario = SimScenario {
        nodes,
        topology,
        traffic,
        timing,
        profile,
        rng_seed: file.seed,
        duration_us: file.duration_us,
        count_transients: file.count_transients,
    };
    scenario.validate()?;
    Ok(scenario)
}

pub fn load_scenario(path: &Path, profiles: &[DeviceProfile]) -> Result<SimScenario, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::io(path, e))?;
    parse_scenario(&text, profiles)
}
