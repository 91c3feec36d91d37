//! Versioned device-profile files (TOML).
//!
//! ```toml
//! version = 1
//!
//! [[device]]
//! name = "Maxim 2820"
//! data_rate_kbps = 50.0
//! symbol_duration_us = 20.0
//! v_cc = 2.7
//! i_high_ma = 70.0
//! i_low_ma = 25.0
//! t_on_us = 3.0
//! ```

use std::path::Path;

use rbnsize_core::energy::DeviceProfile;
use serde::{Deserialize, Serialize};

use crate::error::ConfigError;

pub const PROFILE_FORMAT_VERSION: u32 = 1;

/// The shipped profile file: the four reference radios.
pub const DEFAULT_PROFILES: &str = include_str!("../data/profiles.toml");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceEntry {
    pub name: String,
    pub data_rate_kbps: f64,
    pub symbol_duration_us: f64,
    pub v_cc: f64,
    pub i_high_ma: f64,
    pub i_low_ma: f64,
    #[serde(default)]
    pub t_on_us: f64,
}

impl DeviceEntry {
    pub fn to_profile(&self) -> Result<DeviceProfile, ConfigError> {
        Ok(DeviceProfile::new(
            self.name.clone(),
            self.data_rate_kbps,
            self.symbol_duration_us,
            self.v_cc,
            self.i_high_ma,
            self.i_low_ma,
            self.t_on_us,
        )?)
    }
}

impl From<&DeviceProfile> for DeviceEntry {
    fn from(p: &DeviceProfile) -> Self {
        Self {
            name: p.name.clone(),
            data_rate_kbps: p.data_rate_kbps,
            symbol_duration_us: p.symbol_duration_us,
            v_cc: p.v_cc,
            i_high_ma: p.i_high_ma,
            i_low_ma: p.i_low_ma,
            t_on_us: p.t_on_us,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileFile {
    version: u32,
    #[serde(default, rename = "device")]
    devices: Vec<DeviceEntry>,
}

pub fn parse_profiles(text: &str) -> Result<Vec<DeviceProfile>, ConfigError> {
    let file: ProfileFile = toml::from_str(text)?;
    if file.version != PROFILE_FORMAT_VERSION {
        return Err(ConfigError::Version { found: file.version, expected: PROFILE_FORMAT_VERSION });
    }
    if file.devices.is_empty() {
        return Err(ConfigError::NoDevices);
    }
    let mut out: Vec<DeviceProfile> = Vec::with_capacity(file.devices.len());
    for d in &file.devices {
        if out.iter().any(|p| name_key(&p.name) == name_key(&d.name)) {
            return Err(ConfigError::DuplicateName(d.name.clone()));
        }
        out.push(d.to_profile()?);
    }
    Ok(out)
}

pub fn load_profiles(path: &Path) -> Result<Vec<DeviceProfile>, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::io(path, e))?;
    parse_profiles(&text)
}

pub fn default_profiles() -> Vec<DeviceProfile> {
    parse_profiles(DEFAULT_PROFILES).expect("shipped profile file is valid")
}

pub fn profiles_to_toml(profiles: &[DeviceProfile]) -> String {
    let file = ProfileFile {
        version: PROFILE_FORMAT_VERSION,
        devices: profiles.iter().map(DeviceEntry::from).collect(),
    };
    toml::to_string(&file).expect("profiles serialize")
}

fn name_key(name: &str) -> String {
    name.chars().filter(char::is_ascii_alphanumeric).map(|c| c.to_ascii_lowercase()).collect()
}

/// Case- and punctuation-insensitive lookup; a unique suffix match also
/// counts, so `2820` finds `Maxim 2820`.
pub fn find_profile(profiles: &[DeviceProfile], name: &str) -> Result<DeviceProfile, ConfigError> {
    let wanted = name_key(name);
    let unknown = || ConfigError::UnknownProfile {
        name: name.to_string(),
        available: profiles.iter().map(|p| p.name.as_str()).collect::<Vec<_>>().join(", "),
    };
    if wanted.is_empty() {
        return Err(unknown());
    }
    if let Some(p) = profiles.iter().find(|p| name_key(&p.name) == wanted) {
        return Ok(p.clone());
    }
    let mut suffix = profiles.iter().filter(|p| name_key(&p.name).ends_with(&wanted));
    match (suffix.next(), suffix.next()) {
        (Some(p), None) => Ok(p.clone()),
        _ => Err(unknown()),
    }
}
