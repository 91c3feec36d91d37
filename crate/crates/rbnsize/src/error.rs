use std::path::PathBuf;

use rbnsize_core::energy::ProfileError;
use rbnsize_core::sim::ScenarioError;

/// Failure to load or validate a profile or scenario file.
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed file: {0}")]
    Syntax(#[from] toml::de::Error),
    #[error("unsupported format version {found} (this build reads version {expected})")]
    Version { found: u32, expected: u32 },
    #[error("profile file defines no devices")]
    NoDevices,
    #[error("device name {0:?} appears twice")]
    DuplicateName(String),
    #[error("no profile matches {name:?}; available: {available}")]
    UnknownProfile { name: String, available: String },
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
}

impl ConfigError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io { path: path.into(), source }
    }
}
