//! Scenario files.
//!
//! A scenario file is TOML laid out like [`ScenarioConfig`]. Every field is
//! optional; missing fields keep their defaults. An `apps` array
//! replaces the default application set as a whole.

use std::fs;
use std::path::{Path, PathBuf};

use pirs_core::ScenarioConfig;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse {}: {source}", path.display())]
    Parse {
        path: PathBuf,
        #[source]
        source: toml::de::Error,
    },
    #[error("invalid scenario {}: {}", path.display(), violations.join("; "))]
    Invalid {
        path: PathBuf,
        violations: Vec<String>,
    },
}

/// Parses scenario TOML text without validating it.
pub fn parse_scenario(text: &str) -> Result<ScenarioConfig, toml::de::Error> {
    toml::from_str(text)
}

/// Reads, parses and validates a scenario file.
pub fn load_scenario(path: &Path) -> Result<ScenarioConfig, ConfigError> {
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let cfg = parse_scenario(&text).map_err(|source| ConfigError::Parse {
        path: path.to_path_buf(),
        source,
    })?;
    let violations = cfg.validate();
    if !violations.is_empty() {
        return Err(ConfigError::Invalid {
            path: path.to_path_buf(),
            violations,
        });
    }
    Ok(cfg)
}

pub fn to_toml(cfg: &ScenarioConfig) -> String {
    toml::to_string(cfg).expect("scenario config always serializes")
}
