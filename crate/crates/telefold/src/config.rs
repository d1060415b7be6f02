//! JSON design and sweep-spec files.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;
use telefold_core::design::{DesignParams, Violation};
use telefold_core::sweep::SweepSpec;
use telefold_core::ValidatedDesign;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("{path}: {}", violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid { path: PathBuf, violations: Vec<Violation> },
}

fn load<T: DeserializeOwned>(path: &Path) -> Result<T, ConfigError> {
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.into(), source })?;
    serde_json::from_str(&text).map_err(|source| ConfigError::Json { path: path.into(), source })
}

/// Parses a design file; unknown keys are rejected.
pub fn load_design(path: &Path) -> Result<DesignParams, ConfigError> {
    load(path)
}

/// Parses and validates a design file.
pub fn load_validated(path: &Path) -> Result<ValidatedDesign, ConfigError> {
    load_design(path)?.validate().map_err(|violations| ConfigError::Invalid { path: path.into(), violations })
}

pub fn load_sweep_spec(path: &Path) -> Result<SweepSpec, ConfigError> {
    load(path)
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn save<T: Serialize>(path: &Path, value: &T) -> Result<(), ConfigError> {
    fs::write(path, to_json(value)).map_err(|source| ConfigError::Io { path: path.into(), source })
}
