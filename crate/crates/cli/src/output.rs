//! Artifact and manifest writing; errors carry the process exit code.

use std::fs;
use std::path::Path;

use serde::Serialize;

/// Exit code 1: invalid input. Exit code 2: internal invariant violation.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    pub fn from_core(err: eprsim_core::Error) -> Self {
        match err {
            eprsim_core::Error::VerificationFailed { .. } => Self::internal(err.to_string()),
            _ => Self::input(err.to_string()),
        }
    }
}

/// Fully computed command output; nothing touches the filesystem until the
/// whole computation has succeeded, so invalid inputs never leave partial
/// artifacts behind.
pub struct CommandResult {
    pub summary_text: String,
    pub summary_json: serde_json::Value,
    /// `(file name, contents)`.
    pub artifacts: Vec<(String, String)>,
    /// Echo of the effective configuration, recorded in the manifest.
    pub config_echo: serde_json::Value,
    pub seed: u64,
}

/// Every run writes this next to its artifacts.
#[derive(Serialize)]
pub struct RunManifest<'a> {
    pub command: &'a str,
    pub config: &'a serde_json::Value,
    pub seed: u64,
    pub artifact_paths: Vec<&'a str>,
}

pub fn write_artifacts(out_dir: &Path, command: &str, result: &CommandResult) -> Result<(), CliError> {
    fs::create_dir_all(out_dir)
        .map_err(|e| CliError::input(format!("cannot create output directory: {e}")))?;
    for (name, contents) in &result.artifacts {
        fs::write(out_dir.join(name), contents)
            .map_err(|e| CliError::input(format!("cannot write {name}: {e}")))?;
    }
    let manifest = RunManifest {
        command,
        config: &result.config_echo,
        seed: result.seed,
        artifact_paths: result.artifacts.iter().map(|(n, _)| n.as_str()).collect(),
    };
    let body = to_pretty_json(&manifest)?;
    fs::write(out_dir.join("manifest.json"), body)
        .map_err(|e| CliError::input(format!("cannot write manifest.json: {e}")))?;
    Ok(())
}

/// Pretty JSON with a trailing newline; serde_json's float encoding is
/// deterministic, which keeps rerun artifacts byte-identical.
pub fn to_pretty_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut body = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::internal(format!("serialization: {e}")))?;
    body.push('\n');
    Ok(body)
}
