//! Input file schemas and path-aware JSON loading.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Deserialize;

use eprsim_core::{Operator, PureState, State};

use crate::output::CliError;

/// Deserializes with a field path in the diagnostic, e.g.
/// `observable.entries[1][0]`.
pub fn load_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let raw = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    let mut deserializer = serde_json::Deserializer::from_str(&raw);
    serde_path_to_error::deserialize(&mut deserializer).map_err(|e| {
        CliError::input(format!(
            "invalid input {}: field `{}`: {}",
            path.display(),
            e.path(),
            e.inner()
        ))
    })
}

pub fn require_config(path: Option<&Path>, command: &str) -> Result<std::path::PathBuf, CliError> {
    path.map(Path::to_path_buf).ok_or_else(|| {
        CliError::input(format!("`{command}` needs --config <path> (JSON input file)"))
    })
}

/// Dense eigenproblems stay sub-second only up to the crate-wide cap.
pub fn check_dimension(field: &str, dim: usize) -> Result<(), CliError> {
    if dim > eprsim_core::MAX_DIMENSION {
        return Err(CliError::input(format!(
            "field `{field}`: dimension {dim} exceeds the supported maximum {}",
            eprsim_core::MAX_DIMENSION
        )));
    }
    Ok(())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureInput {
    pub state: State,
    pub observable: Operator,
    #[serde(default)]
    pub refinement: Option<Operator>,
    #[serde(default)]
    pub cluster_tol: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchmidtInput {
    pub state: PureState,
    pub d1: usize,
    pub d2: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EprReportInput {
    pub state: PureState,
    pub observable_a: Operator,
    pub observable_b: Operator,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RefineInput {
    pub observable_first: Operator,
    pub observable_second: Operator,
}

#[derive(Deserialize, serde::Serialize, Clone, Copy)]
#[serde(default, deny_unknown_fields)]
pub struct NosignalConfig {
    pub instances: usize,
    pub min_dim: usize,
    pub max_dim: usize,
    pub seed: u64,
}

impl Default for NosignalConfig {
    fn default() -> Self {
        Self {
            instances: 1000,
            min_dim: 2,
            max_dim: 4,
            seed: 0,
        }
    }
}
