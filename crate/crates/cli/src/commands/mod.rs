pub mod chsh;
pub mod demo;
pub mod epr_report;
pub mod measure;
pub mod nosignal;
pub mod refine;
pub mod schmidt;

use eprsim_core::measurement::VonNeumannOutcome;

use crate::output::CliError;

/// Encodes a von Neumann verdict, folding the zero-probability error into
/// a verdict entry so reports can show every outcome.
pub(crate) fn von_neumann_entry(
    result: Result<VonNeumannOutcome, eprsim_core::Error>,
    outcome: f64,
) -> Result<serde_json::Value, CliError> {
    match result {
        Ok(outcome) => serde_json::to_value(&outcome)
            .map_err(|e| CliError::internal(format!("serialization: {e}"))),
        Err(eprsim_core::Error::ZeroProbabilityOutcome { .. }) => Ok(serde_json::json!({
            "verdict": "zero_probability",
            "outcome": outcome,
        })),
        Err(e) => Err(CliError::from_core(e)),
    }
}
