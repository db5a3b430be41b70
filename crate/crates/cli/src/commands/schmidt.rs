//! `schmidt`: decomposes a bipartite pure state.

use std::fmt::Write as _;
use std::path::Path;

use eprsim_core::composite::schmidt_decompose;

use crate::inputs::{check_dimension, load_json, require_config, SchmidtInput};
use crate::output::{to_pretty_json, CliError, CommandResult};

pub fn run(config: Option<&Path>) -> Result<CommandResult, CliError> {
    let path = require_config(config, "schmidt")?;
    let input: SchmidtInput = load_json(&path)?;
    check_dimension("state", input.state.dim())?;
    let schmidt =
        schmidt_decompose(&input.state, input.d1, input.d2).map_err(CliError::from_core)?;
    let reconstruction_error =
        (&schmidt.reconstruct_vector() - input.state.amplitudes()).norm();

    let payload = serde_json::json!({
        "d1": input.d1,
        "d2": input.d2,
        "coefficients": schmidt.coefficients,
        "rank": schmidt.rank(),
        "basis_1": schmidt.basis_1,
        "basis_2": schmidt.basis_2,
        "reconstruction_error": reconstruction_error,
    });

    let mut text = String::new();
    writeln!(text, "Schmidt decomposition ({}x{})", input.d1, input.d2).unwrap();
    write!(text, "  coefficients:").unwrap();
    for c in &schmidt.coefficients {
        write!(text, " {c:.4}").unwrap();
    }
    writeln!(text).unwrap();
    writeln!(text, "  rank: {}", schmidt.rank()).unwrap();
    writeln!(text, "  reconstruction error: {reconstruction_error:.3e}").unwrap();

    Ok(CommandResult {
        summary_text: text,
        summary_json: payload.clone(),
        artifacts: vec![("schmidt.json".into(), to_pretty_json(&payload)?)],
        config_echo: serde_json::json!({
            "input": path.display().to_string(),
        }),
        seed: 0,
    })
}
