//! `measure`: Born table, Lüders records and von Neumann verdicts for a
//! JSON state + observable, optionally with a refinement observable.

use std::fmt::Write as _;
use std::path::Path;

use eprsim_core::measurement::{born_probabilities, luders_update, von_neumann_update};
use eprsim_core::{tol, SpectralDecomposition};

use crate::inputs::{check_dimension, load_json, require_config, MeasureInput};
use crate::output::{to_pretty_json, CliError, CommandResult};

pub fn run(config: Option<&Path>) -> Result<CommandResult, CliError> {
    let path = require_config(config, "measure")?;
    let input: MeasureInput = load_json(&path)?;
    check_dimension("observable", input.observable.dim())?;

    let cluster_tol = input.cluster_tol.unwrap_or(tol::CLUSTER);
    let d = SpectralDecomposition::new(&input.observable, cluster_tol)
        .map_err(CliError::from_core)?;
    if d.dim() != input.state.dim() {
        return Err(CliError::input(format!(
            "field `state`: dimension {} does not match observable dimension {}",
            input.state.dim(),
            d.dim()
        )));
    }
    let refinement = input
        .refinement
        .as_ref()
        .map(|op| SpectralDecomposition::new(op, cluster_tol))
        .transpose()
        .map_err(CliError::from_core)?;

    let born = born_probabilities(&input.state, &d).map_err(CliError::from_core)?;

    let mut luders = Vec::new();
    for k in 0..d.len() {
        match luders_update(&input.state, &d, k) {
            Ok(record) => luders.push(serde_json::to_value(&record).unwrap()),
            Err(eprsim_core::Error::ZeroProbabilityOutcome { .. }) => {}
            Err(e) => return Err(CliError::from_core(e)),
        }
    }

    let mut von_neumann = Vec::new();
    let mut von_neumann_refined = Vec::new();
    for k in 0..d.len() {
        let outcome = d.eigenvalues()[k];
        von_neumann.push(super::von_neumann_entry(
            von_neumann_update(&input.state, &d, k, None),
            outcome,
        )?);
        if let Some(refined) = &refinement {
            von_neumann_refined.push(super::von_neumann_entry(
                von_neumann_update(&input.state, &d, k, Some(refined)),
                outcome,
            )?);
        }
    }

    let payload = serde_json::json!({
        "spectrum": {
            "eigenvalues": d.eigenvalues(),
            "multiplicities": d.multiplicities(),
        },
        "born": born.iter().map(|&(outcome, probability)| serde_json::json!({
            "outcome": outcome,
            "probability": probability,
        })).collect::<Vec<_>>(),
        "luders": luders,
        "von_neumann": von_neumann,
        "von_neumann_refined": if refinement.is_some() {
            serde_json::Value::from(von_neumann_refined)
        } else {
            serde_json::Value::Null
        },
    });

    let mut text = String::new();
    writeln!(text, "measurement analysis ({} outcomes)", d.len()).unwrap();
    for (k, &(outcome, probability)) in born.iter().enumerate() {
        writeln!(
            text,
            "  outcome {outcome:+.4}  multiplicity {}  P = {probability:.6}",
            d.multiplicities()[k]
        )
        .unwrap();
    }
    let ambiguous = payload["von_neumann"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|v| v["verdict"] == "ambiguous")
        .count();
    writeln!(
        text,
        "  von Neumann verdicts: {ambiguous} of {} outcomes have an undetermined post-state",
        d.len()
    )
    .unwrap();
    if refinement.is_some() {
        writeln!(text, "  refinement supplied: degenerate outcomes resolved through it").unwrap();
    }

    Ok(CommandResult {
        summary_text: text,
        summary_json: payload.clone(),
        artifacts: vec![("measurement.json".into(), to_pretty_json(&payload)?)],
        config_echo: serde_json::json!({
            "input": path.display().to_string(),
            "cluster_tol": cluster_tol,
        }),
        seed: 0,
    })
}
