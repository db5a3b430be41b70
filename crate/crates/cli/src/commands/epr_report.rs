//! `epr-report`: conditional partner families, reconstructed partner
//! observables and ambiguity verdicts.

use std::fmt::Write as _;
use std::path::Path;

use eprsim_core::composite::{epr_assignment_report, AmbiguityVerdict, ConditionalOutcome};

use crate::inputs::{check_dimension, load_json, require_config, EprReportInput};
use crate::output::{to_pretty_json, CliError, CommandResult};

pub fn run(config: Option<&Path>) -> Result<CommandResult, CliError> {
    let path = require_config(config, "epr-report")?;
    let input: EprReportInput = load_json(&path)?;
    check_dimension("state", input.state.dim())?;
    let report = epr_assignment_report(&input.state, &input.observable_a, &input.observable_b)
        .map_err(CliError::from_core)?;

    let payload =
        serde_json::to_value(&report).map_err(|e| CliError::internal(format!("serialization: {e}")))?;

    let mut text = String::new();
    writeln!(
        text,
        "two-wave-function assignment report ({}x{})",
        report.d1, report.d2
    )
    .unwrap();
    render_family(&mut text, "A", &report.family_a, &report.ambiguity_a);
    render_family(&mut text, "B", &report.family_b, &report.ambiguity_b);
    match (&report.partner_observable_p, &report.partner_observable_q) {
        (Some(_), Some(_)) => {
            writeln!(
                text,
                "  partner observables P, Q reconstructed; commutator norm = {:.4}",
                report.commutator_norm_pq.unwrap_or(f64::NAN)
            )
            .unwrap();
        }
        _ => writeln!(
            text,
            "  partner observables not reconstructible (a family is not an orthogonal basis)"
        )
        .unwrap(),
    }

    Ok(CommandResult {
        summary_text: text,
        summary_json: payload.clone(),
        artifacts: vec![("epr_report.json".into(), to_pretty_json(&payload)?)],
        config_echo: serde_json::json!({
            "input": path.display().to_string(),
        }),
        seed: 0,
    })
}

fn render_family(
    text: &mut String,
    label: &str,
    family: &[ConditionalOutcome],
    verdicts: &[AmbiguityVerdict],
) {
    writeln!(text, "  measurement {label} on the first factor:").unwrap();
    for (outcome, verdict) in family.iter().zip(verdicts) {
        let partner = match &outcome.partner {
            Some(_) => "conditional partner state defined by selection (Lüders)",
            None => "outcome cannot occur",
        };
        let vn = match verdict {
            AmbiguityVerdict::Determined { .. } => "post-state determined".to_string(),
            AmbiguityVerdict::Ambiguous { eigenspace_dim, .. } => format!(
                "von Neumann: post-state NOT determined (eigenspace dim {eigenspace_dim})"
            ),
            AmbiguityVerdict::ZeroProbability { .. } => "zero probability".to_string(),
        };
        writeln!(
            text,
            "    outcome {:+.4}  P = {:.4}  {partner}; {vn}",
            outcome.outcome, outcome.probability
        )
        .unwrap();
    }
}
