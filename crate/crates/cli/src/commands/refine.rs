//! `refine`: joint refinement of two single-factor observables with
//! verified coarse-graining maps.

use std::fmt::Write as _;
use std::path::Path;

use eprsim_core::composite::build_joint_refinement;
use eprsim_core::{tensor, Operator, SpectralDecomposition};

use crate::inputs::{check_dimension, load_json, require_config, RefineInput};
use crate::output::{to_pretty_json, CliError, CommandResult};

pub fn run(config: Option<&Path>) -> Result<CommandResult, CliError> {
    let path = require_config(config, "refine")?;
    let input: RefineInput = load_json(&path)?;
    check_dimension(
        "observable_first (x) observable_second",
        input.observable_first.dim() * input.observable_second.dim(),
    )?;
    let a = SpectralDecomposition::with_default_tol(&input.observable_first)
        .map_err(CliError::from_core)?;
    let c = SpectralDecomposition::with_default_tol(&input.observable_second)
        .map_err(CliError::from_core)?;
    let joint = build_joint_refinement(&a, &c).map_err(CliError::from_core)?;

    let d1 = a.dim();
    let d2 = c.dim();
    let a_embedded = tensor(&input.observable_first, &Operator::identity(d2));
    let c_embedded = tensor(&Operator::identity(d1), &input.observable_second);
    let residual_first = (&joint
        .refined()
        .apply_function(joint.coarse_first().as_fn())
        .map_err(CliError::from_core)?
        - &a_embedded)
        .max_abs();
    let residual_second = (&joint
        .refined()
        .apply_function(joint.coarse_second().as_fn())
        .map_err(CliError::from_core)?
        - &c_embedded)
        .max_abs();

    let payload = serde_json::json!({
        "d1": d1,
        "d2": d2,
        "refined": joint.refined(),
        "coarse_first": joint.coarse_first().pairs(),
        "coarse_second": joint.coarse_second().pairs(),
        "residual_first": residual_first,
        "residual_second": residual_second,
    });

    let mut text = String::new();
    writeln!(
        text,
        "joint refinement: {} nondegenerate outcomes on the {}-dimensional composite",
        joint.refined().len(),
        d1 * d2
    )
    .unwrap();
    writeln!(
        text,
        "  A (x) I = f(D) verified, residual {residual_first:.3e}"
    )
    .unwrap();
    writeln!(
        text,
        "  I (x) C = g(D) verified, residual {residual_second:.3e}"
    )
    .unwrap();

    Ok(CommandResult {
        summary_text: text,
        summary_json: payload.clone(),
        artifacts: vec![("refine.json".into(), to_pretty_json(&payload)?)],
        config_echo: serde_json::json!({
            "input": path.display().to_string(),
        }),
        seed: 0,
    })
}
