//! `demo`: packaged singlet and qudit walkthroughs contrasting the Lüders
//! and von Neumann update rules on degenerate observables.

use std::fmt::Write as _;

use eprsim_core::composite::{
    build_joint_refinement, epr_assignment_report, no_signaling_check, AmbiguityVerdict,
};
use eprsim_core::measurement::{
    born_probabilities, dft_matrix, luders_update, make_canonical_pair, plane_wave,
    sample_outcome, von_neumann_update, VonNeumannOutcome,
};
use eprsim_core::states::{maximally_entangled, singlet};
use eprsim_core::{
    state_distance, Operator, PureState, SpectralDecomposition, State, Subsystem,
};

use crate::output::{to_pretty_json, CliError, CommandResult};

pub fn run(seed_flag: Option<u64>) -> Result<CommandResult, CliError> {
    let seed = seed_flag.unwrap_or(0);
    let mut text = String::new();

    let singlet_part = singlet_walkthrough(seed, &mut text)?;
    let qudit_part = qudit_walkthrough(&mut text)?;

    let summary = serde_json::json!({
        "singlet": singlet_part,
        "qudit": qudit_part,
    });

    let artifacts = vec![
        ("demo_singlet.json".into(), to_pretty_json(&summary["singlet"])?),
        ("demo_qudit.json".into(), to_pretty_json(&summary["qudit"])?),
    ];
    Ok(CommandResult {
        summary_text: text,
        summary_json: summary,
        artifacts,
        config_echo: serde_json::json!({ "seed": seed }),
        seed,
    })
}

fn decompose(op: &Operator) -> Result<SpectralDecomposition, CliError> {
    SpectralDecomposition::with_default_tol(op).map_err(CliError::from_core)
}

fn singlet_walkthrough(seed: u64, text: &mut String) -> Result<serde_json::Value, CliError> {
    writeln!(text, "=== singlet walkthrough ===").unwrap();
    writeln!(
        text,
        "state: (|01> - |10>)/sqrt(2); measuring spin-z on wing 1 only"
    )
    .unwrap();

    let state = State::Pure(singlet());
    let z1 = decompose(&Operator::pauli_z())?;
    let coarse = z1.tensor_identity(2);
    writeln!(
        text,
        "the observable on the pair is sigma_z (x) I: eigenvalues {:?} with multiplicities {:?} -- degenerate",
        coarse.eigenvalues(),
        coarse.multiplicities()
    )
    .unwrap();

    let born = born_probabilities(&state, &coarse).map_err(CliError::from_core)?;
    for &(outcome, p) in &born {
        writeln!(text, "  Born: P({outcome:+.0}) = {p:.4}").unwrap();
    }

    // Lüders: defined for any multiplicity
    let mut luders_json = Vec::new();
    for k in 0..coarse.len() {
        let record = luders_update(&state, &coarse, k).map_err(CliError::from_core)?;
        let post = record.post_state.as_pure().expect("pure input");
        writeln!(
            text,
            "  Lüders, outcome {:+.0}: post-state {} with probability {:.2}",
            record.outcome,
            ket_label(post),
            record.probability
        )
        .unwrap();
        luders_json.push(serde_json::to_value(&record).unwrap());
    }

    // von Neumann without refinement: undetermined
    let mut ambiguity_json = Vec::new();
    for k in 0..coarse.len() {
        match von_neumann_update(&state, &coarse, k, None).map_err(CliError::from_core)? {
            VonNeumannOutcome::Ambiguous(marker) => {
                writeln!(
                    text,
                    "  von Neumann, outcome {:+.0}: post-state NOT determined (eigenspace dimension {})",
                    marker.outcome, marker.eigenspace_dim
                )
                .unwrap();
                ambiguity_json.push(serde_json::to_value(&marker).unwrap());
            }
            other => {
                return Err(CliError::internal(format!(
                    "singlet demo expected an ambiguous verdict, got {other:?}"
                )))
            }
        }
    }

    // two refinements, same coarse outcome, different post-states
    let refined_post = |c_op: &Operator| -> Result<(serde_json::Value, State), CliError> {
        let joint =
            build_joint_refinement(&z1, &decompose(c_op)?).map_err(CliError::from_core)?;
        match von_neumann_update(&state, &coarse, 1, Some(joint.refined()))
            .map_err(CliError::from_core)?
        {
            VonNeumannOutcome::Refined { record, .. } => {
                Ok((serde_json::to_value(&record).unwrap(), record.post_state))
            }
            other => Err(CliError::internal(format!(
                "singlet demo expected a refined outcome, got {other:?}"
            ))),
        }
    };
    let (record_z, post_z) = refined_post(&Operator::pauli_z())?;
    let (record_x, post_x) = refined_post(&Operator::pauli_x())?;
    let refinement_distance = state_distance(&post_z.to_density(), &post_x.to_density())
        .map_err(CliError::from_core)?;
    writeln!(
        text,
        "  refining through wing-2 sigma_z vs sigma_x gives post-states at trace distance {refinement_distance:.4}"
    )
    .unwrap();
    writeln!(
        text,
        "  -> for a degenerate outcome the post-state is an artifact of the chosen refinement"
    )
    .unwrap();

    // no signaling
    let nosignal = no_signaling_check(&singlet().to_density(), &z1).map_err(CliError::from_core)?;
    writeln!(
        text,
        "  non-selective measurement on wing 1 moves wing 2's reduced state by {nosignal:.3e}"
    )
    .unwrap();
    if nosignal > 1e-12 {
        return Err(CliError::internal(format!(
            "no-signaling distance {nosignal:.3e} exceeds 1e-12 on the singlet"
        )));
    }
    let marginal = singlet()
        .to_density()
        .partial_trace(Subsystem::Second, 2, 2)
        .map_err(CliError::from_core)?;
    let conditional = luders_update(&state, &coarse, 1)
        .map_err(CliError::from_core)?
        .post_state
        .to_density()
        .partial_trace(Subsystem::Second, 2, 2)
        .map_err(CliError::from_core)?;
    let selective_distance =
        state_distance(&marginal, &conditional).map_err(CliError::from_core)?;
    writeln!(
        text,
        "  selecting on one outcome shifts the conditional state by {selective_distance:.2}: selection is not signaling"
    )
    .unwrap();

    // seeded sampling
    let mut rng = eprsim_core::random::seeded_rng(seed);
    let samples: Vec<f64> = (0..10)
        .map(|_| {
            sample_outcome(&state, &coarse, &mut rng)
                .map(|r| r.outcome)
                .map_err(CliError::from_core)
        })
        .collect::<Result<_, _>>()?;
    writeln!(text, "  10 sampled outcomes (seed {seed}): {samples:?}").unwrap();
    writeln!(text).unwrap();

    Ok(serde_json::json!({
        "born": born.iter().map(|&(o, p)| serde_json::json!({"outcome": o, "probability": p})).collect::<Vec<_>>(),
        "luders": luders_json,
        "von_neumann_ambiguity": ambiguity_json,
        "refined_via_z2": record_z,
        "refined_via_x2": record_x,
        "refinement_trace_distance": refinement_distance,
        "no_signaling_distance": nosignal,
        "selective_conditional_distance": selective_distance,
        "sampled_outcomes": samples,
        "seed": seed,
    }))
}

fn qudit_walkthrough(text: &mut String) -> Result<serde_json::Value, CliError> {
    let dim = 8;
    writeln!(text, "=== dim-{dim} qudit walkthrough ===").unwrap();
    writeln!(
        text,
        "state: sum_k |k>|k> / sqrt({dim}); discrete position vs momentum on the first qudit"
    )
    .unwrap();

    let psi = maximally_entangled(dim);
    let pair = make_canonical_pair(dim).map_err(CliError::from_core)?;
    let report = epr_assignment_report(&psi, pair.position(), pair.momentum())
        .map_err(CliError::from_core)?;

    // how well the families align with the position / momentum eigenbases
    let mut min_position_overlap = 1.0_f64;
    for (k, outcome) in report.family_a.iter().enumerate() {
        let partner = outcome.partner.as_ref().expect("uniform probabilities");
        min_position_overlap =
            min_position_overlap.min(partner.inner(&PureState::basis_state(dim, k)).norm());
    }
    let f = dft_matrix(dim);
    let mut min_momentum_overlap = 1.0_f64;
    for outcome in &report.family_b {
        let partner = outcome.partner.as_ref().expect("uniform probabilities");
        let best = (0..dim)
            .map(|q| {
                let col = PureState::normalized(f.entries().column(q).clone_owned()).unwrap();
                partner.inner(&col).norm()
            })
            .fold(0.0_f64, f64::max);
        min_momentum_overlap = min_momentum_overlap.min(best);
    }
    writeln!(
        text,
        "  conditioning on position outcomes leaves wing 2 in position eigenstates (min overlap {min_position_overlap:.10})"
    )
    .unwrap();
    writeln!(
        text,
        "  conditioning on momentum outcomes leaves wing 2 in momentum eigenstates (min overlap {min_momentum_overlap:.10})"
    )
    .unwrap();
    let norm_pq = report.commutator_norm_pq.unwrap_or(0.0);
    writeln!(
        text,
        "  the two partner families define noncommuting observables: |[P, Q]| = {norm_pq:.4}"
    )
    .unwrap();
    let all_ambiguous = report
        .ambiguity_a
        .iter()
        .chain(&report.ambiguity_b)
        .all(|v| matches!(v, AmbiguityVerdict::Ambiguous { eigenspace_dim, .. } if *eigenspace_dim == dim));
    writeln!(
        text,
        "  yet every outcome of either wing-1 measurement has eigenspace dimension {dim}: no post-state is licensed without a refinement"
    )
    .unwrap();
    if !all_ambiguous {
        return Err(CliError::internal(
            "qudit demo expected every outcome to be ambiguous".to_string(),
        ));
    }

    // plane wave: momentum sharp, position uniform
    let p0 = 1;
    let wave = State::Pure(plane_wave(dim, p0).map_err(CliError::from_core)?);
    let momentum_probs = born_probabilities(&wave, &decompose(pair.momentum())?)
        .map_err(CliError::from_core)?;
    let p_at_p0 = momentum_probs
        .iter()
        .find(|(ev, _)| (ev - p0 as f64).abs() < 0.5)
        .map(|&(_, p)| p)
        .unwrap_or(0.0);
    let position_probs = born_probabilities(&wave, &decompose(pair.position())?)
        .map_err(CliError::from_core)?;
    let max_uniform_deviation = position_probs
        .iter()
        .map(|&(_, p)| (p - 1.0 / dim as f64).abs())
        .fold(0.0_f64, f64::max);
    writeln!(
        text,
        "  plane wave with momentum {p0}: P(p = {p0}) = {p_at_p0:.10}, position deviates from uniform by at most {max_uniform_deviation:.3e}"
    )
    .unwrap();

    Ok(serde_json::json!({
        "dim": dim,
        "min_position_overlap": min_position_overlap,
        "min_momentum_overlap": min_momentum_overlap,
        "commutator_norm_pq": norm_pq,
        "all_outcomes_ambiguous": all_ambiguous,
        "ambiguity_a": report.ambiguity_a,
        "ambiguity_b": report.ambiguity_b,
        "plane_wave": {
            "p0": p0,
            "momentum_probability_at_p0": p_at_p0,
            "max_position_uniformity_deviation": max_uniform_deviation,
        },
    }))
}

/// Short ket label for a 4-dimensional two-qubit basis state, best effort.
fn ket_label(state: &PureState) -> String {
    if state.dim() == 4 {
        for (k, label) in ["|00>", "|01>", "|10>", "|11>"].iter().enumerate() {
            if state.inner(&PureState::basis_state(4, k)).norm() > 1.0 - 1e-9 {
                return (*label).to_string();
            }
        }
    }
    format!("{:?}", state.amplitudes().as_slice())
}
