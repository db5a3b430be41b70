//! Subcommand smoke tests and input-error contracts.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn binary() -> &'static str {
    env!("CARGO_BIN_EXE_eprsim")
}

fn asset(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("assets").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(binary())
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
#[allow(clippy::approx_constant)] // 0.7071 at 1e-4 is the packaged example's contract
fn schmidt_on_packaged_bell_state() {
    let out = tempfile::tempdir().unwrap();
    let output = run(&[
        "schmidt",
        "--config",
        asset("bell_schmidt.json").to_str().unwrap(),
        "--out",
        out.path().to_str().unwrap(),
    ]);
    assert!(output.status.success(), "{output:?}");
    let artifact: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.path().join("schmidt.json")).unwrap())
            .unwrap();
    let coefficients = artifact["coefficients"].as_array().unwrap();
    for c in coefficients {
        assert!((c.as_f64().unwrap() - 0.7071).abs() < 1e-4);
    }
    assert_eq!(artifact["rank"], 2);
}

#[test]
fn measure_reports_ambiguity_and_refinement() {
    let out = tempfile::tempdir().unwrap();
    let output = run(&[
        "measure",
        "--config",
        asset("singlet_measure.json").to_str().unwrap(),
        "--out",
        out.path().to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert!(output.status.success(), "{output:?}");
    let artifact: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(out.path().join("measurement.json")).unwrap(),
    )
    .unwrap();
    for verdict in artifact["von_neumann"].as_array().unwrap() {
        assert_eq!(verdict["verdict"], "ambiguous");
        assert_eq!(verdict["eigenspace_dim"], 2);
    }
    for verdict in artifact["von_neumann_refined"].as_array().unwrap() {
        assert_eq!(verdict["verdict"], "refined");
    }
}

#[test]
fn epr_report_reconstructs_noncommuting_partners() {
    let out = tempfile::tempdir().unwrap();
    let output = run(&[
        "epr-report",
        "--config",
        asset("epr_singlet.json").to_str().unwrap(),
        "--out",
        out.path().to_str().unwrap(),
    ]);
    assert!(output.status.success(), "{output:?}");
    let artifact: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(out.path().join("epr_report.json")).unwrap(),
    )
    .unwrap();
    assert!(artifact["commutator_norm_pq"].as_f64().unwrap() > 0.0);
    assert!(artifact["partner_observable_p"].is_object());
}

#[test]
fn refine_verifies_both_maps() {
    let out = tempfile::tempdir().unwrap();
    let output = run(&[
        "refine",
        "--config",
        asset("refine_zx.json").to_str().unwrap(),
        "--out",
        out.path().to_str().unwrap(),
    ]);
    assert!(output.status.success(), "{output:?}");
    let artifact: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.path().join("refine.json")).unwrap())
            .unwrap();
    assert!(artifact["residual_first"].as_f64().unwrap() < 1e-9);
    assert!(artifact["residual_second"].as_f64().unwrap() < 1e-9);
}

#[test]
fn nosignal_sweep_passes_threshold() {
    let out = tempfile::tempdir().unwrap();
    let output = run(&[
        "nosignal",
        "--instances",
        "150",
        "--seed",
        "3",
        "--out",
        out.path().to_str().unwrap(),
    ]);
    assert!(output.status.success(), "{output:?}");
    let artifact: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(out.path().join("nosignal.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(artifact["all_within_threshold"], true);
}

#[test]
fn demo_prints_the_walkthroughs() {
    let out = tempfile::tempdir().unwrap();
    let output = run(&["demo", "--out", out.path().to_str().unwrap()]);
    assert!(output.status.success(), "{output:?}");
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("post-state NOT determined"));
    assert!(stdout.contains("non-selective measurement on wing 1"));
    assert!(out.path().join("demo_singlet.json").exists());
    assert!(out.path().join("demo_qudit.json").exists());
    assert!(out.path().join("manifest.json").exists());
}

#[test]
fn invalid_json_exits_one_and_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.json");
    // a ragged matrix row inside `observable`
    std::fs::write(
        &input,
        r#"{"state": {"kind":"pure","dim":2,"entries":[[1.0,0.0],[0.0,0.0]]},
           "observable": {"dim":2,"entries":[[[1.0,0.0]],[[0.0,0.0],[1.0,0.0]]]}}"#,
    )
    .unwrap();
    let out = dir.path().join("out");
    let output = run(&[
        "measure",
        "--config",
        input.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("observable"), "stderr: {stderr}");
    // no partial artifacts
    assert!(!out.exists());
}

#[test]
fn missing_config_exits_one() {
    let output = run(&["chsh"]);
    assert_eq!(output.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&output.stderr).contains("--config"));
}

#[test]
fn invalid_experiment_config_names_field() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad_chsh.json");
    std::fs::write(&input, r#"{"n_pairs": 10, "detector_efficiency": 1.5}"#).unwrap();
    let out = dir.path().join("out");
    let output = run(&[
        "chsh",
        "--config",
        input.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("detector_efficiency"), "stderr: {stderr}");
    assert!(!out.exists());
}

#[test]
fn unnormalized_state_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad_state.json");
    std::fs::write(
        &input,
        r#"{"state": {"dim":4,"entries":[[1.0,0.0],[1.0,0.0],[0.0,0.0],[0.0,0.0]]}, "d1":2, "d2":2}"#,
    )
    .unwrap();
    let output = run(&[
        "schmidt",
        "--config",
        input.to_str().unwrap(),
        "--out",
        dir.path().join("out").to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&output.stderr).contains("state"));
}
