//! Full experiment driver and artifact encodings.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::Result;
use crate::experiment::{
    chsh_statistic, estimate_correlation, match_coincidences, run_pair_source_sharded,
    ChshEstimate, EventStreams, ExperimentConfig,
};

/// Per-setting-combination correlation estimate.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SettingPairStats {
    pub setting_a: f64,
    pub setting_b: f64,
    pub n: usize,
    pub e: f64,
    pub std_error: f64,
}

/// Everything a run reports; serializes to the results JSON.
#[derive(Debug, Clone, Serialize)]
pub struct ChshRunResult {
    pub seed: u64,
    pub n_pairs: u64,
    pub window: f64,
    pub detected_a: usize,
    pub detected_b: usize,
    pub coincidences: usize,
    pub unmatched_a: usize,
    pub unmatched_b: usize,
    /// Matched pairs over the smaller wing count.
    pub coincidence_fraction: f64,
    pub correlations: Vec<SettingPairStats>,
    /// Present when both wings have exactly two settings.
    pub chsh: Option<ChshEstimate>,
}

/// Runs source, matching and estimation in one pass. `shards` only affects
/// how generation is parallelized, never the output.
pub fn run_chsh_experiment(config: &ExperimentConfig, shards: usize) -> Result<ChshRunResult> {
    let streams = run_pair_source_sharded(config, shards)?;
    analyze_streams(config, &streams)
}

/// Matching and estimation over already-generated streams.
pub fn analyze_streams(config: &ExperimentConfig, streams: &EventStreams) -> Result<ChshRunResult> {
    let matched = match_coincidences(&streams.wing_a, &streams.wing_b, config.window)?;

    let mut correlations = Vec::new();
    for &sa in &config.settings_a {
        for &sb in &config.settings_b {
            match estimate_correlation(&matched.pairs, sa, sb) {
                Ok(corr) => correlations.push(SettingPairStats {
                    setting_a: sa,
                    setting_b: sb,
                    n: corr.n,
                    e: corr.e,
                    std_error: corr.std_error,
                }),
                Err(crate::Error::NoPairsAtSettings { .. }) => correlations.push(SettingPairStats {
                    setting_a: sa,
                    setting_b: sb,
                    n: 0,
                    e: f64::NAN,
                    std_error: f64::NAN,
                }),
                Err(e) => return Err(e),
            }
        }
    }

    let chsh = if config.settings_a.len() == 2 && config.settings_b.len() == 2 {
        let full: Vec<crate::experiment::Correlation> = correlations
            .iter()
            .map(|s| crate::experiment::Correlation {
                e: s.e,
                std_error: s.std_error,
                n: s.n,
            })
            .collect();
        if full.iter().all(|c| c.n > 0) {
            // order: (a,b), (a,b'), (a',b), (a',b')
            Some(chsh_statistic(&full[0], &full[1], &full[2], &full[3]))
        } else {
            None
        }
    } else {
        None
    };

    let min_detected = streams.wing_a.len().min(streams.wing_b.len());
    let coincidence_fraction = if min_detected == 0 {
        0.0
    } else {
        matched.pairs.len() as f64 / min_detected as f64
    };

    Ok(ChshRunResult {
        seed: config.seed,
        n_pairs: config.n_pairs,
        window: config.window,
        detected_a: streams.wing_a.len(),
        detected_b: streams.wing_b.len(),
        coincidences: matched.pairs.len(),
        unmatched_a: matched.unmatched_a,
        unmatched_b: matched.unmatched_b,
        coincidence_fraction,
        correlations,
        chsh,
    })
}

/// Merged event log: `wing,timestamp,setting,outcome` rows in time order
/// (stable on ties), with a header line.
pub fn events_to_csv(streams: &EventStreams) -> String {
    let mut rows: Vec<&crate::experiment::DetectionEvent> =
        streams.wing_a.iter().chain(&streams.wing_b).collect();
    rows.sort_by(|x, y| x.timestamp.total_cmp(&y.timestamp));
    let mut out = String::with_capacity(rows.len() * 32 + 32);
    out.push_str("wing,timestamp,setting,outcome\n");
    for event in rows {
        writeln!(
            out,
            "{},{},{},{}",
            event.wing, event.timestamp, event.setting, event.outcome
        )
        .expect("writing to string cannot fail");
    }
    out
}
