//! Monte-Carlo two-wing coincidence experiment.
//!
//! A pair source emits at Poisson arrival times; each wing timestamps its
//! detection with independent Gaussian jitter and may drop it. Analyzer
//! settings are drawn per pair from configured lists in one shared frame.
//! Detections are paired across wings by a greedy earliest-first scan under
//! the time-window constraint `|dt| < window`, and correlations / CHSH are
//! estimated from matched pairs only.
//!
//! All randomness for pair `i` comes from a counter-derived stream keyed by
//! `(seed, i)`, so runs are reproducible bit for bit and may be sharded
//! across threads without changing the merged event log.

mod coincidence;
mod runner;
mod source;
mod stats;

pub use coincidence::{match_coincidences, MatchResult};
pub use runner::{analyze_streams, events_to_csv, run_chsh_experiment, ChshRunResult, SettingPairStats};
pub use source::{joint_outcome_distribution, run_pair_source, run_pair_source_sharded, EventStreams};
pub use stats::{
    chi_square_p_value, chsh_statistic, estimate_correlation, marginal_chi_square, ChshEstimate,
    Correlation, MarginalTest,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// What the source emits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
#[derive(Default)]
pub enum SourceModel {
    /// Spin singlet: joint distribution `P(a, b | s_a, s_b) = (1 - ab cos(s_a - s_b)) / 4`.
    #[default]
    Singlet,
    /// Unentangled product state with fixed orientations; outcomes on the
    /// two wings are independent.
    Product { angle_a: f64, angle_b: f64 },
}


/// Experiment parameters. Time units are arbitrary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    /// Pairs per unit time (Poisson arrivals).
    pub pair_rate: f64,
    /// Standard deviation of per-wing timestamp jitter.
    pub jitter_sigma: f64,
    /// Coincidence window.
    pub window: f64,
    /// Analyzer angles (radians) drawn uniformly per pair, wing A.
    pub settings_a: Vec<f64>,
    /// Analyzer angles (radians) drawn uniformly per pair, wing B.
    pub settings_b: Vec<f64>,
    pub n_pairs: u64,
    pub seed: u64,
    /// Probability that a detection is recorded.
    pub detector_efficiency: f64,
    /// Doubles the analyzer angles (photon-polarization convention).
    pub polarization_mode: bool,
    pub source: SourceModel,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        use std::f64::consts::PI;
        Self {
            pair_rate: 1e3,
            jitter_sigma: 1e-4,
            window: 1e-3,
            settings_a: vec![0.0, PI / 2.0],
            settings_b: vec![PI / 4.0, 3.0 * PI / 4.0],
            n_pairs: 10_000,
            seed: 0,
            detector_efficiency: 1.0,
            polarization_mode: false,
            source: SourceModel::Singlet,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.pair_rate.is_finite() && self.pair_rate > 0.0) {
            return Err(Error::InvalidConfig {
                field: "pair_rate",
                reason: format!("must be finite and positive, got {}", self.pair_rate),
            });
        }
        if !(self.jitter_sigma.is_finite() && self.jitter_sigma >= 0.0) {
            return Err(Error::InvalidConfig {
                field: "jitter_sigma",
                reason: format!("must be finite and nonnegative, got {}", self.jitter_sigma),
            });
        }
        if !(self.window.is_finite() && self.window >= 0.0) {
            return Err(Error::InvalidConfig {
                field: "window",
                reason: format!("must be finite and nonnegative, got {}", self.window),
            });
        }
        for (field, settings) in [("settings_a", &self.settings_a), ("settings_b", &self.settings_b)] {
            if settings.is_empty() {
                return Err(Error::InvalidConfig {
                    field,
                    reason: "must list at least one analyzer angle".into(),
                });
            }
            if settings.iter().any(|s| !s.is_finite()) {
                return Err(Error::InvalidConfig {
                    field,
                    reason: "angles must be finite".into(),
                });
            }
        }
        if self.n_pairs < 1 {
            return Err(Error::InvalidConfig {
                field: "n_pairs",
                reason: "must be at least 1".into(),
            });
        }
        if !(self.detector_efficiency > 0.0 && self.detector_efficiency <= 1.0) {
            return Err(Error::InvalidConfig {
                field: "detector_efficiency",
                reason: format!("must lie in (0, 1], got {}", self.detector_efficiency),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Wing {
    A,
    B,
}

impl std::fmt::Display for Wing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Wing::A => write!(f, "A"),
            Wing::B => write!(f, "B"),
        }
    }
}

/// One detector click.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionEvent {
    pub wing: Wing,
    pub timestamp: f64,
    pub setting: f64,
    /// `+1` or `-1`.
    pub outcome: i8,
}

/// Two window-matched detections; `dt = event_a.timestamp - event_b.timestamp`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoincidencePair {
    pub event_a: DetectionEvent,
    pub event_b: DetectionEvent,
    pub dt: f64,
}
