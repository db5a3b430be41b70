//! Time-window coincidence matching.

use crate::error::{Error, Result};
use crate::experiment::{CoincidencePair, DetectionEvent};

/// Matched pairs plus the per-wing counts of events left unmatched.
#[derive(Debug, Clone)]
pub struct MatchResult {
    pub pairs: Vec<CoincidencePair>,
    pub unmatched_a: usize,
    pub unmatched_b: usize,
}

/// Greedy earliest-first matching under `|dt| < window`.
///
/// Both streams must be sorted by timestamp. The scan walks both streams in
/// time order and pairs the earliest mutually-unmatched cross-wing events
/// inside the window; every event is used at most once. An event whose
/// earliest available partner already lies outside the window can never be
/// matched and is dropped.
pub fn match_coincidences(
    events_a: &[DetectionEvent],
    events_b: &[DetectionEvent],
    window: f64,
) -> Result<MatchResult> {
    for (events, name) in [(events_a, "events_a"), (events_b, "events_b")] {
        if let Some(pos) = events
            .windows(2)
            .position(|w| w[0].timestamp > w[1].timestamp)
        {
            let _ = name;
            return Err(Error::UnsortedEvents { index: pos + 1 });
        }
    }
    if !(window.is_finite() && window >= 0.0) {
        return Err(Error::InvalidConfig {
            field: "window",
            reason: format!("must be finite and nonnegative, got {window}"),
        });
    }

    let mut pairs = Vec::new();
    let mut unmatched_a = 0;
    let mut unmatched_b = 0;
    let mut i = 0;
    let mut j = 0;
    while i < events_a.len() && j < events_b.len() {
        let dt = events_a[i].timestamp - events_b[j].timestamp;
        if dt.abs() < window {
            pairs.push(CoincidencePair {
                event_a: events_a[i],
                event_b: events_b[j],
                dt,
            });
            i += 1;
            j += 1;
        } else if events_a[i].timestamp < events_b[j].timestamp {
            unmatched_a += 1;
            i += 1;
        } else {
            unmatched_b += 1;
            j += 1;
        }
    }
    unmatched_a += events_a.len() - i;
    unmatched_b += events_b.len() - j;
    Ok(MatchResult {
        pairs,
        unmatched_a,
        unmatched_b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::{run_pair_source, ExperimentConfig, Wing};

    fn event(wing: Wing, timestamp: f64) -> DetectionEvent {
        DetectionEvent {
            wing,
            timestamp,
            setting: 0.0,
            outcome: 1,
        }
    }

    #[test]
    fn zero_jitter_matches_every_pair_with_zero_dt() {
        let config = ExperimentConfig {
            jitter_sigma: 0.0,
            n_pairs: 1_000,
            ..Default::default()
        };
        let streams = run_pair_source(&config).unwrap();
        let result = match_coincidences(&streams.wing_a, &streams.wing_b, config.window).unwrap();
        assert_eq!(result.pairs.len(), 1_000);
        assert_eq!(result.unmatched_a + result.unmatched_b, 0);
        assert!(result.pairs.iter().all(|p| p.dt == 0.0));
    }

    #[test]
    fn zero_window_matches_nothing() {
        let config = ExperimentConfig {
            window: 0.0,
            n_pairs: 200,
            ..Default::default()
        };
        let streams = run_pair_source(&config).unwrap();
        let result = match_coincidences(&streams.wing_a, &streams.wing_b, config.window).unwrap();
        assert!(result.pairs.is_empty());
        assert_eq!(result.unmatched_a, 200);
        assert_eq!(result.unmatched_b, 200);
    }

    #[test]
    fn hand_listed_streams_match_once() {
        let a = [event(Wing::A, 1.0), event(Wing::A, 2.0)];
        let b = [event(Wing::B, 1.05), event(Wing::B, 3.0)];
        let result = match_coincidences(&a, &b, 0.1).unwrap();
        assert_eq!(result.pairs.len(), 1);
        assert_eq!(result.pairs[0].event_a.timestamp, 1.0);
        assert_eq!(result.pairs[0].event_b.timestamp, 1.05);
        assert!((result.pairs[0].dt + 0.05).abs() < 1e-12);
        assert_eq!(result.unmatched_a, 1);
        assert_eq!(result.unmatched_b, 1);
    }

    #[test]
    fn rejects_unsorted_input() {
        let a = [event(Wing::A, 2.0), event(Wing::A, 1.0)];
        let b = [event(Wing::B, 1.0)];
        assert!(matches!(
            match_coincidences(&a, &b, 0.1),
            Err(Error::UnsortedEvents { index: 1 })
        ));
    }

    #[test]
    fn every_pair_respects_the_window_and_uniqueness() {
        let config = ExperimentConfig {
            n_pairs: 5_000,
            detector_efficiency: 0.7,
            seed: 13,
            ..Default::default()
        };
        let streams = run_pair_source(&config).unwrap();
        let result = match_coincidences(&streams.wing_a, &streams.wing_b, config.window).unwrap();
        assert!(result.pairs.iter().all(|p| p.dt.abs() < config.window));
        assert_eq!(
            result.pairs.len() + result.unmatched_a,
            streams.wing_a.len()
        );
        assert_eq!(
            result.pairs.len() + result.unmatched_b,
            streams.wing_b.len()
        );
        // strictly increasing timestamps within matched sequences imply
        // each event is used at most once
        assert!(result
            .pairs
            .windows(2)
            .all(|w| w[0].event_a.timestamp <= w[1].event_a.timestamp
                && w[0].event_b.timestamp <= w[1].event_b.timestamp));
    }
}
