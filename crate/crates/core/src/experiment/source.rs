//! Pair source: Poisson emissions, per-pair settings, joint outcomes,
//! jitter and detector drops.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, StandardNormal};

use crate::error::Result;
use crate::experiment::{DetectionEvent, ExperimentConfig, SourceModel, Wing};

/// Per-wing detection streams, each sorted by timestamp.
#[derive(Debug, Clone, Default)]
pub struct EventStreams {
    pub wing_a: Vec<DetectionEvent>,
    pub wing_b: Vec<DetectionEvent>,
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Counter-derived stream for pair `index`: every draw for a pair comes
/// from its own generator, so shard boundaries cannot shift the sequence.
fn pair_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut state = seed ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03);
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// Joint outcome probabilities for one emitted pair at the given analyzer
/// settings, in the fixed order `(+1,+1), (+1,-1), (-1,+1), (-1,-1)`.
///
/// For the singlet source this is the quantum joint distribution; sampling
/// it directly is equivalent to sequential Lüders updates on the singlet
/// (covered by a cross-check test against the measurement module).
pub fn joint_outcome_distribution(
    config: &ExperimentConfig,
    setting_a: f64,
    setting_b: f64,
) -> [f64; 4] {
    let scale = if config.polarization_mode { 2.0 } else { 1.0 };
    match config.source {
        SourceModel::Singlet => {
            let corr = -f64::cos(scale * (setting_a - setting_b));
            [
                (1.0 + corr) / 4.0,
                (1.0 - corr) / 4.0,
                (1.0 - corr) / 4.0,
                (1.0 + corr) / 4.0,
            ]
        }
        SourceModel::Product { angle_a, angle_b } => {
            let ea = f64::cos(scale * (setting_a - angle_a));
            let eb = f64::cos(scale * (setting_b - angle_b));
            let p_plus_a = (1.0 + ea) / 2.0;
            let p_plus_b = (1.0 + eb) / 2.0;
            [
                p_plus_a * p_plus_b,
                p_plus_a * (1.0 - p_plus_b),
                (1.0 - p_plus_a) * p_plus_b,
                (1.0 - p_plus_a) * (1.0 - p_plus_b),
            ]
        }
    }
}

fn draw_outcomes(u: f64, probs: &[f64; 4]) -> (i8, i8) {
    const OUTCOMES: [(i8, i8); 4] = [(1, 1), (1, -1), (-1, 1), (-1, -1)];
    let mut cumulative = 0.0;
    for (k, &p) in probs.iter().enumerate() {
        cumulative += p;
        if u < cumulative {
            return OUTCOMES[k];
        }
    }
    OUTCOMES[3]
}

/// Reference single-threaded run.
pub fn run_pair_source(config: &ExperimentConfig) -> Result<EventStreams> {
    run_pair_source_sharded(config, 1)
}

/// Sharded run; the merged, time-sorted log is identical for every shard
/// count, including 1.
pub fn run_pair_source_sharded(config: &ExperimentConfig, shards: usize) -> Result<EventStreams> {
    config.validate()?;
    let shards = shards.max(1).min((config.n_pairs as usize).max(1));
    let n = config.n_pairs;
    let chunk = n.div_ceil(shards as u64);
    let ranges: Vec<(u64, u64)> = (0..shards as u64)
        .map(|k| (k * chunk, ((k + 1) * chunk).min(n)))
        .filter(|(lo, hi)| lo < hi)
        .collect();

    let mut parts: Vec<EventStreams> = Vec::with_capacity(ranges.len());
    if ranges.len() == 1 {
        parts.push(run_range(config, 0, n));
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = ranges
                .iter()
                .map(|&(lo, hi)| scope.spawn(move || run_range(config, lo, hi)))
                .collect();
            for handle in handles {
                parts.push(handle.join().expect("shard worker panicked"));
            }
        });
    }

    let mut streams = EventStreams::default();
    for part in parts {
        streams.wing_a.extend(part.wing_a);
        streams.wing_b.extend(part.wing_b);
    }
    // jitter can reorder neighbouring emissions; stable sort keeps pair
    // order on exact ties so the merged log is shard-invariant
    streams
        .wing_a
        .sort_by(|x, y| x.timestamp.total_cmp(&y.timestamp));
    streams
        .wing_b
        .sort_by(|x, y| x.timestamp.total_cmp(&y.timestamp));
    Ok(streams)
}

/// Generates pairs `lo..hi`. Emission times are a running sum of
/// exponential gaps; the prefix below `lo` is re-derived from the same
/// per-pair streams so all shards agree on the exact float sequence.
fn run_range(config: &ExperimentConfig, lo: u64, hi: u64) -> EventStreams {
    let exp = Exp::new(config.pair_rate).expect("validated positive rate");
    let mut emission = 0.0_f64;
    for i in 0..lo {
        let mut rng = pair_rng(config.seed, i);
        emission += exp.sample(&mut rng);
    }

    let mut streams = EventStreams::default();
    for i in lo..hi {
        let mut rng = pair_rng(config.seed, i);
        emission += exp.sample(&mut rng);
        let ia: usize = rng.random_range(0..config.settings_a.len());
        let ib: usize = rng.random_range(0..config.settings_b.len());
        let setting_a = config.settings_a[ia];
        let setting_b = config.settings_b[ib];
        let u_outcome: f64 = rng.random();
        let z_a: f64 = StandardNormal.sample(&mut rng);
        let z_b: f64 = StandardNormal.sample(&mut rng);
        let u_keep_a: f64 = rng.random();
        let u_keep_b: f64 = rng.random();

        let probs = joint_outcome_distribution(config, setting_a, setting_b);
        let (outcome_a, outcome_b) = draw_outcomes(u_outcome, &probs);

        if u_keep_a < config.detector_efficiency {
            streams.wing_a.push(DetectionEvent {
                wing: Wing::A,
                timestamp: emission + config.jitter_sigma * z_a,
                setting: setting_a,
                outcome: outcome_a,
            });
        }
        if u_keep_b < config.detector_efficiency {
            streams.wing_b.push(DetectionEvent {
                wing: Wing::B,
                timestamp: emission + config.jitter_sigma * z_b,
                setting: setting_b,
                outcome: outcome_b,
            });
        }
    }
    streams
}
