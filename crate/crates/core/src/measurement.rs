//! Projection postulates: Born probabilities, Lüders updates, von Neumann
//! updates with mandatory refinement for degenerate spectra, non-selective
//! instruments and seeded outcome sampling.
//!
//! The two update rules agree on nondegenerate spectra and come apart on
//! degenerate ones. Lüders projects onto the outcome eigenspace whatever its
//! rank; von Neumann's original prescription defines a post-state only for
//! rank-1 outcomes and otherwise requires a refinement observable. Without a
//! refinement the degenerate case returns an explicit
//! [`AmbiguousPostState`] value rather than an error, because the ambiguity
//! is a result worth reporting, not a failure.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{DensityOperator, Operator, PureState, State};
use crate::spectral::{find_coarse_graining, SpectralDecomposition};
use crate::tol;

/// One measurement outcome: eigenvalue, Born probability and post-state.
#[derive(Debug, Clone, Serialize)]
pub struct MeasurementRecord {
    pub outcome: f64,
    pub outcome_index: usize,
    pub probability: f64,
    pub post_state: State,
}

/// Marker for a degenerate von Neumann outcome whose post-state is not
/// determined. `outcome_index` references the outcome within the measured
/// decomposition.
#[derive(Debug, Clone, Serialize)]
pub struct AmbiguousPostState {
    pub outcome: f64,
    pub outcome_index: usize,
    pub eigenspace_dim: usize,
}

/// Result of a von Neumann update.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum VonNeumannOutcome {
    /// Multiplicity 1: identical to the Lüders record.
    Sharp(MeasurementRecord),
    /// Degenerate outcome resolved through a refinement measurement; the
    /// record belongs to the refinement, `coarse_outcome` to the original
    /// observable.
    Refined {
        record: MeasurementRecord,
        coarse_outcome: f64,
    },
    /// Degenerate outcome with no refinement: post-state undefined.
    Ambiguous(AmbiguousPostState),
}

/// Born probabilities for every distinct eigenvalue, in increasing
/// eigenvalue order. The probabilities sum to 1 within 1e-10.
pub fn born_probabilities(
    state: &State,
    d: &SpectralDecomposition,
) -> Result<Vec<(f64, f64)>> {
    check_state_dim(state, d, "born_probabilities")?;
    let probs: Vec<(f64, f64)> = match state {
        State::Pure(psi) => d
            .eigenvalues()
            .iter()
            .zip(d.projectors())
            .map(|(&ev, p)| {
                let projected = p.mul_vec(psi.amplitudes());
                (ev, psi.amplitudes().dotc(&projected).re)
            })
            .collect(),
        State::Density(rho) => d
            .eigenvalues()
            .iter()
            .zip(d.projectors())
            .map(|(&ev, p)| {
                let product = p.entries() * rho.matrix();
                (ev, product.diagonal().sum().re)
            })
            .collect(),
    };
    Ok(probs)
}

/// Lüders (selective) update: projects onto the outcome eigenspace and
/// renormalizes, for any multiplicity.
pub fn luders_update(
    state: &State,
    d: &SpectralDecomposition,
    outcome_index: usize,
) -> Result<MeasurementRecord> {
    check_state_dim(state, d, "luders_update")?;
    let p = d.projector(outcome_index)?;
    match state {
        State::Pure(psi) => {
            let projected = p.mul_vec(psi.amplitudes());
            let probability = projected.norm_squared();
            if probability <= tol::PROBABILITY_FLOOR {
                return Err(Error::ZeroProbabilityOutcome {
                    index: outcome_index,
                    probability,
                });
            }
            let post = PureState::normalized(projected)?;
            Ok(MeasurementRecord {
                outcome: d.eigenvalues()[outcome_index],
                outcome_index,
                probability,
                post_state: State::Pure(post),
            })
        }
        State::Density(rho) => {
            let projected = p.entries() * rho.matrix() * p.entries();
            let probability = projected.diagonal().sum().re;
            if probability <= tol::PROBABILITY_FLOOR {
                return Err(Error::ZeroProbabilityOutcome {
                    index: outcome_index,
                    probability,
                });
            }
            let post = DensityOperator::new(projected / Complex64::new(probability, 0.0))?;
            Ok(MeasurementRecord {
                outcome: d.eigenvalues()[outcome_index],
                outcome_index,
                probability,
                post_state: State::Density(post),
            })
        }
    }
}

/// Von Neumann update.
///
/// For a multiplicity-1 outcome this is the Lüders update. For a degenerate
/// outcome the post-state is undefined unless a nondegenerate `refinement`
/// of the measured observable is supplied; the refinement is then measured
/// (Lüders) and its record returned together with the coarse outcome it
/// implies. Among the refinement outcomes compatible with the requested
/// coarse outcome, the lowest eigenvalue with nonvanishing probability is
/// reported, making the result deterministic; use [`sample_outcome`] on the
/// refinement for a sampled resolution.
pub fn von_neumann_update(
    state: &State,
    d: &SpectralDecomposition,
    outcome_index: usize,
    refinement: Option<&SpectralDecomposition>,
) -> Result<VonNeumannOutcome> {
    check_state_dim(state, d, "von_neumann_update")?;
    if outcome_index >= d.len() {
        return Err(Error::OutcomeIndexOutOfRange {
            index: outcome_index,
            len: d.len(),
        });
    }
    let coarse_map = match refinement {
        Some(c) => Some(validate_refinement(c, d)?),
        None => None,
    };

    let multiplicity = d.multiplicities()[outcome_index];
    if multiplicity == 1 {
        return Ok(VonNeumannOutcome::Sharp(luders_update(
            state,
            d,
            outcome_index,
        )?));
    }

    let (refinement, coarse_map) = match (refinement, coarse_map) {
        (Some(c), Some(map)) => (c, map),
        _ => {
            let probability = born_probabilities(state, d)?[outcome_index].1;
            if probability <= tol::PROBABILITY_FLOOR {
                return Err(Error::ZeroProbabilityOutcome {
                    index: outcome_index,
                    probability,
                });
            }
            return Ok(VonNeumannOutcome::Ambiguous(AmbiguousPostState {
                outcome: d.eigenvalues()[outcome_index],
                outcome_index,
                eigenspace_dim: multiplicity,
            }));
        }
    };

    // Fine outcomes whose coarse value is the requested one.
    let coarse_outcome = d.eigenvalues()[outcome_index];
    let probs = born_probabilities(state, refinement)?;
    for (fine_index, &(fine_ev, p)) in probs.iter().enumerate() {
        let coarse_value = coarse_map.value_for(fine_ev)?;
        if d.nearest_index(coarse_value) == outcome_index && p > tol::PROBABILITY_FLOOR {
            let record = luders_update(state, refinement, fine_index)?;
            return Ok(VonNeumannOutcome::Refined {
                record,
                coarse_outcome,
            });
        }
    }
    Err(Error::ZeroProbabilityOutcome {
        index: outcome_index,
        probability: born_probabilities(state, d)?[outcome_index].1,
    })
}

/// Checks that `c` is a nondegenerate refinement of the observable behind
/// `d`, returning the coarse-graining map.
fn validate_refinement(
    c: &SpectralDecomposition,
    d: &SpectralDecomposition,
) -> Result<crate::spectral::CoarseGraining> {
    if c.dim() != d.dim() {
        return Err(Error::InvalidRefinement {
            reason: format!("dimension {} differs from observable's {}", c.dim(), d.dim()),
        });
    }
    let source = d.reconstruct();
    find_coarse_graining(c, &source).map_err(|e| Error::InvalidRefinement {
        reason: e.to_string(),
    })
}

/// Non-selective update `sum_i P_i rho P_i`.
pub fn nonselective_update(
    rho: &DensityOperator,
    d: &SpectralDecomposition,
) -> Result<DensityOperator> {
    if rho.dim() != d.dim() {
        return Err(Error::DimensionMismatch {
            context: "nonselective_update",
            expected: d.dim(),
            actual: rho.dim(),
        });
    }
    let mut out = DMatrix::<Complex64>::zeros(rho.dim(), rho.dim());
    for p in d.projectors() {
        out += p.entries() * rho.matrix() * p.entries();
    }
    DensityOperator::new(out)
}

/// Samples one outcome by inverse CDF over increasing eigenvalue order and
/// applies the Lüders update. Identical seeds give identical records.
pub fn sample_outcome(
    state: &State,
    d: &SpectralDecomposition,
    rng: &mut impl Rng,
) -> Result<MeasurementRecord> {
    let probs = born_probabilities(state, d)?;
    let u: f64 = rng.random();
    let mut cumulative = 0.0;
    let mut chosen = None;
    for (i, &(_, p)) in probs.iter().enumerate() {
        cumulative += p;
        if p > tol::PROBABILITY_FLOOR {
            chosen = Some(i);
            if u < cumulative {
                break;
            }
        }
    }
    let index = chosen.ok_or(Error::ZeroProbabilityOutcome {
        index: 0,
        probability: 0.0,
    })?;
    luders_update(state, d, index)
}

fn check_state_dim(state: &State, d: &SpectralDecomposition, context: &'static str) -> Result<()> {
    if state.dim() != d.dim() {
        return Err(Error::DimensionMismatch {
            context,
            expected: d.dim(),
            actual: state.dim(),
        });
    }
    Ok(())
}

/// Discrete position/momentum pair: `position = diag(0..dim-1)` and
/// `momentum = F position F^dagger` with `F` the unitary DFT. The plane
/// wave [`plane_wave`]`(dim, p0)` is a momentum eigenstate with eigenvalue
/// `p0` and uniform position probabilities, the finite-dimensional stand-in
/// for the non-normalizable continuous plane wave (hbar = 1 throughout).
#[derive(Debug, Clone)]
pub struct DiscreteCanonicalPair {
    dim: usize,
    position: Operator,
    momentum: Operator,
}

impl DiscreteCanonicalPair {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn position(&self) -> &Operator {
        &self.position
    }

    pub fn momentum(&self) -> &Operator {
        &self.momentum
    }
}

/// Builds the discrete canonical pair; requires `dim >= 2`.
pub fn make_canonical_pair(dim: usize) -> Result<DiscreteCanonicalPair> {
    if dim < 2 {
        return Err(Error::InvalidConfig {
            field: "dim",
            reason: format!("canonical pair needs dim >= 2, got {dim}"),
        });
    }
    let position = Operator::from_real_diagonal(
        &(0..dim).map(|x| x as f64).collect::<Vec<_>>(),
    );
    let f = dft_matrix(dim);
    let momentum = &(&f * &position) * &f.adjoint();
    Ok(DiscreteCanonicalPair {
        dim,
        position,
        momentum,
    })
}

/// Unitary discrete Fourier transform, `F[x, p] = exp(2 pi i x p / dim) / sqrt(dim)`.
///
/// Column `p` is the momentum eigenstate with eigenvalue `p`.
pub fn dft_matrix(dim: usize) -> Operator {
    let scale = 1.0 / (dim as f64).sqrt();
    Operator::from_fn(dim, |x, p| {
        let angle = 2.0 * std::f64::consts::PI * (x as f64) * (p as f64) / dim as f64;
        Complex64::new(angle.cos() * scale, angle.sin() * scale)
    })
}

/// Discrete plane wave with momentum `p0` (taken mod `dim`): amplitudes
/// `exp(2 pi i p0 x / dim) / sqrt(dim)`.
pub fn plane_wave(dim: usize, p0: usize) -> Result<PureState> {
    if dim < 2 {
        return Err(Error::InvalidConfig {
            field: "dim",
            reason: format!("plane wave needs dim >= 2, got {dim}"),
        });
    }
    let p0 = p0 % dim;
    let scale = 1.0 / (dim as f64).sqrt();
    let amps: Vec<Complex64> = (0..dim)
        .map(|x| {
            let angle = 2.0 * std::f64::consts::PI * (p0 as f64) * (x as f64) / dim as f64;
            Complex64::new(angle.cos() * scale, angle.sin() * scale)
        })
        .collect();
    PureState::from_amplitudes(&amps)
}
