//! Composite-system analysis: Schmidt decomposition, biorthogonal
//! expansions, conditional partner states, the two-wave-function assignment
//! report, joint refinements and no-signaling verification.
//!
//! Throughout, a bipartite pure state on `d1 * d2` uses the crate index
//! convention `i1 * d2 + i2`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{state_distance, DensityOperator, Operator, PureState, State, Subsystem};
use crate::measurement::{von_neumann_update, VonNeumannOutcome};
use crate::spectral::{commutator_norm, CoarseGraining, SpectralDecomposition};
use crate::tol;

/// Canonical biorthogonal expansion `psi = sum_k c_k u_k (x) v_k` with
/// descending nonnegative coefficients and orthonormal bases on both
/// factors.
///
/// Phases are fixed by making the largest-magnitude entry of each `basis_1`
/// vector real and positive (ties to the lowest index), with the
/// compensating phase moved into `basis_2`.
#[derive(Debug, Clone, Serialize)]
pub struct SchmidtDecomposition {
    pub coefficients: Vec<f64>,
    pub basis_1: Vec<PureState>,
    pub basis_2: Vec<PureState>,
}

impl SchmidtDecomposition {
    /// Number of coefficients above `1e-10`.
    pub fn rank(&self) -> usize {
        self.coefficients.iter().filter(|&&c| c > 1e-10).count()
    }

    /// `sum_k c_k (basis_1[k] (x) basis_2[k])` as a raw vector.
    pub fn reconstruct_vector(&self) -> DVector<Complex64> {
        let d1 = self.basis_1[0].dim();
        let d2 = self.basis_2[0].dim();
        let mut out = DVector::<Complex64>::zeros(d1 * d2);
        for ((&c, u), v) in self
            .coefficients
            .iter()
            .zip(&self.basis_1)
            .zip(&self.basis_2)
        {
            let scale = Complex64::new(c, 0.0);
            for i in 0..d1 {
                for j in 0..d2 {
                    out[i * d2 + j] += scale * u.amplitudes()[i] * v.amplitudes()[j];
                }
            }
        }
        out
    }
}

/// Reshapes a bipartite state into its `d1 x d2` coefficient matrix.
fn coefficient_matrix(psi: &PureState, d1: usize, d2: usize) -> Result<DMatrix<Complex64>> {
    if d1 * d2 != psi.dim() {
        return Err(Error::BadFactorization {
            dim: psi.dim(),
            d1,
            d2,
        });
    }
    Ok(DMatrix::from_fn(d1, d2, |i, j| {
        psi.amplitudes()[i * d2 + j]
    }))
}

/// Schmidt decomposition by singular value decomposition of the reshaped
/// coefficient matrix.
pub fn schmidt_decompose(psi: &PureState, d1: usize, d2: usize) -> Result<SchmidtDecomposition> {
    let m = coefficient_matrix(psi, d1, d2)?;
    let svd = m.svd(true, true);
    let u = svd.u.expect("u requested");
    let v_t = svd.v_t.expect("v_t requested");
    let r = svd.singular_values.len();

    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));

    let mut coefficients = Vec::with_capacity(r);
    let mut basis_1 = Vec::with_capacity(r);
    let mut basis_2 = Vec::with_capacity(r);
    for &k in &order {
        coefficients.push(svd.singular_values[k]);
        let left = u.column(k).clone_owned();
        let right = v_t.row(k).transpose();
        // move the canonicalizing phase of the left vector into the right
        let phase = crate::linalg::dominant_phase(&left);
        basis_1.push(PureState::normalized(left * phase.conj())?);
        basis_2.push(PureState::normalized(right * phase)?);
    }
    Ok(SchmidtDecomposition {
        coefficients,
        basis_1,
        basis_2,
    })
}

/// Expands `psi` over an orthonormal basis of the first factor, returning
/// the unnormalized partner vectors on the second factor.
///
/// The partner norms satisfy `sum ||psi_n||^2 = 1`, but the partners are
/// orthogonal only when `basis_1` is a Schmidt basis.
pub fn biorthogonal_expansion(
    psi: &PureState,
    basis_1: &[PureState],
) -> Result<Vec<DVector<Complex64>>> {
    let d1 = basis_1.len();
    if d1 == 0 || !psi.dim().is_multiple_of(d1) {
        return Err(Error::BadFactorization {
            dim: psi.dim(),
            d1,
            d2: psi.dim().checked_div(d1).unwrap_or(0),
        });
    }
    let d2 = psi.dim() / d1;
    let mut gram_dev = 0.0_f64;
    for (i, u) in basis_1.iter().enumerate() {
        if u.dim() != d1 {
            return Err(Error::DimensionMismatch {
                context: "biorthogonal_expansion basis vector",
                expected: d1,
                actual: u.dim(),
            });
        }
        for (j, w) in basis_1.iter().enumerate() {
            let overlap = u.inner(w);
            let target = if i == j { 1.0 } else { 0.0 };
            gram_dev = gram_dev.max((overlap - Complex64::new(target, 0.0)).norm());
        }
    }
    if gram_dev > tol::ORTHONORMAL {
        return Err(Error::NotOrthonormal {
            deviation: gram_dev,
        });
    }
    Ok(basis_1
        .iter()
        .map(|u| partner_vector(psi, u, d2))
        .collect())
}

/// `c[j] = sum_i conj(u[i]) psi[i * d2 + j]`.
fn partner_vector(psi: &PureState, u: &PureState, d2: usize) -> DVector<Complex64> {
    DVector::from_fn(d2, |j, _| {
        u.amplitudes()
            .iter()
            .enumerate()
            .map(|(i, a)| a.conj() * psi.amplitudes()[i * d2 + j])
            .sum()
    })
}

/// Normalized partner state of the second factor, conditional on outcome
/// `outcome_index` of a nondegenerate first-factor observable, together
/// with the outcome's Born probability. This is the Lüders conditional
/// state.
pub fn conditional_partner_state(
    psi: &PureState,
    a_on_s1: &SpectralDecomposition,
    outcome_index: usize,
) -> Result<(PureState, f64)> {
    let d1 = a_on_s1.dim();
    if !psi.dim().is_multiple_of(d1) {
        return Err(Error::BadFactorization {
            dim: psi.dim(),
            d1,
            d2: 0,
        });
    }
    a_on_s1.require_nondegenerate()?;
    let d2 = psi.dim() / d1;
    let u = a_on_s1.eigenvector(outcome_index)?;
    let partner = partner_vector(psi, &u, d2);
    let probability = partner.norm_squared();
    if probability <= tol::PROBABILITY_FLOOR {
        return Err(Error::ZeroProbabilityOutcome {
            index: outcome_index,
            probability,
        });
    }
    Ok((PureState::normalized(partner)?, probability))
}

/// One entry of a conditional-state family.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionalOutcome {
    pub outcome: f64,
    pub probability: f64,
    /// `None` when the outcome probability vanishes.
    pub partner: Option<PureState>,
}

/// What the von Neumann postulate licenses for one outcome.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AmbiguityVerdict {
    /// Rank-1 outcome: post-state determined.
    Determined { outcome: f64 },
    /// Degenerate outcome without refinement: post-state not determined.
    Ambiguous { outcome: f64, eigenspace_dim: usize },
    /// Outcome cannot occur on this state.
    ZeroProbability { outcome: f64 },
}

/// Juxtaposes the conditional states a selective (Lüders) reading assigns
/// to the second system with the verdicts von Neumann's postulate actually
/// licenses for the same measurements.
///
/// `family_a` lists the conditional partner states for each outcome of `a`
/// on the first factor (`family_b` likewise for `b`). When a family is
/// orthogonal and complete it is the eigenbasis of a reconstructible
/// partner observable on the second factor, reported as
/// `partner_observable_p` / `_q` with eigenvalues `0..d2-1` in outcome
/// order.
#[derive(Debug, Clone, Serialize)]
pub struct EprAssignmentReport {
    pub d1: usize,
    pub d2: usize,
    pub family_a: Vec<ConditionalOutcome>,
    pub family_b: Vec<ConditionalOutcome>,
    pub partner_observable_p: Option<Operator>,
    pub partner_observable_q: Option<Operator>,
    pub commutator_norm_pq: Option<f64>,
    pub ambiguity_a: Vec<AmbiguityVerdict>,
    pub ambiguity_b: Vec<AmbiguityVerdict>,
}

/// Builds the assignment report for two noncommuting nondegenerate
/// observables on the first factor.
pub fn epr_assignment_report(
    psi: &PureState,
    a_on_s1: &Operator,
    b_on_s1: &Operator,
) -> Result<EprAssignmentReport> {
    a_on_s1.check_same_dim(b_on_s1, "epr_assignment_report")?;
    let d1 = a_on_s1.dim();
    if !psi.dim().is_multiple_of(d1) {
        return Err(Error::BadFactorization {
            dim: psi.dim(),
            d1,
            d2: 0,
        });
    }
    let d2 = psi.dim() / d1;
    let norm_ab = commutator_norm(a_on_s1, b_on_s1)?;
    if norm_ab <= tol::COMMUTING {
        return Err(Error::ObservablesCommute { norm: norm_ab });
    }
    let a = SpectralDecomposition::with_default_tol(a_on_s1)?;
    let b = SpectralDecomposition::with_default_tol(b_on_s1)?;
    a.require_nondegenerate()?;
    b.require_nondegenerate()?;

    let family_a = conditional_family(psi, &a, d2)?;
    let family_b = conditional_family(psi, &b, d2)?;
    let partner_observable_p = partner_observable(&family_a, d2);
    let partner_observable_q = partner_observable(&family_b, d2);
    let commutator_norm_pq = match (&partner_observable_p, &partner_observable_q) {
        (Some(p), Some(q)) => Some(commutator_norm(p, q)?),
        _ => None,
    };

    Ok(EprAssignmentReport {
        d1,
        d2,
        ambiguity_a: ambiguity_verdicts(psi, &a, d2)?,
        ambiguity_b: ambiguity_verdicts(psi, &b, d2)?,
        family_a,
        family_b,
        partner_observable_p,
        partner_observable_q,
        commutator_norm_pq,
    })
}

fn conditional_family(
    psi: &PureState,
    d: &SpectralDecomposition,
    d2: usize,
) -> Result<Vec<ConditionalOutcome>> {
    (0..d.len())
        .map(|k| {
            let u = d.eigenvector(k)?;
            let partner = partner_vector(psi, &u, d2);
            let probability = partner.norm_squared();
            let partner = if probability > tol::PROBABILITY_FLOOR {
                Some(PureState::normalized(partner)?)
            } else {
                None
            };
            Ok(ConditionalOutcome {
                outcome: d.eigenvalues()[k],
                probability,
                partner,
            })
        })
        .collect()
}

/// Observable whose eigenbasis is the family, when the family is an
/// orthogonal basis of the second factor; eigenvalues are `0..d2-1` in
/// outcome order.
fn partner_observable(family: &[ConditionalOutcome], d2: usize) -> Option<Operator> {
    let states: Vec<&PureState> = family.iter().filter_map(|c| c.partner.as_ref()).collect();
    if states.len() != d2 {
        return None;
    }
    for i in 0..states.len() {
        for j in (i + 1)..states.len() {
            if states[i].inner(states[j]).norm() > tol::FAMILY_ORTHOGONAL {
                return None;
            }
        }
    }
    let mut m = DMatrix::<Complex64>::zeros(d2, d2);
    for (k, s) in states.iter().enumerate() {
        m += (s.amplitudes() * s.amplitudes().adjoint()) * Complex64::new(k as f64, 0.0);
    }
    Some(Operator::new(m).expect("square by construction"))
}

fn ambiguity_verdicts(
    psi: &PureState,
    d_on_s1: &SpectralDecomposition,
    d2: usize,
) -> Result<Vec<AmbiguityVerdict>> {
    let embedded = d_on_s1.tensor_identity(d2);
    let state = State::Pure(psi.clone());
    (0..embedded.len())
        .map(|k| {
            let outcome = embedded.eigenvalues()[k];
            match von_neumann_update(&state, &embedded, k, None) {
                Ok(VonNeumannOutcome::Sharp(_)) => Ok(AmbiguityVerdict::Determined { outcome }),
                Ok(VonNeumannOutcome::Ambiguous(marker)) => Ok(AmbiguityVerdict::Ambiguous {
                    outcome,
                    eigenspace_dim: marker.eigenspace_dim,
                }),
                Ok(VonNeumannOutcome::Refined { .. }) => unreachable!("no refinement supplied"),
                Err(Error::ZeroProbabilityOutcome { .. }) => {
                    Ok(AmbiguityVerdict::ZeroProbability { outcome })
                }
                Err(e) => Err(e),
            }
        })
        .collect()
}

/// A nondegenerate composite observable `D` with `A (x) I = f(D)` and
/// `I (x) C = g(D)`.
#[derive(Debug, Clone, Serialize)]
pub struct JointRefinement {
    refined: SpectralDecomposition,
    coarse_first: CoarseGraining,
    coarse_second: CoarseGraining,
}

impl JointRefinement {
    pub fn refined(&self) -> &SpectralDecomposition {
        &self.refined
    }

    /// `f` with `A (x) I = f(D)`.
    pub fn coarse_first(&self) -> &CoarseGraining {
        &self.coarse_first
    }

    /// `g` with `I (x) C = g(D)`.
    pub fn coarse_second(&self) -> &CoarseGraining {
        &self.coarse_second
    }
}

/// Builds the joint refinement of nondegenerate observables on the two
/// factors. The refined spectrum is `k * d2 + l` for first-factor outcome
/// `k` and second-factor outcome `l`, an injective pairing of the factor
/// eigenvalues; both coarse-graining identities are verified before the
/// refinement is returned.
pub fn build_joint_refinement(
    a_on_s1: &SpectralDecomposition,
    c_on_s2: &SpectralDecomposition,
) -> Result<JointRefinement> {
    a_on_s1.require_nondegenerate()?;
    c_on_s2.require_nondegenerate()?;
    let d1 = a_on_s1.dim();
    let d2 = c_on_s2.dim();

    let mut eigenvalues = Vec::with_capacity(d1 * d2);
    let mut projectors = Vec::with_capacity(d1 * d2);
    let mut first_pairs = Vec::with_capacity(d1 * d2);
    let mut second_pairs = Vec::with_capacity(d1 * d2);
    for (k, p) in a_on_s1.projectors().iter().enumerate() {
        for (l, q) in c_on_s2.projectors().iter().enumerate() {
            let value = (k * d2 + l) as f64;
            eigenvalues.push(value);
            projectors.push(p.tensor(q));
            first_pairs.push((value, a_on_s1.eigenvalues()[k]));
            second_pairs.push((value, c_on_s2.eigenvalues()[l]));
        }
    }
    let refined = SpectralDecomposition::from_parts(
        d1 * d2,
        eigenvalues,
        projectors,
        vec![1; d1 * d2],
    );
    let coarse_first = CoarseGraining::from_pairs(first_pairs);
    let coarse_second = CoarseGraining::from_pairs(second_pairs);

    // verify A (x) I = f(D) and I (x) C = g(D)
    let a_embedded = a_on_s1.reconstruct().tensor(&Operator::identity(d2));
    let c_embedded = Operator::identity(d1).tensor(&c_on_s2.reconstruct());
    let f_of_d = refined.apply_function(coarse_first.as_fn())?;
    let g_of_d = refined.apply_function(coarse_second.as_fn())?;
    let residual_f = (&f_of_d - &a_embedded).max_abs();
    let residual_g = (&g_of_d - &c_embedded).max_abs();
    if residual_f > tol::FUNCTION_RESIDUAL || residual_g > tol::FUNCTION_RESIDUAL {
        return Err(Error::VerificationFailed {
            context: "build_joint_refinement",
            residual: residual_f.max(residual_g),
        });
    }

    Ok(JointRefinement {
        refined,
        coarse_first,
        coarse_second,
    })
}

/// Outcome of a randomized [`no_signaling_check`] sweep.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct NoSignalingSweep {
    pub instances: usize,
    pub max_distance: f64,
    pub mean_distance: f64,
}

/// Runs `instances` random `(density operator, first-factor observable)`
/// checks over factor dimensions `min_dim..=max_dim`, seeded.
pub fn no_signaling_sweep(
    instances: usize,
    min_dim: usize,
    max_dim: usize,
    seed: u64,
) -> Result<NoSignalingSweep> {
    if instances == 0 {
        return Err(Error::InvalidConfig {
            field: "instances",
            reason: "must be at least 1".into(),
        });
    }
    if min_dim < 2 || max_dim < min_dim {
        return Err(Error::InvalidConfig {
            field: "min_dim",
            reason: format!("need 2 <= min_dim <= max_dim, got {min_dim}..{max_dim}"),
        });
    }
    let mut rng = crate::random::seeded_rng(seed);
    let span = max_dim - min_dim + 1;
    let mut max_distance = 0.0_f64;
    let mut sum = 0.0_f64;
    for trial in 0..instances {
        let d1 = min_dim + trial % span;
        let d2 = min_dim + (trial / span) % span;
        let rho = crate::random::density(&mut rng, d1 * d2);
        let a = SpectralDecomposition::with_default_tol(&crate::random::hermitian(&mut rng, d1))?;
        let distance = no_signaling_check(&rho, &a)?;
        max_distance = max_distance.max(distance);
        sum += distance;
    }
    Ok(NoSignalingSweep {
        instances,
        max_distance,
        mean_distance: sum / instances as f64,
    })
}

/// Trace distance between the second factor's reduced state before and
/// after a non-selective measurement of `a (x) I`; zero for every state
/// and observable (no signaling).
pub fn no_signaling_check(
    rho: &DensityOperator,
    a_on_s1: &SpectralDecomposition,
) -> Result<f64> {
    let d1 = a_on_s1.dim();
    if !rho.dim().is_multiple_of(d1) {
        return Err(Error::BadFactorization {
            dim: rho.dim(),
            d1,
            d2: 0,
        });
    }
    let d2 = rho.dim() / d1;
    let before = rho.partial_trace(Subsystem::Second, d1, d2)?;
    let embedded = a_on_s1.tensor_identity(d2);
    let updated = crate::measurement::nonselective_update(rho, &embedded)?;
    let after = updated.partial_trace(Subsystem::Second, d1, d2)?;
    state_distance(&before, &after)
}
