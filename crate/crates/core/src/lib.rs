//! Finite-dimensional quantum measurement simulator.
//!
//! The crate models projective measurement end to end: degeneracy-aware
//! spectral analysis, Born probabilities, the Lüders and von Neumann update
//! rules (including the refinement measurements the latter requires for
//! degenerate spectra), Schmidt and biorthogonal analysis of bipartite
//! states, no-signaling verification, and a Monte-Carlo two-wing
//! coincidence-window experiment with CHSH estimation.
//!
//! Everything is dense and double-precision; composite dimensions are meant
//! to stay small (demos use d <= 16, the hard cap is 64). All types are
//! immutable after construction and safe to share across threads.

pub mod composite;
pub mod error;
pub mod experiment;
pub mod linalg;
pub mod measurement;
pub mod random;
pub mod spectral;
pub mod states;

pub use error::{Error, Result};
pub use linalg::{state_distance, tensor, DensityOperator, Operator, PureState, State, Subsystem};
pub use spectral::{commutator_norm, find_coarse_graining, CoarseGraining, SpectralDecomposition};

/// Numeric tolerances used by type invariants and contract checks.
pub mod tol {
    /// Hermiticity acceptance: `max|A - A^dagger|`.
    pub const HERMITIAN: f64 = 1e-10;
    /// Pure-state norm acceptance: `|  ||psi|| - 1 |`.
    pub const NORM: f64 = 1e-10;
    /// Density trace acceptance: `| tr(rho) - 1 |`.
    pub const TRACE: f64 = 1e-10;
    /// Smallest eigenvalue a density operator may have.
    pub const EIGENVALUE_FLOOR: f64 = -1e-10;
    /// Outcomes with Born probability at or below this are unmeasurable.
    pub const PROBABILITY_FLOOR: f64 = 1e-12;
    /// Default relative eigenvalue clustering width.
    pub const CLUSTER: f64 = 1e-8;
    /// Orthonormality acceptance for supplied bases.
    pub const ORTHONORMAL: f64 = 1e-10;
    /// Orthogonality acceptance for conditional-state families.
    pub const FAMILY_ORTHOGONAL: f64 = 1e-8;
    /// Residual acceptance for functional-calculus identities.
    pub const FUNCTION_RESIDUAL: f64 = 1e-9;
    /// Commutator norm below which two observables count as commuting.
    pub const COMMUTING: f64 = 1e-8;
}

/// Hard cap on composite dimensions, keeping dense eigenproblems sub-second.
pub const MAX_DIMENSION: usize = 64;
