//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{context}: dimension mismatch (expected {expected}, got {actual})")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension {dim} does not factor as {d1}x{d2}")]
    BadFactorization { dim: usize, d1: usize, d2: usize },

    #[error("operator is not Hermitian (max deviation {deviation:.3e}, tolerance {tol:.1e})")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("state vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("not a density operator: {reason}")]
    NotDensity { reason: String },

    #[error("basis is not orthonormal (max Gram deviation {deviation:.3e})")]
    NotOrthonormal { deviation: f64 },

    #[error("outcome index {index} out of range ({len} outcomes)")]
    OutcomeIndexOutOfRange { index: usize, len: usize },

    #[error("outcome {index} has probability {probability:.3e}, below the measurable threshold")]
    ZeroProbabilityOutcome { index: usize, probability: f64 },

    #[error("function is undefined at eigenvalue {eigenvalue}")]
    FunctionUndefined { eigenvalue: f64 },

    #[error("observable is not a function of the given spectrum (residual {residual:.3e})")]
    NotAFunction { residual: f64 },

    #[error("refinement spectrum is degenerate (eigenvalue {eigenvalue} has multiplicity {multiplicity})")]
    DegenerateRefinement { eigenvalue: f64, multiplicity: usize },

    #[error("invalid refinement: {reason}")]
    InvalidRefinement { reason: String },

    #[error("input must be nondegenerate (eigenvalue {eigenvalue} has multiplicity {multiplicity})")]
    DegenerateInput { eigenvalue: f64, multiplicity: usize },

    #[error("observables commute (commutator norm {norm:.3e}); noncommuting observables required")]
    ObservablesCommute { norm: f64 },

    #[error("no coincidence pairs at settings ({setting_a}, {setting_b})")]
    NoPairsAtSettings { setting_a: f64, setting_b: f64 },

    #[error("invalid config field `{field}`: {reason}")]
    InvalidConfig { field: &'static str, reason: String },

    #[error("event stream not sorted by timestamp at index {index}")]
    UnsortedEvents { index: usize },

    #[error("internal verification failed in {context} (residual {residual:.3e})")]
    VerificationFailed { context: &'static str, residual: f64 },
}
