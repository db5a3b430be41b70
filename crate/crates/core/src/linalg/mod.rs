//! Dense complex linear algebra substrate: operators, states, density
//! operators, tensor products, partial traces and trace distance.
//!
//! Composite-system indexing is fixed everywhere to `i1 * d2 + i2` (first
//! subsystem is the outer index). All values are immutable after
//! construction.

mod density;
mod eigen;
mod operator;
mod state;
pub(crate) mod wire;

pub use density::{state_distance, DensityOperator, Subsystem};
pub use operator::Operator;
pub use state::{PureState, State};

pub(crate) use eigen::hermitian_eigen;
pub(crate) use state::dominant_phase;

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Largest entry modulus of a complex matrix.
pub(crate) fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Kronecker product with the crate-wide index convention.
pub fn tensor(a: &Operator, b: &Operator) -> Operator {
    a.tensor(b)
}
