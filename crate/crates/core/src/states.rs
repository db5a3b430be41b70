//! Named reference states used across demos and tests.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::linalg::PureState;

/// Two-qubit singlet `(|01> - |10>) / sqrt(2)`.
pub fn singlet() -> PureState {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    PureState::from_amplitudes(&[
        Complex64::ZERO,
        Complex64::new(s, 0.0),
        Complex64::new(-s, 0.0),
        Complex64::ZERO,
    ])
    .expect("unit norm by construction")
}

/// Bell state `(|00> + |11>) / sqrt(2)`.
pub fn bell_phi_plus() -> PureState {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    PureState::from_amplitudes(&[
        Complex64::new(s, 0.0),
        Complex64::ZERO,
        Complex64::ZERO,
        Complex64::new(s, 0.0),
    ])
    .expect("unit norm by construction")
}

/// Maximally entangled qudit pair `sum_k |k>|k> / sqrt(d)`.
pub fn maximally_entangled(dim: usize) -> PureState {
    let mut v = DVector::zeros(dim * dim);
    let amp = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
    for k in 0..dim {
        v[k * dim + k] = amp;
    }
    PureState::new(v).expect("unit norm by construction")
}
