//! Pure state vectors and the pure/mixed state sum type.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::density::DensityOperator;
use crate::tol;

/// A unit-norm complex vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dim: usize,
    amplitudes: DVector<Complex64>,
}

impl PureState {
    /// Validates the norm against [`tol::NORM`]; does not rescale.
    pub fn new(amplitudes: DVector<Complex64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > tol::NORM {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self {
            dim: amplitudes.len(),
            amplitudes,
        })
    }

    /// Explicitly rescales to unit norm; errors on (near-)zero vectors.
    pub fn normalized(amplitudes: DVector<Complex64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm <= tol::NORM {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self {
            dim: amplitudes.len(),
            amplitudes: amplitudes / Complex64::new(norm, 0.0),
        })
    }

    pub fn from_amplitudes(amplitudes: &[Complex64]) -> Result<Self> {
        Self::new(DVector::from_row_slice(amplitudes))
    }

    /// Computational basis vector `|k>`.
    pub fn basis_state(dim: usize, k: usize) -> Self {
        let mut v = DVector::zeros(dim);
        v[k] = Complex64::ONE;
        Self {
            dim,
            amplitudes: v,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            dim: self.dim * other.dim,
            amplitudes: self.amplitudes.kronecker(&other.amplitudes),
        }
    }

    /// Basis-outcome probabilities `|amplitude|^2`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|z| z.norm_sqr()).collect()
    }

    /// Fixes the global phase: the largest-magnitude entry becomes real and
    /// positive, ties broken by lowest index.
    pub fn canonical_phase(&self) -> Self {
        let phase = dominant_phase(&self.amplitudes);
        Self {
            dim: self.dim,
            amplitudes: &self.amplitudes * phase.conj(),
        }
    }

    pub fn to_density(&self) -> DensityOperator {
        DensityOperator::from_pure(self)
    }
}

/// Unit phase of the largest-magnitude entry (lowest index on ties).
pub(crate) fn dominant_phase(v: &DVector<Complex64>) -> Complex64 {
    let mut best = 0;
    let mut best_mag = v[0].norm();
    for (i, z) in v.iter().enumerate().skip(1) {
        if z.norm() > best_mag {
            best = i;
            best_mag = z.norm();
        }
    }
    if best_mag == 0.0 {
        Complex64::ONE
    } else {
        v[best] / Complex64::new(best_mag, 0.0)
    }
}

/// Pure or mixed quantum state.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum State {
    Pure(PureState),
    Density(DensityOperator),
}

impl State {
    pub fn dim(&self) -> usize {
        match self {
            State::Pure(psi) => psi.dim(),
            State::Density(rho) => rho.dim(),
        }
    }

    pub fn to_density(&self) -> DensityOperator {
        match self {
            State::Pure(psi) => psi.to_density(),
            State::Density(rho) => rho.clone(),
        }
    }

    pub fn as_pure(&self) -> Option<&PureState> {
        match self {
            State::Pure(psi) => Some(psi),
            State::Density(_) => None,
        }
    }
}

impl From<PureState> for State {
    fn from(psi: PureState) -> Self {
        State::Pure(psi)
    }
}

impl From<DensityOperator> for State {
    fn from(rho: DensityOperator) -> Self {
        State::Density(rho)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_unnormalized() {
        let v = DVector::from_row_slice(&[c(1.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(PureState::new(v), Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn normalized_rescales() {
        let v = DVector::from_row_slice(&[c(3.0, 0.0), c(4.0, 0.0)]);
        let psi = PureState::normalized(v).unwrap();
        assert!((psi.amplitudes()[0].re - 0.6).abs() < 1e-15);
        assert!((psi.amplitudes()[1].re - 0.8).abs() < 1e-15);
    }

    #[test]
    fn tensor_of_basis_states() {
        let a = PureState::basis_state(2, 1);
        let b = PureState::basis_state(3, 0);
        let ab = a.tensor(&b);
        assert_eq!(ab.dim(), 6);
        // index convention: i1 * d2 + i2 = 1 * 3 + 0
        assert_eq!(ab.amplitudes()[3], Complex64::ONE);
    }

    #[test]
    fn canonical_phase_makes_dominant_entry_real() {
        let v = DVector::from_row_slice(&[c(0.0, 0.8), c(0.6, 0.0)]);
        let psi = PureState::new(v).unwrap().canonical_phase();
        assert!((psi.amplitudes()[0] - c(0.8, 0.0)).norm() < 1e-15);
        assert!((psi.amplitudes()[1] - c(0.0, -0.6)).norm() < 1e-15);
    }
}
