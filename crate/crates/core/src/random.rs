//! Seeded random constructions for sweeps and demos.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{DensityOperator, Operator, PureState};

/// The crate-standard deterministic generator.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn ginibre(rng: &mut impl Rng, rows: usize, cols: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    })
}

/// Hermitian part of a Ginibre draw.
pub fn hermitian(rng: &mut impl Rng, dim: usize) -> Operator {
    let g = ginibre(rng, dim, dim);
    Operator::new((&g + g.adjoint()).scale(0.5)).expect("square by construction")
}

/// Random unitary via QR of a Ginibre draw.
pub fn unitary(rng: &mut impl Rng, dim: usize) -> Operator {
    Operator::new(ginibre(rng, dim, dim).qr().q()).expect("square by construction")
}

/// Hermitian with well-separated eigenvalues in a random eigenbasis.
pub fn nondegenerate_hermitian(rng: &mut impl Rng, dim: usize) -> Operator {
    let u = unitary(rng, dim);
    let diag = DMatrix::from_fn(dim, dim, |i, j| {
        if i == j {
            Complex64::new(i as f64 + 0.1 * rng.random::<f64>(), 0.0)
        } else {
            Complex64::ZERO
        }
    });
    let m = u.entries() * diag * u.entries().adjoint();
    Operator::new((&m + m.adjoint()).scale(0.5)).expect("square by construction")
}

/// Full-rank random density operator `G G^dagger / tr`.
pub fn density(rng: &mut impl Rng, dim: usize) -> DensityOperator {
    let g = ginibre(rng, dim, dim);
    let gg = &g * g.adjoint();
    let trace: Complex64 = gg.diagonal().sum();
    DensityOperator::new(gg / trace).expect("Ginibre construction is positive")
}

/// Haar-ish random pure state.
pub fn pure_state(rng: &mut impl Rng, dim: usize) -> PureState {
    let v = DVector::from_fn(dim, |_, _| {
        Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    });
    PureState::normalized(v).expect("nonzero with probability 1")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructions_satisfy_their_invariants() {
        let mut rng = seeded_rng(1);
        for dim in 2..=6 {
            assert!(hermitian(&mut rng, dim).require_hermitian().is_ok());
            let u = unitary(&mut rng, dim);
            let gram = u.entries().adjoint() * u.entries();
            let id = DMatrix::<Complex64>::identity(dim, dim);
            assert!((gram - id).iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-12);
            let rho = density(&mut rng, dim);
            assert!((rho.trace().re - 1.0).abs() < 1e-12);
            let psi = pure_state(&mut rng, dim);
            assert!((psi.amplitudes().norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn seeded_rng_reproduces() {
        let a = hermitian(&mut seeded_rng(7), 4);
        let b = hermitian(&mut seeded_rng(7), 4);
        assert_eq!(a, b);
    }
}
