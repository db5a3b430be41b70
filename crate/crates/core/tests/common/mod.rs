//! Shared generators and independent oracles for integration tests.
//!
//! The oracles here are deliberately separate from the library's own
//! numerical routes: singular values come from a hand-rolled one-sided
//! Jacobi sweep, not from the SVD the library uses.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use eprsim_core::{DensityOperator, Operator, PureState};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    })
}

/// Hermitian part of a Ginibre draw.
pub fn random_hermitian(rng: &mut impl Rng, dim: usize) -> Operator {
    let g = random_complex_matrix(rng, dim, dim);
    let h = (&g + g.adjoint()).scale(0.5);
    Operator::new(h).unwrap()
}

/// Haar-ish unitary via QR of a Ginibre draw.
pub fn random_unitary(rng: &mut impl Rng, dim: usize) -> DMatrix<Complex64> {
    let g = random_complex_matrix(rng, dim, dim);
    g.qr().q()
}

/// Nondegenerate Hermitian with eigenvalues `0..dim-1` plus jitter,
/// conjugated by a random unitary.
pub fn random_nondegenerate_hermitian(rng: &mut impl Rng, dim: usize) -> Operator {
    let u = random_unitary(rng, dim);
    let diag = DMatrix::from_fn(dim, dim, |i, j| {
        if i == j {
            Complex64::new(i as f64 + 0.1 * rng.random::<f64>(), 0.0)
        } else {
            Complex64::ZERO
        }
    });
    let m = &u * diag * u.adjoint();
    // the conjugation is Hermitian only up to rounding
    Operator::new((&m + m.adjoint()).scale(0.5)).unwrap()
}

/// Ginibre density operator `G G^dagger / tr`.
pub fn random_density(rng: &mut impl Rng, dim: usize) -> DensityOperator {
    let g = random_complex_matrix(rng, dim, dim);
    let gg = &g * g.adjoint();
    let trace: Complex64 = gg.diagonal().sum();
    DensityOperator::new(gg / trace).unwrap()
}

pub fn random_pure_state(rng: &mut impl Rng, dim: usize) -> PureState {
    let v = DVector::from_fn(dim, |_, _| {
        Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    });
    PureState::normalized(v).unwrap()
}

/// Singular values of a complex matrix by one-sided Jacobi, descending.
///
/// Orthogonalizes the columns with two-by-two unitary rotations until all
/// column pairs are orthogonal; the singular values are the final column
/// norms. Independent of any library decomposition.
pub fn jacobi_singular_values(m: &DMatrix<Complex64>) -> Vec<f64> {
    // work with rows >= cols
    let mut a = if m.nrows() >= m.ncols() {
        m.clone()
    } else {
        m.adjoint()
    };
    let n = a.ncols();
    for _sweep in 0..60 {
        let mut off = 0.0_f64;
        for p in 0..n {
            for q in (p + 1)..n {
                let col_p = a.column(p).clone_owned();
                let col_q = a.column(q).clone_owned();
                let alpha = col_p.norm_squared();
                let beta = col_q.norm_squared();
                let gamma = col_p.dotc(&col_q);
                let scale = (alpha * beta).sqrt();
                if scale == 0.0 || gamma.norm() <= 1e-15 * scale {
                    continue;
                }
                off = off.max(gamma.norm() / scale);
                // absorb the phase so the 2x2 Gram block is real
                let phase = gamma / Complex64::new(gamma.norm(), 0.0);
                let col_q_rot = col_q * phase.conj();
                let zeta = (beta - alpha) / (2.0 * gamma.norm());
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let new_p = &col_p * Complex64::new(c, 0.0)
                    - &col_q_rot * Complex64::new(s, 0.0);
                let new_q = &col_p * Complex64::new(s, 0.0)
                    + &col_q_rot * Complex64::new(c, 0.0);
                a.set_column(p, &new_p);
                a.set_column(q, &new_q);
            }
        }
        if off < 1e-14 {
            break;
        }
    }
    let mut values: Vec<f64> = (0..n).map(|j| a.column(j).norm()).collect();
    values.sort_by(|x, y| y.total_cmp(x));
    values
}

#[allow(dead_code)]
pub fn max_entry(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
