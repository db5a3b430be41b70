//! Density operators, partial traces and trace distance.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::eigen::hermitian_eigenvalues;
use crate::linalg::{max_abs, Operator, PureState};
use crate::tol;

/// Which factor of a bipartite system an operation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// A Hermitian, unit-trace, positive-semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    dim: usize,
    matrix: DMatrix<Complex64>,
}

impl DensityOperator {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        let hermitian_dev = max_abs(&(&matrix - matrix.adjoint()));
        if hermitian_dev > tol::HERMITIAN {
            return Err(Error::NotDensity {
                reason: format!("Hermitian deviation {hermitian_dev:.3e}"),
            });
        }
        let trace: Complex64 = matrix.diagonal().sum();
        if (trace.re - 1.0).abs() > tol::TRACE || trace.im.abs() > tol::TRACE {
            return Err(Error::NotDensity {
                reason: format!("trace {trace} differs from 1"),
            });
        }
        let min_eigenvalue = hermitian_eigenvalues(&matrix)[0];
        if min_eigenvalue < tol::EIGENVALUE_FLOOR {
            return Err(Error::NotDensity {
                reason: format!("minimum eigenvalue {min_eigenvalue:.3e} is negative"),
            });
        }
        Ok(Self {
            dim: matrix.nrows(),
            matrix,
        })
    }

    pub fn from_pure(psi: &PureState) -> Self {
        let v = psi.amplitudes();
        Self {
            dim: psi.dim(),
            matrix: v * v.adjoint(),
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            dim,
            matrix: DMatrix::identity(dim, dim) / Complex64::new(dim as f64, 0.0),
        }
    }

    /// Convex mixture of pure states; weights must sum to 1.
    pub fn mixture(parts: &[(f64, PureState)]) -> Result<Self> {
        let dim = parts
            .first()
            .map(|(_, psi)| psi.dim())
            .ok_or(Error::NotDensity {
                reason: "empty mixture".into(),
            })?;
        let mut matrix = DMatrix::<Complex64>::zeros(dim, dim);
        for (w, psi) in parts {
            let v = psi.amplitudes();
            matrix += (v * v.adjoint()) * Complex64::new(*w, 0.0);
        }
        Self::new(matrix)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.diagonal().sum()
    }

    pub fn as_operator(&self) -> Operator {
        Operator::new(self.matrix.clone()).expect("density matrix is square")
    }

    /// Reduced state of the kept factor; `dim` must equal `d1 * d2`.
    pub fn partial_trace(&self, keep: Subsystem, d1: usize, d2: usize) -> Result<DensityOperator> {
        if d1 * d2 != self.dim {
            return Err(Error::BadFactorization {
                dim: self.dim,
                d1,
                d2,
            });
        }
        let kept_dim = match keep {
            Subsystem::First => d1,
            Subsystem::Second => d2,
        };
        let mut reduced = DMatrix::<Complex64>::zeros(kept_dim, kept_dim);
        match keep {
            Subsystem::First => {
                for i in 0..d1 {
                    for j in 0..d1 {
                        let mut sum = Complex64::ZERO;
                        for k in 0..d2 {
                            sum += self.matrix[(i * d2 + k, j * d2 + k)];
                        }
                        reduced[(i, j)] = sum;
                    }
                }
            }
            Subsystem::Second => {
                for i in 0..d2 {
                    for j in 0..d2 {
                        let mut sum = Complex64::ZERO;
                        for k in 0..d1 {
                            sum += self.matrix[(k * d2 + i, k * d2 + j)];
                        }
                        reduced[(i, j)] = sum;
                    }
                }
            }
        }
        DensityOperator::new(reduced)
    }
}

/// Trace-norm distance `(1/2) * ||a - b||_1`.
pub fn state_distance(a: &DensityOperator, b: &DensityOperator) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            context: "state_distance",
            expected: a.dim(),
            actual: b.dim(),
        });
    }
    let diff = a.matrix() - b.matrix();
    let total: f64 = hermitian_eigenvalues(&diff).iter().map(|v| v.abs()).sum();
    Ok(0.5 * total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::singlet;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_negative_eigenvalue() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            c(1.5, 0.0),
            c(-0.5, 0.0),
        ]));
        assert!(matches!(
            DensityOperator::new(m),
            Err(Error::NotDensity { .. })
        ));
    }

    #[test]
    fn rejects_wrong_trace() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            c(0.7, 0.0),
            c(0.7, 0.0),
        ]));
        assert!(matches!(
            DensityOperator::new(m),
            Err(Error::NotDensity { .. })
        ));
    }

    #[test]
    fn partial_trace_of_product_state_recovers_factor() {
        let rho1 = PureState::basis_state(2, 0).to_density();
        let plus = PureState::from_amplitudes(&[
            c(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            c(std::f64::consts::FRAC_1_SQRT_2, 0.0),
        ])
        .unwrap();
        let rho2 = plus.to_density();
        let product = DensityOperator::new(rho1.matrix().kronecker(rho2.matrix())).unwrap();
        let reduced = product.partial_trace(Subsystem::Second, 2, 2).unwrap();
        assert!(max_abs(&(reduced.matrix() - rho2.matrix())) < 1e-12);
    }

    #[test]
    fn partial_trace_of_singlet_is_maximally_mixed() {
        let rho = singlet().to_density();
        let reduced = rho.partial_trace(Subsystem::Second, 2, 2).unwrap();
        let expected = DensityOperator::maximally_mixed(2);
        assert!(max_abs(&(reduced.matrix() - expected.matrix())) < 1e-12);
    }

    #[test]
    fn partial_trace_preserves_trace_on_random_input() {
        // Oracle: explicit index-sum reduction of a fixed pseudo-random
        // 4x4 density operator built from a Ginibre draw.
        let mut g = DMatrix::<Complex64>::zeros(4, 4);
        let mut x = 0.37_f64;
        for i in 0..4 {
            for j in 0..4 {
                x = (x * 997.13 + 0.71).fract();
                let re = x - 0.5;
                x = (x * 997.13 + 0.71).fract();
                let im = x - 0.5;
                g[(i, j)] = c(re, im);
            }
        }
        let gg = &g * g.adjoint();
        let trace: Complex64 = gg.diagonal().sum();
        let rho = DensityOperator::new(gg / trace).unwrap();
        let reduced = rho.partial_trace(Subsystem::First, 2, 2).unwrap();
        assert!((reduced.trace().re - 1.0).abs() < 1e-12);
        assert!(reduced.trace().im.abs() < 1e-12);

        let mut oracle = DMatrix::<Complex64>::zeros(2, 2);
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    oracle[(i, j)] += rho.matrix()[(i * 2 + k, j * 2 + k)];
                }
            }
        }
        assert!(max_abs(&(reduced.matrix() - &oracle)) < 1e-15);
    }

    #[test]
    fn distance_examples() {
        let zero = PureState::basis_state(2, 0).to_density();
        let one = PureState::basis_state(2, 1).to_density();
        assert!(state_distance(&zero, &zero).unwrap() < 1e-15);
        assert!((state_distance(&zero, &one).unwrap() - 1.0).abs() < 1e-12);
        // eigenvalues of |0><0| - I/2 are +1/2 and -1/2
        let mixed = DensityOperator::maximally_mixed(2);
        assert!((state_distance(&zero, &mixed).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn distance_dimension_mismatch() {
        let a = DensityOperator::maximally_mixed(2);
        let b = DensityOperator::maximally_mixed(3);
        assert!(matches!(
            state_distance(&a, &b),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
