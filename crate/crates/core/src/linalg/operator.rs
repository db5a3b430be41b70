//! Dense square complex operators.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::max_abs;
use crate::tol;

/// A dense `dim x dim` complex matrix.
///
/// Hermiticity is validated where an operation requires it, never silently
/// repaired; call [`Operator::symmetrize`] explicitly when a repair is
/// intended.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    dim: usize,
    entries: DMatrix<Complex64>,
}

impl Operator {
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::NotSquare {
                rows: entries.nrows(),
                cols: entries.ncols(),
            });
        }
        Ok(Self {
            dim: entries.nrows(),
            entries,
        })
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        Self {
            dim,
            entries: DMatrix::from_fn(dim, dim, f),
        }
    }

    /// Row-major entry list.
    pub fn from_row_slice(dim: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                context: "Operator::from_row_slice",
                expected: dim * dim,
                actual: entries.len(),
            });
        }
        Ok(Self {
            dim,
            entries: DMatrix::from_row_slice(dim, dim, entries),
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            entries: DMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: DMatrix::zeros(dim, dim),
        }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let dim = diag.len();
        Self::from_fn(dim, |i, j| {
            if i == j {
                Complex64::new(diag[i], 0.0)
            } else {
                Complex64::ZERO
            }
        })
    }

    pub fn pauli_x() -> Self {
        Self::from_row_slice(
            2,
            &[
                Complex64::ZERO,
                Complex64::ONE,
                Complex64::ONE,
                Complex64::ZERO,
            ],
        )
        .expect("2x2")
    }

    pub fn pauli_y() -> Self {
        Self::from_row_slice(
            2,
            &[
                Complex64::ZERO,
                Complex64::new(0.0, -1.0),
                Complex64::new(0.0, 1.0),
                Complex64::ZERO,
            ],
        )
        .expect("2x2")
    }

    pub fn pauli_z() -> Self {
        Self::from_real_diagonal(&[1.0, -1.0])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<Complex64> {
        self.entries
    }

    pub fn adjoint(&self) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.adjoint(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.diagonal().sum()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            dim: self.dim,
            entries: &self.entries * factor,
        }
    }

    pub fn mul_vec(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        &self.entries * v
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        max_abs(&self.entries)
    }

    /// `max |entries - adjoint(entries)|`.
    pub fn hermitian_deviation(&self) -> f64 {
        max_abs(&(&self.entries - self.entries.adjoint()))
    }

    pub fn is_hermitian_within(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// Errors unless the operator is Hermitian within [`tol::HERMITIAN`].
    pub fn require_hermitian(&self) -> Result<()> {
        let deviation = self.hermitian_deviation();
        if deviation > tol::HERMITIAN {
            return Err(Error::NotHermitian {
                deviation,
                tol: tol::HERMITIAN,
            });
        }
        Ok(())
    }

    /// Explicit Hermitian repair `(A + A^dagger) / 2`.
    pub fn symmetrize(&self) -> Self {
        let entries = (&self.entries + self.entries.adjoint()).scale(0.5);
        Self {
            dim: self.dim,
            entries,
        }
    }

    /// Kronecker product; composite index is `i1 * d2 + i2`.
    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            dim: self.dim * other.dim,
            entries: self.entries.kronecker(&other.entries),
        }
    }

    pub(crate) fn check_same_dim(&self, other: &Self, context: &'static str) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                context,
                expected: self.dim,
                actual: other.dim,
            });
        }
        Ok(())
    }
}

impl Add for &Operator {
    type Output = Operator;

    fn add(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim, rhs.dim, "operator dimensions differ");
        Operator {
            dim: self.dim,
            entries: &self.entries + &rhs.entries,
        }
    }
}

impl Sub for &Operator {
    type Output = Operator;

    fn sub(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim, rhs.dim, "operator dimensions differ");
        Operator {
            dim: self.dim,
            entries: &self.entries - &rhs.entries,
        }
    }
}

impl Mul for &Operator {
    type Output = Operator;

    fn mul(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim, rhs.dim, "operator dimensions differ");
        Operator {
            dim: self.dim,
            entries: &self.entries * &rhs.entries,
        }
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            for j in 0..self.dim {
                let z = self.entries[(i, j)];
                if j > 0 {
                    write!(f, "  ")?;
                }
                write!(f, "{:+.4}{:+.4}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn tensor_identity_is_identity() {
        let i2 = Operator::identity(2);
        let i4 = i2.tensor(&i2);
        assert_eq!(i4, Operator::identity(4));
    }

    #[test]
    fn tensor_of_diagonals() {
        let a = Operator::from_real_diagonal(&[1.0, -1.0]);
        let k = a.tensor(&Operator::identity(2));
        assert_eq!(k, Operator::from_real_diagonal(&[1.0, 1.0, -1.0, -1.0]));
    }

    #[test]
    fn tensor_mixed_product_rule() {
        // (sigma_x (x) I)(I (x) sigma_z) = sigma_x (x) sigma_z, checked against
        // the explicitly written 4x4 product.
        let left = &Operator::pauli_x().tensor(&Operator::identity(2))
            * &Operator::identity(2).tensor(&Operator::pauli_z());
        let expected = Operator::from_row_slice(
            4,
            &[
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(1.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(-1.0, 0.0),
                c(1.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(-1.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
            ],
        )
        .unwrap();
        assert!((&left - &expected).max_abs() < 1e-15);
        assert!((&left - &Operator::pauli_x().tensor(&Operator::pauli_z())).max_abs() < 1e-15);
    }

    #[test]
    fn hermitian_validation_and_explicit_repair() {
        let skew = Operator::from_row_slice(2, &[c(1.0, 0.0), c(0.5, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(skew.require_hermitian().is_err());
        let repaired = skew.symmetrize();
        assert!(repaired.require_hermitian().is_ok());
        assert_eq!(repaired.entries()[(0, 1)], c(0.25, 0.0));
    }

    #[test]
    fn rejects_non_square() {
        let m = DMatrix::<Complex64>::zeros(2, 3);
        assert!(matches!(Operator::new(m), Err(Error::NotSquare { .. })));
    }
}
