//! Internal Hermitian eigensolver wrapper.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
///
/// Column `k` of `vectors` is the eigenvector for `values[k]`. The caller is
/// responsible for Hermiticity; the solver only sees the Hermitian part.
pub(crate) fn hermitian_eigen(entries: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let eig = SymmetricEigen::new(entries.clone());
    let n = entries.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));

    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::<Complex64>::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// Eigenvalues only, ascending.
pub(crate) fn hermitian_eigenvalues(entries: &DMatrix<Complex64>) -> Vec<f64> {
    let mut values: Vec<f64> = SymmetricEigen::new(entries.clone())
        .eigenvalues
        .iter()
        .copied()
        .collect();
    values.sort_by(f64::total_cmp);
    values
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorted_ascending_with_orthonormal_vectors() {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, -1.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(0.0, 0.0),
            ],
        );
        let (values, vectors) = hermitian_eigen(&m);
        assert!((values[0] + 1.0).abs() < 1e-12);
        assert!((values[1] - 1.0).abs() < 1e-12);
        let gram = vectors.adjoint() * &vectors;
        let dev = crate::linalg::max_abs(&(gram - DMatrix::<Complex64>::identity(2, 2)));
        assert!(dev < 1e-12);
    }
}
