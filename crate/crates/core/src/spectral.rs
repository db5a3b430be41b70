//! Degeneracy-aware spectral analysis.
//!
//! A [`SpectralDecomposition`] resolves a Hermitian operator into distinct
//! eigenvalues and orthogonal eigenprojectors. Nearby eigenvalues are merged
//! by single-linkage clustering on the sorted spectrum, so exact
//! degeneracies split by floating-point noise land in one projector.
//! Projectors are sums of eigenvector outer products and therefore
//! basis-independent, even though individual degenerate eigenvectors are
//! not.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, max_abs, Operator, PureState};
use crate::tol;

/// Distinct eigenvalues (strictly increasing), their eigenprojectors and
/// multiplicities.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    dim: usize,
    eigenvalues: Vec<f64>,
    projectors: Vec<Operator>,
    multiplicities: Vec<usize>,
}

impl SpectralDecomposition {
    /// Decomposes a Hermitian operator, merging eigenvalues closer than
    /// `cluster_tol * max(1, spectral radius)`.
    pub fn new(a: &Operator, cluster_tol: f64) -> Result<Self> {
        a.require_hermitian()?;
        let (values, vectors) = hermitian_eigen(a.entries());
        let dim = a.dim();
        let radius = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let gap = cluster_tol * radius.max(1.0);

        let mut eigenvalues = Vec::new();
        let mut projectors = Vec::new();
        let mut multiplicities = Vec::new();
        let mut start = 0;
        while start < dim {
            let mut end = start + 1;
            while end < dim && values[end] - values[end - 1] <= gap {
                end += 1;
            }
            let mut p = DMatrix::<Complex64>::zeros(dim, dim);
            for k in start..end {
                let col = vectors.column(k);
                p += col * col.adjoint();
            }
            // symmetrize; the outer-product sum is Hermitian only up to rounding
            let p = (&p + p.adjoint()).scale(0.5);
            eigenvalues.push(values[start..end].iter().sum::<f64>() / (end - start) as f64);
            multiplicities.push(end - start);
            projectors.push(Operator::new(p).expect("projector is square"));
            start = end;
        }

        Ok(Self {
            dim,
            eigenvalues,
            projectors,
            multiplicities,
        })
    }

    /// Decomposes with the default clustering width [`tol::CLUSTER`].
    pub fn with_default_tol(a: &Operator) -> Result<Self> {
        Self::new(a, tol::CLUSTER)
    }

    /// Assembles a decomposition from parts that are known to satisfy the
    /// projector invariants (used for tensor embeddings and joint
    /// refinements, where the algebra is exact).
    pub(crate) fn from_parts(
        dim: usize,
        eigenvalues: Vec<f64>,
        projectors: Vec<Operator>,
        multiplicities: Vec<usize>,
    ) -> Self {
        debug_assert!(eigenvalues.windows(2).all(|w| w[0] < w[1]));
        debug_assert_eq!(multiplicities.iter().sum::<usize>(), dim);
        Self {
            dim,
            eigenvalues,
            projectors,
            multiplicities,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of distinct eigenvalues.
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    pub fn projectors(&self) -> &[Operator] {
        &self.projectors
    }

    pub fn projector(&self, index: usize) -> Result<&Operator> {
        self.projectors.get(index).ok_or(Error::OutcomeIndexOutOfRange {
            index,
            len: self.len(),
        })
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.multiplicities.iter().all(|&m| m == 1)
    }

    /// Errors with the first degenerate eigenvalue, if any.
    pub fn require_nondegenerate(&self) -> Result<()> {
        for (i, &m) in self.multiplicities.iter().enumerate() {
            if m > 1 {
                return Err(Error::DegenerateInput {
                    eigenvalue: self.eigenvalues[i],
                    multiplicity: m,
                });
            }
        }
        Ok(())
    }

    /// Index of the distinct eigenvalue nearest to `value`.
    pub fn nearest_index(&self, value: f64) -> usize {
        let mut best = 0;
        let mut best_gap = (self.eigenvalues[0] - value).abs();
        for (i, &ev) in self.eigenvalues.iter().enumerate().skip(1) {
            let gap = (ev - value).abs();
            if gap < best_gap {
                best = i;
                best_gap = gap;
            }
        }
        best
    }

    /// Unit eigenvector for a multiplicity-1 eigenvalue, phase-canonical.
    pub fn eigenvector(&self, index: usize) -> Result<PureState> {
        if self.multiplicities[index] != 1 {
            return Err(Error::DegenerateInput {
                eigenvalue: self.eigenvalues[index],
                multiplicity: self.multiplicities[index],
            });
        }
        let p = self.projectors[index].entries();
        // P = v v^dagger, so its largest column is v up to phase and scale.
        let mut best_col = 0;
        let mut best_norm = 0.0;
        for j in 0..self.dim {
            let n = p.column(j).norm();
            if n > best_norm {
                best_col = j;
                best_norm = n;
            }
        }
        let v = p.column(best_col).clone_owned();
        Ok(PureState::normalized(v)?.canonical_phase())
    }

    /// Functional calculus `sum_i f(lambda_i) P_i`; `f` returning `None`
    /// marks the function undefined at that eigenvalue.
    pub fn apply_function<F>(&self, mut f: F) -> Result<Operator>
    where
        F: FnMut(f64) -> Option<f64>,
    {
        let mut out = DMatrix::<Complex64>::zeros(self.dim, self.dim);
        for (i, p) in self.projectors.iter().enumerate() {
            let value = f(self.eigenvalues[i]).ok_or(Error::FunctionUndefined {
                eigenvalue: self.eigenvalues[i],
            })?;
            out += p.entries() * Complex64::new(value, 0.0);
        }
        Operator::new(out)
    }

    /// `sum_i lambda_i P_i`, the operator this decomposition came from.
    pub fn reconstruct(&self) -> Operator {
        self.apply_function(Some)
            .expect("identity map is total")
    }

    /// Decomposition of `A (x) I_d2` built directly from this decomposition
    /// of `A`: same eigenvalues, projectors tensored with the identity.
    pub fn tensor_identity(&self, d2: usize) -> Self {
        let identity = Operator::identity(d2);
        Self {
            dim: self.dim * d2,
            eigenvalues: self.eigenvalues.clone(),
            projectors: self.projectors.iter().map(|p| p.tensor(&identity)).collect(),
            multiplicities: self.multiplicities.iter().map(|m| m * d2).collect(),
        }
    }

    /// Decomposition of `I_d1 (x) C` from this decomposition of `C`.
    pub fn identity_tensor(&self, d1: usize) -> Self {
        let identity = Operator::identity(d1);
        Self {
            dim: d1 * self.dim,
            eigenvalues: self.eigenvalues.clone(),
            projectors: self.projectors.iter().map(|p| identity.tensor(p)).collect(),
            multiplicities: self.multiplicities.iter().map(|m| d1 * m).collect(),
        }
    }
}

impl Serialize for SpectralDecomposition {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("SpectralDecomposition", 3)?;
        s.serialize_field("eigenvalues", &self.eigenvalues)?;
        s.serialize_field("multiplicities", &self.multiplicities)?;
        s.serialize_field("projectors", &self.projectors)?;
        s.end()
    }
}

/// A finite map from refinement eigenvalues to coarse eigenvalues,
/// total on the spectrum it was built from.
#[derive(Debug, Clone, Serialize)]
pub struct CoarseGraining {
    /// `(fine eigenvalue, coarse value)`, fine keys strictly increasing.
    pairs: Vec<(f64, f64)>,
}

impl CoarseGraining {
    pub(crate) fn from_pairs(pairs: Vec<(f64, f64)>) -> Self {
        Self { pairs }
    }

    pub fn pairs(&self) -> &[(f64, f64)] {
        &self.pairs
    }

    /// Coarse value for a fine eigenvalue; keys match within a relative
    /// `1e-6` so recomputed spectra still resolve.
    pub fn value_for(&self, eigenvalue: f64) -> Result<f64> {
        let mut best: Option<(f64, f64)> = None;
        for &(key, value) in &self.pairs {
            let gap = (key - eigenvalue).abs();
            if best.is_none_or(|(g, _)| gap < g) {
                best = Some((gap, value));
            }
        }
        match best {
            Some((gap, value)) if gap <= 1e-6 * eigenvalue.abs().max(1.0) => Ok(value),
            _ => Err(Error::FunctionUndefined { eigenvalue }),
        }
    }

    /// The map as a closure suitable for [`SpectralDecomposition::apply_function`].
    pub fn as_fn(&self) -> impl Fn(f64) -> Option<f64> + '_ {
        move |x| self.value_for(x).ok()
    }
}

/// Finds the unique map `f` with `f(C) = A`, or proves there is none.
///
/// `c` must be nondegenerate. Succeeds exactly when `a` is diagonal in `c`'s
/// eigenbasis, i.e. when `a` commutes with (and is a function of) `c`.
pub fn find_coarse_graining(c: &SpectralDecomposition, a: &Operator) -> Result<CoarseGraining> {
    if c.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            context: "find_coarse_graining",
            expected: c.dim(),
            actual: a.dim(),
        });
    }
    for (i, &m) in c.multiplicities().iter().enumerate() {
        if m > 1 {
            return Err(Error::DegenerateRefinement {
                eigenvalue: c.eigenvalues()[i],
                multiplicity: m,
            });
        }
    }
    // Rank-1 projectors: the only candidate value on eigenline k is tr(P_k A).
    let values: Vec<f64> = c
        .projectors()
        .iter()
        .map(|p| (p.entries() * a.entries()).diagonal().sum().re)
        .collect();
    let mut candidate = DMatrix::<Complex64>::zeros(a.dim(), a.dim());
    for (p, &v) in c.projectors().iter().zip(&values) {
        candidate += p.entries() * Complex64::new(v, 0.0);
    }
    let residual = max_abs(&(candidate - a.entries()));
    if residual > tol::FUNCTION_RESIDUAL * a.max_abs().max(1.0) {
        return Err(Error::NotAFunction { residual });
    }
    let pairs = c.eigenvalues().iter().copied().zip(values).collect();
    Ok(CoarseGraining::from_pairs(pairs))
}

/// Largest entry modulus of `ab - ba`.
pub fn commutator_norm(a: &Operator, b: &Operator) -> Result<f64> {
    a.check_same_dim(b, "commutator_norm")?;
    let comm = a.entries() * b.entries() - b.entries() * a.entries();
    Ok(max_abs(&comm))
}
