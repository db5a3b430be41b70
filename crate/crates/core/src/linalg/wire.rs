//! JSON interchange for operators and states.
//!
//! Complex entries serialize as two-element `[re, im]` arrays; matrices as
//! row-major nested arrays under a top-level `{"dim": n, "entries": [...]}`
//! object. Deserialization re-validates every type invariant.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::linalg::{DensityOperator, Operator, PureState};

#[derive(Serialize, Deserialize)]
struct MatrixWire {
    dim: usize,
    entries: Vec<Vec<[f64; 2]>>,
}

#[derive(Serialize, Deserialize)]
struct VectorWire {
    dim: usize,
    entries: Vec<[f64; 2]>,
}

fn matrix_to_wire(dim: usize, m: &DMatrix<Complex64>) -> MatrixWire {
    let entries = (0..dim)
        .map(|i| (0..dim).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect();
    MatrixWire { dim, entries }
}

fn wire_to_matrix(wire: &MatrixWire) -> Result<DMatrix<Complex64>, String> {
    if wire.entries.len() != wire.dim {
        return Err(format!(
            "entries: expected {} rows, got {}",
            wire.dim,
            wire.entries.len()
        ));
    }
    for (i, row) in wire.entries.iter().enumerate() {
        if row.len() != wire.dim {
            return Err(format!(
                "entries[{i}]: expected {} columns, got {}",
                wire.dim,
                row.len()
            ));
        }
    }
    Ok(DMatrix::from_fn(wire.dim, wire.dim, |i, j| {
        Complex64::new(wire.entries[i][j][0], wire.entries[i][j][1])
    }))
}

impl Serialize for Operator {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        matrix_to_wire(self.dim(), self.entries()).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Operator {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = MatrixWire::deserialize(deserializer)?;
        let m = wire_to_matrix(&wire).map_err(D::Error::custom)?;
        Operator::new(m).map_err(D::Error::custom)
    }
}

impl Serialize for DensityOperator {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        matrix_to_wire(self.dim(), self.matrix()).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DensityOperator {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = MatrixWire::deserialize(deserializer)?;
        let m = wire_to_matrix(&wire).map_err(D::Error::custom)?;
        DensityOperator::new(m).map_err(D::Error::custom)
    }
}

impl Serialize for PureState {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let entries = self.amplitudes().iter().map(|z| [z.re, z.im]).collect();
        VectorWire {
            dim: self.dim(),
            entries,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PureState {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = VectorWire::deserialize(deserializer)?;
        if wire.entries.len() != wire.dim {
            return Err(D::Error::custom(format!(
                "entries: expected {} amplitudes, got {}",
                wire.dim,
                wire.entries.len()
            )));
        }
        let v = DVector::from_iterator(
            wire.dim,
            wire.entries.iter().map(|p| Complex64::new(p[0], p[1])),
        );
        PureState::new(v).map_err(D::Error::custom)
    }
}
