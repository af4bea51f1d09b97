//! JSON file formats.
//!
//! Matrices are nested row-major arrays of `[re, im]` pairs:
//!
//! ```json
//! {"dims": [2], "matrix": [[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]]}
//! ```

use std::path::Path;

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::entropy::Hamiltonian;
use crate::error::Error;
use crate::linalg::ComplexMatrix;
use crate::measurement::ProjectiveMeasurement;
use crate::state::DensityMatrix;

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> =
            self.to_rows().iter().map(|r| r.iter().map(|z| [z.re, z.im]).collect()).collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<[f64; 2]>> = Vec::deserialize(d)?;
        let rows: Vec<Vec<Complex64>> =
            rows.into_iter().map(|r| r.into_iter().map(|[re, im]| Complex64::new(re, im)).collect()).collect();
        ComplexMatrix::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

/// On-disk form of a density matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateFile {
    pub dims: Vec<usize>,
    pub matrix: ComplexMatrix,
}

impl StateFile {
    pub fn validate(self) -> crate::Result<DensityMatrix> {
        DensityMatrix::new(self.matrix, self.dims)
    }
}

impl From<&DensityMatrix> for StateFile {
    fn from(rho: &DensityMatrix) -> Self {
        Self { dims: rho.dims().to_vec(), matrix: rho.matrix().clone() }
    }
}

/// On-disk form of a Hamiltonian.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HamiltonianFile {
    pub beta: f64,
    pub matrix: ComplexMatrix,
}

impl TryFrom<HamiltonianFile> for Hamiltonian {
    type Error = Error;
    fn try_from(f: HamiltonianFile) -> crate::Result<Self> {
        Hamiltonian::new(f.matrix, f.beta)
    }
}

impl From<Hamiltonian> for HamiltonianFile {
    fn from(h: Hamiltonian) -> Self {
        Self { beta: h.beta(), matrix: h.matrix().clone() }
    }
}

/// On-disk form of a projective measurement; basis columns are the measured vectors.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasurementFile {
    pub dimension: usize,
    pub basis: ComplexMatrix,
}

impl TryFrom<MeasurementFile> for ProjectiveMeasurement {
    type Error = Error;
    fn try_from(f: MeasurementFile) -> crate::Result<Self> {
        if f.basis.rows() != f.dimension {
            return Err(Error::DimensionMismatch(format!(
                "declared dimension {} but basis has {} rows",
                f.dimension,
                f.basis.rows()
            )));
        }
        ProjectiveMeasurement::from_basis(f.basis)
    }
}

impl From<ProjectiveMeasurement> for MeasurementFile {
    fn from(m: ProjectiveMeasurement) -> Self {
        Self { dimension: m.dimension(), basis: m.basis().clone() }
    }
}

/// Errors from reading a file: either the bytes are unusable or the content
/// violates a domain invariant.
#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{0}")]
    Domain(#[from] Error),
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, LoadError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| LoadError::Parse { path: path.display().to_string(), message: e.to_string() })?;
    serde_json::from_str(&text)
        .map_err(|e| LoadError::Parse { path: path.display().to_string(), message: e.to_string() })
}

pub fn load_state(path: &Path) -> Result<DensityMatrix, LoadError> {
    Ok(read_json::<StateFile>(path)?.validate()?)
}

/// Rounds to 12 significant digits; +∞ becomes the string `"inf"`.
pub fn number(x: f64) -> Value {
    if x == f64::INFINITY {
        return Value::String("inf".into());
    }
    if x == f64::NEG_INFINITY {
        return Value::String("-inf".into());
    }
    if x.is_nan() {
        return Value::String("nan".into());
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    // Avoid "-0.0" in output.
    let rounded = if rounded == 0.0 { 0.0 } else { rounded };
    serde_json::Number::from_f64(rounded).map(Value::Number).unwrap_or(Value::Null)
}

/// The matrix as a JSON value with every component rounded like [`number`].
pub fn matrix_value(m: &ComplexMatrix) -> Value {
    Value::Array(
        m.to_rows()
            .iter()
            .map(|row| Value::Array(row.iter().map(|z| Value::Array(vec![number(z.re), number(z.im)])).collect()))
            .collect(),
    )
}

pub fn state_value(rho: &DensityMatrix) -> Value {
    serde_json::json!({ "dims": rho.dims(), "matrix": matrix_value(rho.matrix()) })
}

pub fn measurement_value(m: &ProjectiveMeasurement) -> Value {
    serde_json::json!({ "dimension": m.dimension(), "basis": matrix_value(m.basis()) })
}
