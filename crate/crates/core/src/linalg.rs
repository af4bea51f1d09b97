//! Dense complex matrices and Hermitian spectral decomposition.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A dense complex matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    /// Builds a matrix from row-major entries, rejecting non-finite values.
    pub fn from_row_major(rows: usize, cols: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", entries.len())));
        }
        if let Some(k) = entries.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { row: k / cols.max(1), col: k % cols.max(1) });
        }
        Ok(Self(DMatrix::from_row_slice(rows, cols, entries)))
    }

    /// Builds a matrix from nested rows; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let flat: Vec<Complex64> = rows.iter().flatten().copied().collect();
        Self::from_row_major(rows.len(), cols, &flat)
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self(DMatrix::from_fn(n, n, |i, j| if i == j { Complex64::new(diag[i], 0.0) } else { ZERO }))
    }

    /// Outer product |v⟩⟨v|.
    pub fn projector(v: &[Complex64]) -> Self {
        let n = v.len();
        Self(DMatrix::from_fn(n, n, |i, j| v[i] * v[j].conj()))
    }

    pub(crate) fn from_dmatrix(m: DMatrix<Complex64>) -> Self {
        Self(m)
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.0[(row, col)] = value;
    }

    /// Row-major copy of the entries.
    pub fn to_row_major(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    pub fn to_rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.rows()).map(|i| (0..self.cols()).map(|j| self.0[(i, j)]).collect()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows()).map(|i| self.0[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.map(|z| z * s))
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        Self(self.0.kronecker(&other.0))
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// ‖A − B‖_max.
    pub fn max_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.0.shape(), other.0.shape(), "shape mismatch in max_diff");
        self.0.iter().zip(other.0.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// ‖M − M†‖_max; infinite for non-square input.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// ‖M†M − I‖_max (columns orthonormal).
    pub fn isometry_defect(&self) -> f64 {
        let gram = self.0.adjoint() * &self.0;
        let n = gram.nrows();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { ONE } else { ZERO };
                worst = worst.max((gram[(i, j)] - target).norm());
            }
        }
        worst
    }

    pub fn unitarity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.isometry_defect()
    }

    /// `U M U†`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        Self(&u.0 * &self.0 * u.0.adjoint())
    }

    /// Replaces the matrix with its Hermitian part, removing rounding asymmetry.
    pub fn hermitize(&self) -> Self {
        Self((&self.0 + self.0.adjoint()).map(|z| z * 0.5))
    }

    pub fn determinant(&self) -> Complex64 {
        self.0.determinant()
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows(), self.cols())?;
        for i in 0..self.rows() {
            write!(f, "  ")?;
            for j in 0..self.cols() {
                let z = self.0[(i, j)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

/// Real eigenvalues sorted in descending order.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum(Vec<f64>);

impl Spectrum {
    /// Sorts the values descending. Rejects non-finite entries.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row: k, col: 0 });
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    /// Eigenvalues with values below the clamp threshold set to zero.
    pub fn clamped(&self) -> Vec<f64> {
        self.0.iter().map(|&v| if v < tol::CLAMP { 0.0 } else { v }).collect()
    }

    /// Shannon entropy in bits of the clamped values.
    pub fn entropy_bits(&self) -> f64 {
        shannon_bits(&self.clamped())
    }
}

pub(crate) fn shannon_bits(p: &[f64]) -> f64 {
    p.iter().filter(|&&v| v > 0.0).map(|&v| -v * v.log2()).sum::<f64>().max(0.0)
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Returns the spectrum in descending order together with a unitary whose
/// `k`-th column is the eigenvector of the `k`-th eigenvalue.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<(Spectrum, ComplexMatrix)> {
    let defect = m.hermiticity_defect();
    if defect > tol::CONSTRUCTION {
        return Err(Error::NotHermitian { deviation: defect });
    }
    Ok(eig_hermitian_unchecked(m))
}

pub(crate) fn eig_hermitian_unchecked(m: &ComplexMatrix) -> (Spectrum, ComplexMatrix) {
    let n = m.rows();
    let eig = m.hermitize().0.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    (Spectrum(values), ComplexMatrix(vectors))
}

/// Eigenvalues only, descending. Input is assumed Hermitian.
pub(crate) fn eigenvalues_unchecked(m: &ComplexMatrix) -> Spectrum {
    let vals = m.hermitize().0.symmetric_eigenvalues();
    let mut v: Vec<f64> = vals.iter().copied().collect();
    v.sort_by(|a, b| b.total_cmp(a));
    Spectrum(v)
}

/// Applies a real function to the eigenvalues: `U f(Λ) U†`.
pub(crate) fn hermitian_function(m: &ComplexMatrix, f: impl Fn(f64) -> f64) -> ComplexMatrix {
    let (spec, u) = eig_hermitian_unchecked(m);
    let diag: Vec<f64> = spec.values().iter().map(|&v| f(v)).collect();
    ComplexMatrix::from_real_diagonal(&diag).conjugate_by(&u)
}
