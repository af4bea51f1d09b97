//! Density matrices on a fixed tensor layout.
//!
//! Subsystem order is significant: the `dims` list fixes the row-major
//! layout, with the first subsystem as the most significant digit of a basis
//! index. Nothing here reorders subsystems implicitly.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues_unchecked, ComplexMatrix, Spectrum, ONE, ZERO};
use crate::tol;

/// Dimension cap used when `RESOURCEFORGE_MAX_DIM` is unset.
pub const DEFAULT_MAX_DIM: usize = 256;

/// Environment variable overriding the dimension cap.
pub const MAX_DIM_ENV: &str = "RESOURCEFORGE_MAX_DIM";

/// The active dimension cap.
pub fn max_dim() -> usize {
    std::env::var(MAX_DIM_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or(DEFAULT_MAX_DIM)
}

pub(crate) fn check_cap(dim: usize, cap: usize) -> Result<()> {
    if dim > cap {
        Err(Error::DimensionTooLarge { dim, cap })
    } else {
        Ok(())
    }
}

/// A Hermitian, positive semidefinite, unit-trace matrix with a subsystem layout.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    dims: Vec<usize>,
}

impl DensityMatrix {
    /// Checks every invariant and returns the first one violated.
    pub fn new(matrix: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        validate(&matrix, &dims)
    }

    /// Wraps a matrix produced by a trace- and positivity-preserving map.
    pub(crate) fn from_trusted(matrix: ComplexMatrix, dims: Vec<usize>) -> Self {
        debug_assert_eq!(matrix.rows(), dims.iter().product::<usize>());
        Self { matrix: matrix.hermitize(), dims }
    }

    pub fn pure(amplitudes: &[Complex64], dims: Vec<usize>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidInput("pure state needs a nonzero finite vector".into()));
        }
        let v: Vec<Complex64> = amplitudes.iter().map(|a| a / norm).collect();
        validate(&ComplexMatrix::projector(&v), &dims)
    }

    /// Diagonal state with the given probabilities in the computational basis.
    pub fn diagonal(probs: &[f64], dims: Vec<usize>) -> Result<Self> {
        validate(&ComplexMatrix::from_real_diagonal(probs), &dims)
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Self {
        let d: usize = dims.iter().product();
        Self { matrix: ComplexMatrix::identity(d).scale(1.0 / d as f64), dims }
    }

    /// Computational basis state |k⟩⟨k|.
    pub fn basis(k: usize, dims: Vec<usize>) -> Result<Self> {
        let d: usize = dims.iter().product();
        if k >= d {
            return Err(Error::IndexOutOfRange { index: k, len: d });
        }
        let mut p = vec![0.0; d];
        p[k] = 1.0;
        Self::diagonal(&p, dims)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn num_subsystems(&self) -> usize {
        self.dims.len()
    }

    /// Eigenvalues, descending.
    pub fn spectrum(&self) -> Spectrum {
        eigenvalues_unchecked(&self.matrix)
    }

    /// Same matrix with a different factorization of the total dimension.
    pub fn with_dims(&self, dims: Vec<usize>) -> Result<Self> {
        if dims.iter().product::<usize>() != self.dim() || dims.contains(&0) {
            return Err(Error::DimensionMismatch(format!("dims {dims:?} do not factor dimension {}", self.dim())));
        }
        Ok(Self { matrix: self.matrix.clone(), dims })
    }

    /// `(dA, dB)` of a two-party state.
    pub fn bipartite_dims(&self) -> Result<(usize, usize)> {
        match self.dims.as_slice() {
            [a, b] => Ok((*a, *b)),
            other => Err(Error::NotBipartite(other.len())),
        }
    }

    pub fn into_parts(self) -> (ComplexMatrix, Vec<usize>) {
        (self.matrix, self.dims)
    }
}

/// Checks a candidate density matrix against its invariants.
///
/// The checks run in a fixed order (shape, finiteness, Hermiticity, trace,
/// positivity) and the first failure is reported.
pub fn validate(m: &ComplexMatrix, dims: &[usize]) -> Result<DensityMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let d = m.rows();
    if dims.is_empty() || dims.contains(&0) || dims.iter().product::<usize>() != d {
        return Err(Error::DimensionMismatch(format!("dims {dims:?} do not factor dimension {d}")));
    }
    for (k, z) in m.to_row_major().iter().enumerate() {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::NonFinite { row: k / d, col: k % d });
        }
    }
    let defect = m.hermiticity_defect();
    if defect > tol::CONSTRUCTION {
        return Err(Error::NotHermitian { deviation: defect });
    }
    let trace = m.trace().re;
    if (trace - 1.0).abs() > tol::CONSTRUCTION {
        return Err(Error::NotUnitTrace { trace });
    }
    let spec = eigenvalues_unchecked(m);
    let min = spec.values().last().copied().unwrap_or(0.0);
    if min < -tol::CONSTRUCTION {
        return Err(Error::NotPSD { min_eigenvalue: min });
    }
    Ok(DensityMatrix { matrix: m.hermitize(), dims: dims.to_vec() })
}

/// A matrix with orthonormal columns, mapping a `cols`-dimensional space into `rows` dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct Isometry(ComplexMatrix);

impl Isometry {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if m.rows() < m.cols() {
            return Err(Error::DimensionMismatch(format!(
                "isometry needs rows >= cols, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let defect = m.isometry_defect();
        if defect > tol::CONSTRUCTION {
            return Err(Error::NotIsometry { deviation: defect });
        }
        Ok(Self(m))
    }

    /// The first `cols` columns of a unitary.
    pub fn from_unitary_columns(u: &ComplexMatrix, cols: usize) -> Result<Self> {
        if cols > u.cols() {
            return Err(Error::DimensionMismatch(format!("{cols} columns from a {}-column matrix", u.cols())));
        }
        let rows: Vec<Vec<Complex64>> = (0..u.rows()).map(|i| (0..cols).map(|j| u.get(i, j)).collect()).collect();
        Self::new(ComplexMatrix::from_rows(&rows)?)
    }

    pub fn identity(n: usize) -> Self {
        Self(ComplexMatrix::identity(n))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn domain_dim(&self) -> usize {
        self.0.cols()
    }

    pub fn target_dim(&self) -> usize {
        self.0.rows()
    }
}

/// Kronecker product `a ⊗ b` with concatenated dims, using the active cap.
pub fn tensor(a: &DensityMatrix, b: &DensityMatrix) -> Result<DensityMatrix> {
    tensor_capped(a, b, max_dim())
}

pub fn tensor_capped(a: &DensityMatrix, b: &DensityMatrix, cap: usize) -> Result<DensityMatrix> {
    check_cap(a.dim() * b.dim(), cap)?;
    let dims = a.dims.iter().chain(&b.dims).copied().collect();
    Ok(DensityMatrix::from_trusted(a.matrix.kron(&b.matrix), dims))
}

/// Digits of a flat index in the mixed radix given by `dims` (row-major).
pub(crate) fn digits(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for (k, &d) in dims.iter().enumerate().rev() {
        out[k] = index % d;
        index /= d;
    }
    out
}

pub(crate) fn flat_index(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&x, &d)| acc * d + x)
}

/// Flat-index map for a subsystem permutation: entry `n` is the old flat
/// index of new basis state `n`, where new subsystem `k` is old subsystem `order[k]`.
fn permutation_map(dims: &[usize], order: &[usize]) -> Vec<usize> {
    let new_dims: Vec<usize> = order.iter().map(|&k| dims[k]).collect();
    let total: usize = dims.iter().product();
    (0..total)
        .map(|n| {
            let new_digits = digits(n, &new_dims);
            let mut old = vec![0; dims.len()];
            for (pos, &k) in order.iter().enumerate() {
                old[k] = new_digits[pos];
            }
            flat_index(&old, dims)
        })
        .collect()
}

fn check_order(order: &[usize], len: usize) -> Result<()> {
    let mut seen = vec![false; len];
    if order.len() != len {
        return Err(Error::DimensionMismatch(format!("permutation of length {} for {len} subsystems", order.len())));
    }
    for &k in order {
        if k >= len {
            return Err(Error::IndexOutOfRange { index: k, len });
        }
        if std::mem::replace(&mut seen[k], true) {
            return Err(Error::InvalidInput(format!("subsystem {k} repeated in permutation")));
        }
    }
    Ok(())
}

fn permute_matrix(m: &ComplexMatrix, dims: &[usize], order: &[usize]) -> ComplexMatrix {
    let map = permutation_map(dims, order);
    let n = map.len();
    let mut out = ComplexMatrix::zeros(n, n);
    for (i, &oi) in map.iter().enumerate() {
        for (j, &oj) in map.iter().enumerate() {
            out.set(i, j, m.get(oi, oj));
        }
    }
    out
}

/// Reorders subsystems: new subsystem `k` is old subsystem `order[k]`.
pub fn permute_subsystems(rho: &DensityMatrix, order: &[usize]) -> Result<DensityMatrix> {
    check_order(order, rho.dims.len())?;
    let dims = order.iter().map(|&k| rho.dims[k]).collect();
    Ok(DensityMatrix { matrix: permute_matrix(&rho.matrix, &rho.dims, order), dims })
}

/// Reduced state on the subsystems in `keep`, listed in their original order.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    if keep.is_empty() {
        return Err(Error::EmptyKeepSet);
    }
    let len = rho.dims.len();
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    if let Some(&bad) = keep_sorted.iter().find(|&&k| k >= len) {
        return Err(Error::IndexOutOfRange { index: bad, len });
    }
    let kept_dims: Vec<usize> = keep_sorted.iter().map(|&k| rho.dims[k]).collect();
    let dk: usize = kept_dims.iter().product();
    let dr = rho.dim() / dk;
    let order: Vec<usize> = keep_sorted.iter().copied().chain((0..len).filter(|k| !keep_sorted.contains(k))).collect();
    let map = permutation_map(&rho.dims, &order);
    let mut out = ComplexMatrix::zeros(dk, dk);
    for i in 0..dk {
        for j in 0..dk {
            let mut acc = ZERO;
            for r in 0..dr {
                acc += rho.matrix.get(map[i * dr + r], map[j * dr + r]);
            }
            out.set(i, j, acc);
        }
    }
    Ok(DensityMatrix::from_trusted(out, kept_dims))
}

/// `(Op on targets ⊗ I) M (Op ⊗ I)†`, where `op` maps the joint space of
/// `targets` (in the listed order) into `out_dims`. The targets keep their
/// positions; an operator with a single target may change that subsystem's
/// dimension.
pub(crate) fn apply_local_matrix(
    m: &ComplexMatrix,
    dims: &[usize],
    op: &ComplexMatrix,
    targets: &[usize],
    out_dims: &[usize],
) -> Result<(ComplexMatrix, Vec<usize>)> {
    let len = dims.len();
    let target_dim: usize = targets.iter().map(|&k| dims.get(k).copied().unwrap_or(0)).product();
    if let Some(&bad) = targets.iter().find(|&&k| k >= len) {
        return Err(Error::IndexOutOfRange { index: bad, len });
    }
    if op.cols() != target_dim || op.rows() != out_dims.iter().product::<usize>() || out_dims.len() != targets.len() {
        return Err(Error::DimensionMismatch(format!(
            "operator {}x{} on subsystems {targets:?} of dims {dims:?}",
            op.rows(),
            op.cols()
        )));
    }
    let rest: Vec<usize> = (0..len).filter(|k| !targets.contains(k)).collect();
    let order: Vec<usize> = targets.iter().chain(&rest).copied().collect();
    check_order(&order, len)?;
    let rest_dim: usize = rest.iter().map(|&k| dims[k]).product();
    let permuted = permute_matrix(m, dims, &order);
    let lifted = op.kron(&ComplexMatrix::identity(rest_dim));
    let applied = &(&lifted * &permuted) * &lifted.adjoint();

    let mut new_dims = dims.to_vec();
    for (&k, &d) in targets.iter().zip(out_dims) {
        new_dims[k] = d;
    }
    let permuted_dims: Vec<usize> = order.iter().map(|&k| new_dims[k]).collect();
    let mut inverse = vec![0; len];
    for (pos, &k) in order.iter().enumerate() {
        inverse[k] = pos;
    }
    Ok((permute_matrix(&applied, &permuted_dims, &inverse), new_dims))
}

/// Conjugates the joint space of `targets` by a unitary.
pub fn apply_local_unitary(rho: &DensityMatrix, u: &ComplexMatrix, targets: &[usize]) -> Result<DensityMatrix> {
    let defect = u.unitarity_defect();
    if defect > tol::CONSTRUCTION {
        return Err(Error::NotUnitary { deviation: defect });
    }
    let out_dims: Vec<usize> = targets.iter().map(|&k| rho.dims.get(k).copied().unwrap_or(0)).collect();
    let (m, dims) = apply_local_matrix(&rho.matrix, &rho.dims, u, targets, &out_dims)?;
    Ok(DensityMatrix::from_trusted(m, dims))
}

/// `(V on subsystem ⊗ I) ρ (V ⊗ I)†` for a local isometry V.
pub fn embed(rho: &DensityMatrix, v: &Isometry, subsystem: usize) -> Result<DensityMatrix> {
    let len = rho.dims.len();
    if subsystem >= len {
        return Err(Error::IndexOutOfRange { index: subsystem, len });
    }
    if v.domain_dim() != rho.dims[subsystem] {
        return Err(Error::DimensionMismatch(format!(
            "isometry domain {} vs subsystem dimension {}",
            v.domain_dim(),
            rho.dims[subsystem]
        )));
    }
    let new_dim = rho.dim() / v.domain_dim() * v.target_dim();
    check_cap(new_dim, max_dim())?;
    let (m, dims) = apply_local_matrix(&rho.matrix, &rho.dims, v.matrix(), &[subsystem], &[v.target_dim()])?;
    Ok(DensityMatrix::from_trusted(m, dims))
}

/// Zeroes every entry whose row and column differ in the digit of `subsystem`:
/// dephasing in the computational basis of that subsystem.
pub(crate) fn dephase_computational(rho: &DensityMatrix, subsystem: usize) -> DensityMatrix {
    let dims = &rho.dims;
    let stride: usize = dims[subsystem + 1..].iter().product();
    let d = dims[subsystem];
    let n = rho.dim();
    let mut out = rho.matrix.clone();
    for i in 0..n {
        let di = (i / stride) % d;
        for j in 0..n {
            if (j / stride) % d != di {
                out.set(i, j, ZERO);
            }
        }
    }
    DensityMatrix { matrix: out, dims: dims.clone() }
}

/// Kronecker product of single-subsystem state vectors.
pub(crate) fn kron_vectors(parts: &[Vec<Complex64>]) -> Vec<Complex64> {
    parts.iter().fold(vec![ONE], |acc, v| acc.iter().flat_map(|a| v.iter().map(move |b| a * b)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::random_density;
    use crate::states;

    #[test]
    fn maximally_mixed_qubit_validates() {
        let m = ComplexMatrix::identity(2).scale(0.5);
        assert!(validate(&m, &[2]).is_ok());
    }

    #[test]
    fn wrong_trace_is_rejected() {
        let m = ComplexMatrix::from_real_diagonal(&[0.6, 0.5]);
        assert_eq!(validate(&m, &[2]).unwrap_err().name(), "NotUnitTrace");
    }

    #[test]
    fn negative_eigenvalue_is_rejected() {
        let m = ComplexMatrix::from_real_diagonal(&[1.2, -0.2]);
        assert_eq!(validate(&m, &[2]).unwrap_err().name(), "NotPSD");
    }

    #[test]
    fn dims_must_factor_dimension() {
        let m = ComplexMatrix::identity(4).scale(0.25);
        assert_eq!(validate(&m, &[2, 3]).unwrap_err().name(), "DimensionMismatch");
    }

    #[test]
    fn tensor_of_mixed_qubits() {
        let half = DensityMatrix::maximally_mixed(vec![2]);
        let t = tensor(&half, &half).unwrap();
        assert_eq!(t.dims(), &[2, 2]);
        assert!(t.matrix().max_diff(&ComplexMatrix::identity(4).scale(0.25)) < 1e-15);
    }

    #[test]
    fn tensor_of_basis_states() {
        let zero = DensityMatrix::basis(0, vec![2]).unwrap();
        let one = DensityMatrix::basis(1, vec![2]).unwrap();
        let t = tensor(&zero, &one).unwrap();
        assert_eq!(t, DensityMatrix::basis(1, vec![2, 2]).unwrap());
    }

    #[test]
    fn tensor_respects_cap() {
        let a = DensityMatrix::maximally_mixed(vec![16]);
        let err = tensor_capped(&a, &a, 100).unwrap_err();
        assert_eq!(err, Error::DimensionTooLarge { dim: 256, cap: 100 });
    }

    #[test]
    fn tensor_spectrum_is_pairwise_products() {
        let a = random_density(3, 3, 1).unwrap();
        let b = random_density(2, 2, 2).unwrap();
        let mut expected: Vec<f64> = a
            .spectrum()
            .values()
            .iter()
            .flat_map(|x| b.spectrum().values().iter().map(move |y| x * y).collect::<Vec<_>>())
            .collect();
        expected.sort_by(|x, y| y.total_cmp(x));
        let got = tensor(&a, &b).unwrap().spectrum();
        for (g, e) in got.values().iter().zip(&expected) {
            assert!((g - e).abs() < 1e-12);
        }
    }

    #[test]
    fn partial_trace_of_product_returns_factor() {
        let a = random_density(3, 2, 5).unwrap();
        let b = random_density(2, 2, 6).unwrap();
        let t = tensor(&a, &b).unwrap();
        assert!(partial_trace(&t, &[0]).unwrap().matrix().max_diff(a.matrix()) < 1e-12);
        assert!(partial_trace(&t, &[1]).unwrap().matrix().max_diff(b.matrix()) < 1e-12);
    }

    #[test]
    fn bell_reduction_is_maximally_mixed() {
        let bell = states::bell();
        let red = partial_trace(&bell, &[0]).unwrap();
        assert!(red.matrix().max_diff(DensityMatrix::maximally_mixed(vec![2]).matrix()) < 1e-15);
    }

    #[test]
    fn partial_trace_errors() {
        let bell = states::bell();
        assert_eq!(partial_trace(&bell, &[]).unwrap_err(), Error::EmptyKeepSet);
        assert_eq!(partial_trace(&bell, &[2]).unwrap_err(), Error::IndexOutOfRange { index: 2, len: 2 });
    }

    #[test]
    fn reductions_have_unit_trace() {
        for seed in 0..100 {
            let rho = random_density(4, 4, seed).unwrap().with_dims(vec![2, 2]).unwrap();
            let red = partial_trace(&rho, &[0]).unwrap();
            assert!((red.matrix().trace().re - 1.0).abs() < 1e-9);
            assert!(validate(red.matrix(), red.dims()).is_ok());
        }
    }

    #[test]
    fn partial_trace_of_middle_subsystem() {
        let a = random_density(2, 2, 11).unwrap();
        let b = random_density(3, 3, 12).unwrap();
        let c = random_density(2, 1, 13).unwrap();
        let abc = tensor(&tensor(&a, &b).unwrap(), &c).unwrap();
        let ac = partial_trace(&abc, &[2, 0]).unwrap();
        assert_eq!(ac.dims(), &[2, 2]);
        assert!(ac.matrix().max_diff(tensor(&a, &c).unwrap().matrix()) < 1e-12);
    }

    #[test]
    fn identity_isometry_leaves_state_unchanged() {
        let rho = random_density(4, 4, 3).unwrap().with_dims(vec![2, 2]).unwrap();
        let out = embed(&rho, &Isometry::identity(2), 1).unwrap();
        assert!(out.matrix().max_diff(rho.matrix()) < 1e-14);
    }

    #[test]
    fn qubit_into_qutrit_preserves_spectrum() {
        let rho = random_density(4, 3, 9).unwrap().with_dims(vec![2, 2]).unwrap();
        let v = Isometry::from_unitary_columns(&crate::random::random_unitary(3, 4), 2).unwrap();
        let out = embed(&rho, &v, 0).unwrap();
        assert_eq!(out.dims(), &[3, 2]);
        let before = rho.spectrum();
        let after = out.spectrum();
        for (k, x) in after.values().iter().enumerate() {
            let expected = before.values().get(k).copied().unwrap_or(0.0);
            assert!((x - expected).abs() < 1e-9);
        }
        assert!(validate(out.matrix(), out.dims()).is_ok());
    }

    #[test]
    fn basis_relabeling_embedding() {
        // V|0> = |2>, V|1> = |0>
        let mut m = ComplexMatrix::zeros(3, 2);
        m.set(2, 0, ONE);
        m.set(0, 1, ONE);
        let v = Isometry::new(m).unwrap();
        let out = embed(&DensityMatrix::basis(0, vec![2]).unwrap(), &v, 0).unwrap();
        assert_eq!(out, DensityMatrix::basis(2, vec![3]).unwrap());
    }

    #[test]
    fn embed_rejects_wrong_domain() {
        let v = Isometry::identity(3);
        let err = embed(&states::bell(), &v, 0).unwrap_err();
        assert_eq!(err.name(), "DimensionMismatch");
    }

    #[test]
    fn permutation_swaps_factors() {
        let a = random_density(2, 2, 21).unwrap();
        let b = random_density(3, 2, 22).unwrap();
        let ab = tensor(&a, &b).unwrap();
        let ba = permute_subsystems(&ab, &[1, 0]).unwrap();
        assert!(ba.matrix().max_diff(tensor(&b, &a).unwrap().matrix()) < 1e-14);
    }

    #[test]
    fn local_unitary_on_second_factor() {
        let a = random_density(2, 2, 31).unwrap();
        let b = random_density(3, 3, 32).unwrap();
        let u = crate::random::random_unitary(3, 33);
        let out = apply_local_unitary(&tensor(&a, &b).unwrap(), &u, &[1]).unwrap();
        let expected = tensor(&a, &DensityMatrix::from_trusted(b.matrix().conjugate_by(&u), vec![3])).unwrap();
        assert!(out.matrix().max_diff(expected.matrix()) < 1e-12);
    }
}
