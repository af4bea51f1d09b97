//! Rank-one projective measurements and local dephasing.
//!
//! A measurement is stored as the unitary whose columns are the measured
//! basis, so completeness and orthogonality hold by construction.
//!
//! # Parametrization
//!
//! A unitary on `d` dimensions is built from `d² − 1` angles as
//! `U = G_1 G_2 ⋯ G_N · D`, with `N = d(d − 1)/2` complex Givens rotations
//! (two angles each: a mixing angle θ and a relative phase φ) followed by a
//! diagonal phase matrix with unit determinant (`d − 1` angles). The Givens
//! rotations act on adjacent rows `(r − 1, r)` in elimination order: column
//! `c = 0, 1, …` and, within a column, `r` from `d − 1` down to `c + 1`.
//! Every element of SU(d) has such a representation, which
//! [`params_from_unitary`] constructs.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ONE};
use crate::state::{apply_local_unitary, dephase_computational, DensityMatrix};
use crate::tol;

/// Angles of a special-unitary basis change, `d² − 1` of them.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementParams(pub Vec<f64>);

impl MeasurementParams {
    pub fn zeros(d: usize) -> Self {
        Self(vec![0.0; param_count(d)])
    }

    pub fn angles(&self) -> &[f64] {
        &self.0
    }
}

/// `d² − 1`.
pub fn param_count(d: usize) -> usize {
    d * d - 1
}

/// Adjacent row pairs `(r − 1, r)` in elimination order, tagged with the column they clear.
fn givens_schedule(d: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(d * (d.saturating_sub(1)) / 2);
    for c in 0..d.saturating_sub(1) {
        for r in (c + 1..d).rev() {
            out.push((c, r));
        }
    }
    out
}

/// One coordinate of the parameter space, used to lay out seeding grids.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamAxis {
    pub lo: f64,
    pub hi: f64,
    /// Periodic axes exclude `hi` from grids since it duplicates `lo`.
    pub periodic: bool,
    /// False for coordinates that cannot change the objective; grids pin them to `lo`.
    pub relevant: bool,
}

/// Axes of the `d² − 1` parameters. The trailing diagonal phases only
/// rephase basis vectors, so they are marked irrelevant unless
/// `phases_matter` (as for isometries, where column phases act before the
/// embedding).
pub fn param_axes(d: usize, phases_matter: bool) -> Vec<ParamAxis> {
    let mut axes = Vec::with_capacity(param_count(d));
    for _ in givens_schedule(d) {
        axes.push(ParamAxis { lo: 0.0, hi: FRAC_PI_2, periodic: false, relevant: true });
        axes.push(ParamAxis { lo: 0.0, hi: TAU, periodic: true, relevant: true });
    }
    for _ in 1..d {
        axes.push(ParamAxis { lo: 0.0, hi: TAU, periodic: true, relevant: phases_matter });
    }
    axes
}

/// Left-multiplies rows `(p, q)` of `w` by the Givens rotation `G(θ, φ)`,
/// or by its adjoint when `adjoint` is set.
fn rotate_rows(w: &mut ComplexMatrix, p: usize, q: usize, theta: f64, phi: f64, adjoint: bool) {
    let (s, c) = theta.sin_cos();
    let e = Complex64::from_polar(1.0, phi);
    // G = [[c, -e^{-iφ} s], [e^{iφ} s, c]]
    let (gpq, gqp) = if adjoint { (e.conj() * s, -e * s) } else { (-e.conj() * s, e * s) };
    for j in 0..w.cols() {
        let (a, b) = (w.get(p, j), w.get(q, j));
        w.set(p, j, a * c + gpq * b);
        w.set(q, j, gqp * a + b * c);
    }
}

/// The special unitary encoded by `params`.
pub fn unitary_from_params(params: &MeasurementParams, d: usize) -> Result<ComplexMatrix> {
    let expected = param_count(d);
    if params.0.len() != expected {
        return Err(Error::ParamCountMismatch { expected, found: params.0.len() });
    }
    if let Some(k) = params.0.iter().position(|x| !x.is_finite()) {
        return Err(Error::NonFinite { row: k, col: 0 });
    }
    let schedule = givens_schedule(d);
    let (rotations, phases) = params.0.split_at(2 * schedule.len());
    let mut diag = vec![ONE; d];
    let mut total = 0.0;
    for (k, &a) in phases.iter().enumerate() {
        diag[k] = Complex64::from_polar(1.0, a);
        total += a;
    }
    if d > 0 {
        diag[d - 1] = Complex64::from_polar(1.0, -total);
    }
    let mut u = ComplexMatrix::zeros(d, d);
    for (k, z) in diag.iter().enumerate() {
        u.set(k, k, *z);
    }
    // U = G_1 ⋯ G_N D: apply G_N first.
    for (k, &(_, r)) in schedule.iter().enumerate().rev() {
        rotate_rows(&mut u, r - 1, r, rotations[2 * k], rotations[2 * k + 1], false);
    }
    Ok(u)
}

/// Angles reproducing `u` up to a global phase.
pub fn params_from_unitary(u: &ComplexMatrix) -> Result<MeasurementParams> {
    let defect = u.unitarity_defect();
    if defect > tol::CONSTRUCTION {
        return Err(Error::NotUnitary { deviation: defect });
    }
    let d = u.rows();
    let det = u.determinant();
    let global = Complex64::from_polar(1.0, -det.arg() / d as f64);
    let mut w = u.scale(1.0);
    for i in 0..d {
        for j in 0..d {
            w.set(i, j, w.get(i, j) * global);
        }
    }
    let schedule = givens_schedule(d);
    let mut angles = Vec::with_capacity(param_count(d));
    for &(c, r) in &schedule {
        let (a, b) = (w.get(r - 1, c), w.get(r, c));
        let theta = b.norm().atan2(a.norm());
        let phi = if b.norm() == 0.0 { 0.0 } else { b.arg() - if a.norm() == 0.0 { 0.0 } else { a.arg() } };
        rotate_rows(&mut w, r - 1, r, theta, phi, true);
        angles.push(theta);
        angles.push(phi.rem_euclid(TAU));
    }
    for k in 0..d.saturating_sub(1) {
        angles.push(w.get(k, k).arg().rem_euclid(TAU));
    }
    Ok(MeasurementParams(angles))
}

/// A complete family of rank-one orthogonal projectors `P_i = |b_i⟩⟨b_i|`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveMeasurement {
    basis: ComplexMatrix,
}

impl ProjectiveMeasurement {
    /// Wraps a unitary whose columns are the measured basis.
    pub fn from_basis(basis: ComplexMatrix) -> Result<Self> {
        if !basis.is_square() {
            return Err(Error::NotSquare { rows: basis.rows(), cols: basis.cols() });
        }
        let defect = basis.unitarity_defect();
        if defect > tol::CONSTRUCTION {
            return Err(Error::NotUnitary { deviation: defect });
        }
        Ok(Self { basis })
    }

    pub fn computational(d: usize) -> Self {
        Self { basis: ComplexMatrix::identity(d) }
    }

    pub fn dimension(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    pub fn projectors(&self) -> Vec<ComplexMatrix> {
        (0..self.dimension()).map(|i| ComplexMatrix::projector(&self.basis.column(i))).collect()
    }

    /// Measurement on the product space, basis `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        Self { basis: self.basis.kron(&other.basis) }
    }
}

pub fn measurement_from_params(params: &MeasurementParams, d: usize) -> Result<ProjectiveMeasurement> {
    Ok(ProjectiveMeasurement { basis: unitary_from_params(params, d)? })
}

fn check_subsystem(rho: &DensityMatrix, side: usize, d: usize) -> Result<()> {
    let len = rho.num_subsystems();
    if side >= len {
        return Err(Error::IndexOutOfRange { index: side, len });
    }
    if rho.dims()[side] != d {
        return Err(Error::DimensionMismatch(format!(
            "measurement of dimension {d} on subsystem {side} of dimension {}",
            rho.dims()[side]
        )));
    }
    Ok(())
}

/// `Σ_i (P_i ⊗ I) ρ (P_i ⊗ I)` with the projectors on subsystem `side`.
pub fn measure_local(rho: &DensityMatrix, m: &ProjectiveMeasurement, side: usize) -> Result<DensityMatrix> {
    check_subsystem(rho, side, m.dimension())?;
    let rotated = apply_local_unitary(rho, &m.basis.adjoint(), &[side])?;
    let dephased = dephase_computational(&rotated, side);
    apply_local_unitary(&dephased, &m.basis, &[side])
}

/// `Σ_ij (P_i ⊗ Q_j) ρ (P_i ⊗ Q_j)` on a two-party state.
pub fn measure_both(
    rho: &DensityMatrix,
    ma: &ProjectiveMeasurement,
    mb: &ProjectiveMeasurement,
) -> Result<DensityMatrix> {
    rho.bipartite_dims()?;
    measure_local(&measure_local(rho, ma, 0)?, mb, 1)
}

/// Computational-basis dephasing of one qubit subsystem.
pub fn dephasing_channel(rho: &DensityMatrix, qubit: usize) -> Result<DensityMatrix> {
    let len = rho.num_subsystems();
    if qubit >= len {
        return Err(Error::IndexOutOfRange { index: qubit, len });
    }
    let d = rho.dims()[qubit];
    if d != 2 {
        return Err(Error::NotAQubit { index: qubit, dim: d });
    }
    Ok(dephase_computational(rho, qubit))
}
