//! Quantumness of correlations: discord and deficits.
//!
//! For a measurement {P_i} on A, with ρ' = Σ_i (P_i ⊗ I) ρ (P_i ⊗ I):
//!
//! * one-way deficit integrand: S(ρ') − S(ρ)
//! * discord integrand: I(ρ) − I(ρ'), which differs from the deficit by the
//!   entropy produced on A alone, S(ρ'_A) − S(ρ_A)
//!
//! The zero-way variants dephase both sides. The optimized quantities
//! minimize these over rank-one projective measurements using
//! [`crate::optimize::minimize`] on the angle parametrization of
//! [`crate::measurement`].

use crate::entropy::{mutual_information, relative_entropy, vn_entropy};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::measurement::{
    measure_both, measure_local, measurement_from_params, param_axes, param_count, params_from_unitary,
    unitary_from_params, MeasurementParams, ParamAxis, ProjectiveMeasurement,
};
use crate::optimize::{minimize, MultiStart, OptimizerConfig};
use crate::state::{check_cap, embed, max_dim, permute_subsystems, tensor, DensityMatrix, Isometry};

/// The minimizing measurement of an optimized quantity.
#[derive(Debug, Clone, PartialEq)]
pub enum MeasurementChoice {
    /// A measurement on subsystem A.
    OneSided(ProjectiveMeasurement),
    /// Measurements on A and on B.
    BothSides(ProjectiveMeasurement, ProjectiveMeasurement),
    /// A local isometry on A followed by a computational-basis measurement of the enlarged system.
    Embedded { isometry: Isometry, measurement: ProjectiveMeasurement },
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumnessResult {
    /// Bits (per copy for [`multicopy_deficit`]).
    pub value: f64,
    pub measurement: MeasurementChoice,
    /// `(restart index, converged value)`; `value` is the minimum over these.
    pub trace: Vec<(usize, f64)>,
}

fn dims2(rho: &DensityMatrix) -> Result<(usize, usize)> {
    rho.bipartite_dims()
}

fn check_on_a(rho: &DensityMatrix, m: &ProjectiveMeasurement) -> Result<()> {
    let (da, _) = dims2(rho)?;
    if m.dimension() != da {
        return Err(Error::DimensionMismatch(format!(
            "measurement of dimension {} on A of dimension {da}",
            m.dimension()
        )));
    }
    Ok(())
}

/// S(ρ') − S(ρ) for the measurement `m` on A.
pub fn deficit_one_way_fixed(rho: &DensityMatrix, m: &ProjectiveMeasurement) -> Result<f64> {
    check_on_a(rho, m)?;
    let after = measure_local(rho, m, 0)?;
    Ok(vn_entropy(&after) - vn_entropy(rho))
}

/// I(ρ) − I(ρ') for the measurement `m` on A.
pub fn discord_fixed(rho: &DensityMatrix, m: &ProjectiveMeasurement) -> Result<f64> {
    check_on_a(rho, m)?;
    let after = measure_local(rho, m, 0)?;
    Ok(mutual_information(rho)? - mutual_information(&after)?)
}

fn trace_of(run: &MultiStart) -> Vec<(usize, f64)> {
    run.trace.clone()
}

/// Runs the optimizer over a measurement on A.
fn one_sided<F>(rho: &DensityMatrix, cfg: &OptimizerConfig, objective: F) -> Result<QuantumnessResult>
where
    F: Fn(&DensityMatrix, &ProjectiveMeasurement) -> Result<f64> + Sync,
{
    let (da, _) = dims2(rho)?;
    let f = |x: &[f64]| -> f64 {
        measurement_from_params(&MeasurementParams(x.to_vec()), da)
            .and_then(|m| objective(rho, &m))
            .unwrap_or(f64::INFINITY)
    };
    let run = minimize(&f, &param_axes(da, false), cfg, &[])?;
    let m = measurement_from_params(&MeasurementParams(run.point.clone()), da)?;
    Ok(QuantumnessResult { value: run.value, measurement: MeasurementChoice::OneSided(m), trace: trace_of(&run) })
}

/// Runs the optimizer jointly over measurements on A and on B.
fn two_sided<F>(rho: &DensityMatrix, cfg: &OptimizerConfig, objective: F) -> Result<QuantumnessResult>
where
    F: Fn(&DensityMatrix, &ProjectiveMeasurement, &ProjectiveMeasurement) -> Result<f64> + Sync,
{
    let (da, db) = dims2(rho)?;
    let na = param_count(da);
    let split = |x: &[f64]| -> Result<(ProjectiveMeasurement, ProjectiveMeasurement)> {
        Ok((
            measurement_from_params(&MeasurementParams(x[..na].to_vec()), da)?,
            measurement_from_params(&MeasurementParams(x[na..].to_vec()), db)?,
        ))
    };
    let f = |x: &[f64]| -> f64 { split(x).and_then(|(a, b)| objective(rho, &a, &b)).unwrap_or(f64::INFINITY) };
    let axes: Vec<ParamAxis> = param_axes(da, false).into_iter().chain(param_axes(db, false)).collect();
    let run = minimize(&f, &axes, cfg, &[])?;
    let (a, b) = split(&run.point)?;
    Ok(QuantumnessResult { value: run.value, measurement: MeasurementChoice::BothSides(a, b), trace: trace_of(&run) })
}

/// One-way deficit: min over measurements on A of S(ρ') − S(ρ).
pub fn deficit_one_way(rho: &DensityMatrix, cfg: &OptimizerConfig) -> Result<QuantumnessResult> {
    one_sided(rho, cfg, deficit_one_way_fixed)
}

/// Discord: min over measurements on A of I(ρ) − I(ρ').
pub fn discord(rho: &DensityMatrix, cfg: &OptimizerConfig) -> Result<QuantumnessResult> {
    one_sided(rho, cfg, discord_fixed)
}

/// Zero-way deficit: min over measurements on both sides of S(ρ') − S(ρ).
pub fn deficit_zero_way(rho: &DensityMatrix, cfg: &OptimizerConfig) -> Result<QuantumnessResult> {
    let s = vn_entropy(rho);
    two_sided(rho, cfg, |r, a, b| Ok(vn_entropy(&measure_both(r, a, b)?) - s))
}

/// Zero-way discord: min over measurements on both sides of I(ρ) − I(ρ').
pub fn discord_zero_way(rho: &DensityMatrix, cfg: &OptimizerConfig) -> Result<QuantumnessResult> {
    let i = mutual_information(rho)?;
    two_sided(rho, cfg, |r, a, b| Ok(i - mutual_information(&measure_both(r, a, b)?)?))
}

/// Relative-entropy distance to the states classical on A.
///
/// For a fixed basis on A the closest such state is the dephased state, so
/// the search runs over bases and evaluates S(ρ ‖ ρ') explicitly.
pub fn relent_to_cq(rho: &DensityMatrix, cfg: &OptimizerConfig) -> Result<QuantumnessResult> {
    one_sided(rho, cfg, |r, m| relative_entropy(r, &measure_local(r, m, 0)?))
}

/// Relative-entropy distance to the states classical on both sides, S(ρ ‖ ρ') minimized over basis pairs.
pub fn relent_to_cc(rho: &DensityMatrix, cfg: &OptimizerConfig) -> Result<QuantumnessResult> {
    two_sided(rho, cfg, |r, a, b| relative_entropy(r, &measure_both(r, a, b)?))
}

/// Block-diagonal `u ⊕ I` of total dimension `d`.
fn pad_unitary(u: &ComplexMatrix, d: usize) -> ComplexMatrix {
    let mut out = ComplexMatrix::identity(d);
    for i in 0..u.rows() {
        for j in 0..u.cols() {
            out.set(i, j, u.get(i, j));
        }
    }
    out
}

/// One-way deficit after embedding A into `dA + extra_dim` dimensions by a
/// local isometry, minimized over isometries.
///
/// Measuring the enlarged system in a basis W after an isometry V is the
/// same as measuring in the computational basis after W†V, so the search
/// runs over isometries alone (the first dA columns of a unitary on A').
/// The optimal unembedded measurement is always a feasible point and seeds
/// one restart.
pub fn generalized_deficit(rho: &DensityMatrix, extra_dim: usize, cfg: &OptimizerConfig) -> Result<QuantumnessResult> {
    let (da, db) = dims2(rho)?;
    let big = da + extra_dim;
    check_cap(big * db, max_dim())?;
    let computational = ProjectiveMeasurement::computational(big);
    let s = vn_entropy(rho);
    let isometry = |x: &[f64]| -> Result<Isometry> {
        Isometry::from_unitary_columns(&unitary_from_params(&MeasurementParams(x.to_vec()), big)?, da)
    };
    let f = |x: &[f64]| -> f64 {
        isometry(x)
            .and_then(|v| embed(rho, &v, 0))
            .and_then(|e| measure_local(&e, &computational, 0))
            .map(|after| vn_entropy(&after) - s)
            .unwrap_or(f64::INFINITY)
    };
    let base = deficit_one_way(rho, cfg)?;
    let MeasurementChoice::OneSided(m) = &base.measurement else { unreachable!("one-sided search") };
    let seed = params_from_unitary(&pad_unitary(&m.basis().adjoint(), big))?;
    let run = minimize(&f, &param_axes(big, true), cfg, &[seed.0])?;
    let v = isometry(&run.point)?;
    Ok(QuantumnessResult {
        value: run.value,
        measurement: MeasurementChoice::Embedded { isometry: v, measurement: computational },
        trace: trace_of(&run),
    })
}

/// Per-copy one-way deficit of ρ^{⊗n} with the copies grouped as (A^n | B^n), for n ∈ {1, 2}.
///
/// The product of the single-copy optimum with itself seeds one restart, so
/// the result never exceeds the single-copy value by more than rounding.
pub fn multicopy_deficit(rho: &DensityMatrix, n: usize, cfg: &OptimizerConfig) -> Result<QuantumnessResult> {
    let (da, db) = dims2(rho)?;
    match n {
        1 => deficit_one_way(rho, cfg),
        2 => {
            check_cap((da * db).pow(2), max_dim())?;
            let two = permute_subsystems(&tensor(rho, rho)?, &[0, 2, 1, 3])?.with_dims(vec![da * da, db * db])?;
            let single = deficit_one_way(rho, cfg)?;
            let MeasurementChoice::OneSided(m) = &single.measurement else { unreachable!("one-sided search") };
            let seed = params_from_unitary(m.kron(m).basis())?;
            let dd = da * da;
            let f = |x: &[f64]| -> f64 {
                measurement_from_params(&MeasurementParams(x.to_vec()), dd)
                    .and_then(|m| deficit_one_way_fixed(&two, &m))
                    .unwrap_or(f64::INFINITY)
            };
            let run = minimize(&f, &param_axes(dd, false), cfg, &[seed.0])?;
            let m = measurement_from_params(&MeasurementParams(run.point.clone()), dd)?;
            Ok(QuantumnessResult {
                value: run.value / 2.0,
                measurement: MeasurementChoice::OneSided(m),
                trace: run.trace.iter().map(|&(i, v)| (i, v / 2.0)).collect(),
            })
        }
        _ => Err(Error::InvalidInput(format!("copies must be 1 or 2, got {n}"))),
    }
}
