//! Seeded random states and unitaries.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::state::DensityMatrix;

/// The crate's seeded generator.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub(crate) fn ginibre(rows: usize, cols: usize, rng: &mut impl Rng) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im)
    })
}

/// Random state from the induced measure: the reduction of a Haar-random
/// pure state on `dim × rank` onto its first factor.
///
/// Equal seeds give bit-identical states.
pub fn random_density(dim: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    if rank == 0 || rank > dim {
        return Err(Error::RankOutOfRange { rank, dim });
    }
    let mut rng = rng(seed);
    Ok(random_density_with(dim, rank, &mut rng))
}

pub(crate) fn random_density_with(dim: usize, rank: usize, rng: &mut impl Rng) -> DensityMatrix {
    let g = ginibre(dim, rank, rng);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::from_trusted(ComplexMatrix::from_dmatrix(m.map(|z| z / tr)), vec![dim])
}

/// Haar-random unitary from the QR decomposition of a Ginibre matrix.
pub fn random_unitary(dim: usize, seed: u64) -> ComplexMatrix {
    random_unitary_with(dim, &mut rng(seed))
}

pub(crate) fn random_unitary_with(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let g = ginibre(dim, dim, rng);
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    // Fix column phases so the distribution is Haar.
    let q = DMatrix::from_fn(dim, dim, |i, j| {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        q[(i, j)] * phase
    });
    ComplexMatrix::from_dmatrix(q)
}

/// Haar-random unit vector.
pub fn random_pure_vector(dim: usize, rng: &mut impl Rng) -> Vec<Complex64> {
    let g = ginibre(dim, 1, rng);
    let norm = g.norm();
    g.iter().map(|z| z / norm).collect()
}

/// Random probability vector (flat Dirichlet).
pub fn random_probabilities(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| -rng.random::<f64>().max(f64::MIN_POSITIVE).ln()).collect();
    let total: f64 = raw.iter().sum();
    raw.iter().map(|x| x / total).collect()
}
