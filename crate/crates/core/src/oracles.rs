//! Slow reference implementations used to cross-check the optimized paths.
//!
//! The grid searches restrict A to a qubit and sweep the Bloch sphere
//! directly, building each measured state from an explicit projector sum.
//! The bistochastic search constructs a doubly stochastic matrix as a
//! product of T-transforms and checks it entry by entry.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rayon::prelude::*;

use crate::entropy::{mutual_information, vn_entropy};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::random::rng;
use crate::state::DensityMatrix;
use crate::tol;

/// Resolution of the Bloch-sphere sweep. θ covers [0, π] inclusive and φ covers [0, 2π).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub theta_points: usize,
    pub phi_points: usize,
}

impl GridSpec {
    pub fn new(theta_points: usize, phi_points: usize) -> Result<Self> {
        if theta_points < 2 || phi_points < 2 {
            return Err(Error::InvalidInput("grid needs at least 2 points per axis".into()));
        }
        Ok(Self { theta_points, phi_points })
    }

    fn nodes(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(self.theta_points * self.phi_points);
        for i in 0..self.theta_points {
            let theta = std::f64::consts::PI * i as f64 / (self.theta_points - 1) as f64;
            for j in 0..self.phi_points {
                out.push((theta, std::f64::consts::TAU * j as f64 / self.phi_points as f64));
            }
        }
        out
    }
}

/// Minimum over the grid, with the Bloch angles of the minimizing basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridMinimum {
    pub value: f64,
    pub theta: f64,
    pub phi: f64,
}

/// Projectors onto the Bloch vector (θ, φ) and its antipode.
pub fn bloch_projectors(theta: f64, phi: f64) -> [ComplexMatrix; 2] {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let up = [Complex64::new(c, 0.0), Complex64::from_polar(s, phi)];
    let down = [Complex64::from_polar(-s, -phi), Complex64::new(c, 0.0)];
    [ComplexMatrix::projector(&up), ComplexMatrix::projector(&down)]
}

/// Σ_k (P_k ⊗ I) ρ (P_k ⊗ I).
fn measured(rho: &DensityMatrix, db: usize, theta: f64, phi: f64) -> DensityMatrix {
    let id = ComplexMatrix::identity(db);
    let mut sum = ComplexMatrix::zeros(rho.dim(), rho.dim());
    for p in bloch_projectors(theta, phi) {
        let big = p.kron(&id);
        sum = &sum + &(&(&big * rho.matrix()) * &big);
    }
    DensityMatrix::from_trusted(sum, rho.dims().to_vec())
}

fn qubit_on_a(rho: &DensityMatrix) -> Result<usize> {
    let (da, db) = rho.bipartite_dims()?;
    if da != 2 {
        return Err(Error::NotAQubitOnA(da));
    }
    Ok(db)
}

fn grid_min(grid: &GridSpec, f: impl Fn(f64, f64) -> f64 + Sync) -> GridMinimum {
    let values: Vec<(f64, f64, f64)> = grid.nodes().into_par_iter().map(|(t, p)| (f(t, p), t, p)).collect();
    let mut best = GridMinimum { value: f64::INFINITY, theta: 0.0, phi: 0.0 };
    for (value, theta, phi) in values {
        if value < best.value {
            best = GridMinimum { value, theta, phi };
        }
    }
    best
}

/// Grid minimum of S(ρ') − S(ρ) over projective qubit measurements on A.
pub fn grid_min_deficit(rho: &DensityMatrix, grid: &GridSpec) -> Result<GridMinimum> {
    let db = qubit_on_a(rho)?;
    let s = vn_entropy(rho);
    Ok(grid_min(grid, |t, p| vn_entropy(&measured(rho, db, t, p)) - s))
}

/// Grid minimum of I(ρ) − I(ρ') over projective qubit measurements on A.
pub fn grid_min_discord(rho: &DensityMatrix, grid: &GridSpec) -> Result<GridMinimum> {
    let db = qubit_on_a(rho)?;
    let i = mutual_information(rho)?;
    Ok(grid_min(grid, |t, p| i - mutual_information(&measured(rho, db, t, p)).expect("bipartite")))
}

/// Tolerance for accepting a constructed matrix as a witness.
const WITNESS_TOL: f64 = 1e-6;

fn sorted_desc(v: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&a, &b| v[b].total_cmp(&v[a]));
    (order.iter().map(|&k| v[k]).collect(), order)
}

/// One randomized T-transform chain from x toward y. Returns M with M·x ≈ y when it reaches y.
fn t_transform_chain(x: &[f64], y: &[f64], rng: &mut impl rand::Rng) -> Option<Vec<Vec<f64>>> {
    let n = x.len();
    let (xs, xo) = sorted_desc(x);
    let (ys, yo) = sorted_desc(y);
    let mut z = xs.clone();
    let mut m: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    for _ in 0..=2 * n {
        let mut donors: Vec<usize> =
            (0..n).filter(|&i| z[i] - ys[i] > tol::CLAMP && ((i + 1)..n).any(|k| ys[k] - z[k] > tol::CLAMP)).collect();
        if donors.is_empty() {
            break;
        }
        donors.shuffle(rng);
        let i = donors[0];
        let k = ((i + 1)..n).find(|&k| ys[k] - z[k] > tol::CLAMP)?;
        let delta = (z[i] - ys[i]).min(ys[k] - z[k]);
        let gap = z[i] - z[k];
        if gap <= 0.0 {
            return None;
        }
        // T = t·I + (1 − t)·swap(i, k) moves exactly delta from i to k.
        let t = 1.0 - delta / gap;
        let (zi, zk) = (z[i], z[k]);
        z[i] = t * zi + (1.0 - t) * zk;
        z[k] = t * zk + (1.0 - t) * zi;
        let (ri, rk) = (m[i].clone(), m[k].clone());
        for c in 0..n {
            m[i][c] = t * ri[c] + (1.0 - t) * rk[c];
            m[k][c] = t * rk[c] + (1.0 - t) * ri[c];
        }
    }
    // Undo the sorting: (M_total)[yo[a]][xo[b]] = M[a][b].
    let mut total = vec![vec![0.0; n]; n];
    for a in 0..n {
        for b in 0..n {
            total[yo[a]][xo[b]] = m[a][b];
        }
    }
    is_witness(&total, x, y).then_some(total)
}

fn is_witness(m: &[Vec<f64>], x: &[f64], y: &[f64]) -> bool {
    let n = x.len();
    let stochastic = (0..n).all(|i| {
        let row: f64 = m[i].iter().sum();
        let col: f64 = (0..n).map(|r| m[r][i]).sum();
        (row - 1.0).abs() <= WITNESS_TOL && (col - 1.0).abs() <= WITNESS_TOL && m[i].iter().all(|&v| v >= -WITNESS_TOL)
    });
    stochastic && (0..n).all(|i| ((0..n).map(|j| m[i][j] * x[j]).sum::<f64>() - y[i]).abs() <= WITNESS_TOL)
}

/// Searches for a doubly stochastic M with M·x = y using `samples` randomized
/// T-transform chains. Vectors of different length are padded with zeros.
pub fn bistochastic_witness(x: &[f64], y: &[f64], samples: usize, seed: u64) -> Result<Option<Vec<Vec<f64>>>> {
    let (sx, sy): (f64, f64) = (x.iter().sum(), y.iter().sum());
    if (sx - sy).abs() > tol::DERIVED {
        return Err(Error::UnequalSums(sx, sy));
    }
    let n = x.len().max(y.len());
    let pad = |v: &[f64]| v.iter().copied().chain(std::iter::repeat(0.0)).take(n).collect::<Vec<_>>();
    let (x, y) = (pad(x), pad(y));
    let mut rng = rng(seed);
    Ok((0..samples.max(1)).find_map(|_| t_transform_chain(&x, &y, &mut rng)))
}

/// `true` iff [`bistochastic_witness`] finds a witness.
pub fn random_bistochastic_reachability(x: &[f64], y: &[f64], samples: usize, seed: u64) -> Result<bool> {
    Ok(bistochastic_witness(x, y, samples, seed)?.is_some())
}
