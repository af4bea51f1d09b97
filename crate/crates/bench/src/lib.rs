//! Fixed inputs shared by the criterion benchmarks in `benches/`.

use resourceforge::{random_density, DensityMatrix};

/// A seeded full-rank state on `dims`.
pub fn state(dims: &[usize], seed: u64) -> DensityMatrix {
    let dim = dims.iter().product();
    random_density(dim, dim, seed).unwrap().with_dims(dims.to_vec()).unwrap()
}

/// Descending probability vector of length `n` with a geometric profile.
pub fn geometric_spectrum(n: usize, ratio: f64) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|k| ratio.powi(k as i32)).collect();
    let total: f64 = raw.iter().sum();
    raw.iter().map(|x| x / total).collect()
}
