//! Majorization, single-shot noisy transitions and conversion rates.

use crate::entropy::{free_energy_gap, negentropy, Hamiltonian};
use crate::error::{Error, Result};
use crate::linalg::Spectrum;
use crate::state::{check_cap, max_dim, DensityMatrix};
use crate::tol;

/// Below this, an input to [`conversion_rate`] counts as zero.
const RATE_ZERO: f64 = 1e-12;

/// `true` iff every descending prefix sum of `x` dominates that of `y`
/// (within 1e-9). The shorter spectrum is padded with zeros.
pub fn majorizes(x: &Spectrum, y: &Spectrum) -> Result<bool> {
    let (sx, sy) = (x.sum(), y.sum());
    if (sx - sy).abs() > tol::DERIVED {
        return Err(Error::UnequalSums(sx, sy));
    }
    let n = x.len().max(y.len());
    let (mut px, mut py) = (0.0, 0.0);
    for k in 0..n {
        px += x.values().get(k).copied().unwrap_or(0.0);
        py += y.values().get(k).copied().unwrap_or(0.0);
        if px < py - tol::DERIVED {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Spectrum of `ρ ⊗ I_k/k`: each eigenvalue split into `k` equal parts.
pub fn pad_with_mixed(spec: &Spectrum, k: usize) -> Spectrum {
    let vals = spec.values().iter().flat_map(|&v| std::iter::repeat_n(v / k as f64, k)).collect();
    Spectrum::new(vals).expect("finite input")
}

/// Whether noisy operations can turn ρ into σ in a single shot.
///
/// States of different dimensions are compared after appending maximally
/// mixed ancillas to reach the common dimension dρ·dσ: ρ ⊗ I/dσ against
/// σ ⊗ I/dρ. The transition is possible iff the first spectrum majorizes the
/// second.
pub fn single_shot_noisy_transition(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<bool> {
    check_cap(rho.dim() * sigma.dim(), max_dim())?;
    let (a, b) = padded_spectra(rho, sigma);
    majorizes(&a, &b)
}

/// The two spectra compared by [`single_shot_noisy_transition`].
pub fn padded_spectra(rho: &DensityMatrix, sigma: &DensityMatrix) -> (Spectrum, Spectrum) {
    (pad_with_mixed(&rho.spectrum(), sigma.dim()), pad_with_mixed(&sigma.spectrum(), rho.dim()))
}

/// A conversion rate with the distances it was computed from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateResult {
    /// Copies of the target per copy of the source; may be `f64::INFINITY`.
    pub rate: f64,
    pub numerator_bits: f64,
    pub denominator_bits: f64,
}

/// Asymptotic rate from the regularized relative-entropy distances of source and target.
pub fn conversion_rate(er_source: f64, er_target: f64) -> Result<RateResult> {
    for v in [er_source, er_target] {
        if !v.is_finite() || v < -tol::DERIVED {
            return Err(Error::InvalidInput(format!("distances must be finite and nonnegative, got {v}")));
        }
    }
    let (num, den) = (er_source.max(0.0), er_target.max(0.0));
    let rate = match (num > RATE_ZERO, den > RATE_ZERO) {
        (_, true) => num / den,
        (true, false) => f64::INFINITY,
        (false, false) => return Err(Error::BothZero),
    };
    Ok(RateResult { rate, numerator_bits: num, denominator_bits: den })
}

/// Rate of distilling pure qubits from ρ: its negentropy (a pure qubit has distance 1).
pub fn purity_rate(rho: &DensityMatrix) -> RateResult {
    RateResult { rate: negentropy(rho), numerator_bits: negentropy(rho), denominator_bits: 1.0 }
}

/// Thermodynamic conversion rate between states commuting with `h`:
/// the ratio of their free-energy gaps to the Gibbs state.
pub fn thermo_rate(rho: &DensityMatrix, target: &DensityMatrix, h: &Hamiltonian) -> Result<RateResult> {
    for s in [rho, target] {
        if s.dim() != h.dim() {
            return Err(Error::DimensionMismatch(format!("state dimension {} vs Hamiltonian {}", s.dim(), h.dim())));
        }
        let defect = h.commutator_defect(s);
        if defect > tol::DERIVED {
            return Err(Error::NonCommuting { deviation: defect });
        }
    }
    conversion_rate(free_energy_gap(rho, h)?, free_energy_gap(target, h)?)
}
