//! Entropic functionals. All logarithms are base 2, so every value is in bits.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian_unchecked, hermitian_function, ComplexMatrix};
use crate::state::{partial_trace, DensityMatrix};
use crate::tol;

/// Weight of ρ outside the support of σ above which S(ρ‖σ) is infinite.
const SUPPORT_WEIGHT: f64 = 1e-10;

/// von Neumann entropy in bits.
pub fn vn_entropy(rho: &DensityMatrix) -> f64 {
    rho.spectrum().entropy_bits()
}

/// Quantum relative entropy S(ρ‖σ) = Tr ρ log ρ − Tr ρ log σ, in bits.
///
/// Evaluated in the eigenbasis of σ. Returns `f64::INFINITY` when ρ has
/// weight on the null space of σ (eigenvalues at or below the clamp).
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(format!("dimensions {} and {}", rho.dim(), sigma.dim())));
    }
    let (spec, vecs) = eig_hermitian_unchecked(sigma.matrix());
    let in_basis = rho.matrix().conjugate_by(&vecs.adjoint());
    let mut cross = 0.0;
    let mut off_support = 0.0;
    for (j, &s) in spec.values().iter().enumerate() {
        let weight = in_basis.get(j, j).re;
        if s <= tol::CLAMP {
            off_support += weight.max(0.0);
        } else {
            cross -= weight * s.log2();
        }
    }
    if off_support > SUPPORT_WEIGHT {
        return Ok(f64::INFINITY);
    }
    Ok((cross - vn_entropy(rho)).max(0.0))
}

/// S(ρ_A) + S(ρ_B) − S(ρ_AB) for a two-party state.
pub fn mutual_information(rho: &DensityMatrix) -> Result<f64> {
    rho.bipartite_dims()?;
    let a = partial_trace(rho, &[0])?;
    let b = partial_trace(rho, &[1])?;
    Ok((vn_entropy(&a) + vn_entropy(&b) - vn_entropy(rho)).max(0.0))
}

/// log d − S(ρ): the number of pure qubits' worth of purity in ρ.
pub fn negentropy(rho: &DensityMatrix) -> f64 {
    ((rho.dim() as f64).log2() - vn_entropy(rho)).max(0.0)
}

/// A Hermitian energy operator at inverse temperature `beta` (units of 1/energy).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "crate::io::HamiltonianFile", into = "crate::io::HamiltonianFile")]
pub struct Hamiltonian {
    matrix: ComplexMatrix,
    beta: f64,
}

impl Hamiltonian {
    pub fn new(matrix: ComplexMatrix, beta: f64) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare { rows: matrix.rows(), cols: matrix.cols() });
        }
        let defect = matrix.hermiticity_defect();
        if defect > tol::CONSTRUCTION {
            return Err(Error::NotHermitian { deviation: defect });
        }
        if !beta.is_finite() || beta < 0.0 {
            return Err(Error::InvalidInput(format!("beta must be finite and nonnegative, got {beta}")));
        }
        Ok(Self { matrix: matrix.hermitize(), beta })
    }

    pub fn diagonal(energies: &[f64], beta: f64) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_diagonal(energies), beta)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// ‖[ρ, H]‖_max.
    pub fn commutator_defect(&self, rho: &DensityMatrix) -> f64 {
        let ab = &self.matrix * rho.matrix();
        let ba = rho.matrix() * &self.matrix;
        ab.max_diff(&ba)
    }
}

/// exp(−βH)/Z.
pub fn gibbs_state(h: &Hamiltonian) -> DensityMatrix {
    let (spec, _) = eig_hermitian_unchecked(h.matrix());
    // Shift by the ground energy so the largest weight is exactly 1.
    let ground = spec.values().last().copied().unwrap_or(0.0);
    let beta = h.beta();
    let unnormalized = hermitian_function(h.matrix(), |e| (-beta * (e - ground)).exp());
    let z = unnormalized.trace().re;
    DensityMatrix::new(unnormalized.scale(1.0 / z), vec![h.dim()]).expect("Gibbs state is a valid density matrix")
}

/// S(ρ ‖ γ_β) in bits, where γ_β is the Gibbs state of `h`.
///
/// The free-energy difference follows as F(ρ) − F(γ_β) = kT ln 2 × (returned value).
pub fn free_energy_gap(rho: &DensityMatrix, h: &Hamiltonian) -> Result<f64> {
    if rho.dim() != h.dim() {
        return Err(Error::DimensionMismatch(format!("state dimension {} vs Hamiltonian {}", rho.dim(), h.dim())));
    }
    relative_entropy(rho, &gibbs_state(h))
}
