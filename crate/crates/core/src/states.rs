//! Frequently used two-party states.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::linalg::{ComplexMatrix, ONE, ZERO};
use crate::state::DensityMatrix;

/// (|00⟩ + |11⟩)/√2.
pub fn bell() -> DensityMatrix {
    let a = Complex64::new(FRAC_1_SQRT_2, 0.0);
    DensityMatrix::pure(&[a, ZERO, ZERO, a], vec![2, 2]).expect("Bell state is valid")
}

/// p |ψ⁻⟩⟨ψ⁻| + (1 − p) I/4.
pub fn werner(p: f64) -> DensityMatrix {
    let a = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let singlet = ComplexMatrix::projector(&[ZERO, a, -a, ZERO]);
    let mixed = ComplexMatrix::identity(4).scale(0.25);
    DensityMatrix::new(&singlet.scale(p) + &mixed.scale(1.0 - p), vec![2, 2]).expect("0 <= p <= 1")
}

/// √p0 |00⟩ + √p1 |11⟩ (+ …): a pure state with the given Schmidt weights.
pub fn schmidt(weights: &[f64]) -> DensityMatrix {
    let d = weights.len();
    let mut amps = vec![ZERO; d * d];
    for (k, w) in weights.iter().enumerate() {
        amps[k * d + k] = Complex64::new(w.sqrt(), 0.0);
    }
    DensityMatrix::pure(&amps, vec![d, d]).expect("nonzero weights")
}

/// ½(|00⟩⟨00| + |11⟩⟨11|).
pub fn classically_correlated() -> DensityMatrix {
    DensityMatrix::diagonal(&[0.5, 0.0, 0.0, 0.5], vec![2, 2]).expect("valid")
}

/// |+⟩ on a qubit.
pub fn plus() -> DensityMatrix {
    let a = Complex64::new(FRAC_1_SQRT_2, 0.0);
    DensityMatrix::pure(&[a, a], vec![2]).expect("valid")
}

/// CNOT with the first qubit as control.
pub fn cnot() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(4, 4);
    m.set(0, 0, ONE);
    m.set(1, 1, ONE);
    m.set(2, 3, ONE);
    m.set(3, 2, ONE);
    m
}

/// Hadamard gate.
pub fn hadamard() -> ComplexMatrix {
    let a = Complex64::new(FRAC_1_SQRT_2, 0.0);
    ComplexMatrix::from_rows(&[vec![a, a], vec![a, -a]]).expect("finite")
}
