#![allow(dead_code)]

use resourceforge::random::{random_probabilities, random_unitary, rng};
use resourceforge::{random_density, ComplexMatrix, DensityMatrix};

/// Random two-qubit state; the rank cycles through 1..=4 with the seed.
pub fn two_qubit(seed: u64) -> DensityMatrix {
    random_density(4, 1 + (seed % 4) as usize, seed).unwrap().with_dims(vec![2, 2]).unwrap()
}

/// Σ p_i |u_i⟩⟨u_i| ⊗ ρ_i with a random basis {u_i} on A and random conditional states.
pub fn random_cq(da: usize, db: usize, seed: u64) -> DensityMatrix {
    let u = random_unitary(da, seed);
    let p = random_probabilities(da, &mut rng(seed ^ 0x5eed));
    let mut m = ComplexMatrix::zeros(da * db, da * db);
    for (i, pi) in p.iter().enumerate() {
        let cond = random_density(db, 1 + (i + seed as usize % db) % db, seed.wrapping_mul(31).wrapping_add(i as u64))
            .unwrap();
        m = &m + &ComplexMatrix::projector(&u.column(i)).kron(cond.matrix()).scale(*pi);
    }
    DensityMatrix::new(m, vec![da, db]).unwrap()
}

/// Σ p_ij |u_i⟩⟨u_i| ⊗ |v_j⟩⟨v_j| with random local bases.
pub fn random_cc(da: usize, db: usize, seed: u64) -> DensityMatrix {
    let u = random_unitary(da, seed);
    let v = random_unitary(db, seed.wrapping_add(7_000));
    let p = random_probabilities(da * db, &mut rng(seed ^ 0xcc));
    let mut m = ComplexMatrix::zeros(da * db, da * db);
    for i in 0..da {
        for j in 0..db {
            let block = ComplexMatrix::projector(&u.column(i)).kron(&ComplexMatrix::projector(&v.column(j)));
            m = &m + &block.scale(p[i * db + j]);
        }
    }
    DensityMatrix::new(m, vec![da, db]).unwrap()
}

/// Random probability vector of length `n` with a random number of trailing zeros.
pub fn random_spectrum(n: usize, seed: u64) -> Vec<f64> {
    let mut r = rng(seed);
    let support = 1 + (seed as usize) % n;
    let mut p = random_probabilities(support, &mut r);
    p.resize(n, 0.0);
    p
}
