//! Resource-theory quantities for finite-dimensional quantum states.
//!
//! The crate covers von Neumann and relative entropies, Gibbs states,
//! projective-measurement based quantumness measures (discord and one- and
//! zero-way deficits, with their relative-entropy characterizations),
//! majorization and conversion rates, and a simulator for local-purity
//! protocols built from local unitaries, maximally mixed ancillas, partial
//! traces and dephasing channels.
//!
//! Entropies are reported in bits throughout.

pub mod entropy;
pub mod error;
pub mod io;
pub mod linalg;
pub mod measurement;
pub mod monotones;
pub mod optimize;
#[cfg(feature = "oracles")]
pub mod oracles;
pub mod protocol;
pub mod quantumness;
pub mod random;
pub mod state;
pub mod states;
pub mod tol;

pub use entropy::{
    free_energy_gap, gibbs_state, mutual_information, negentropy, relative_entropy, vn_entropy, Hamiltonian,
};
pub use error::{Error, Result};
pub use linalg::{eig_hermitian, ComplexMatrix, Spectrum};
pub use measurement::{
    dephasing_channel, measure_both, measure_local, measurement_from_params, MeasurementParams, ProjectiveMeasurement,
};
pub use monotones::{conversion_rate, majorizes, purity_rate, single_shot_noisy_transition, thermo_rate, RateResult};
pub use num_complex::Complex64;
pub use optimize::OptimizerConfig;
pub use protocol::{
    apply_step, deficit_bound, extracted_local_purity, run_protocol, Mode, ProtocolScript, ProtocolStep, Register, Side,
};
pub use quantumness::{
    deficit_one_way, deficit_one_way_fixed, deficit_zero_way, discord, discord_fixed, discord_zero_way,
    generalized_deficit, multicopy_deficit, relent_to_cc, relent_to_cq, MeasurementChoice, QuantumnessResult,
};
pub use random::random_density;
pub use state::{embed, partial_trace, tensor, validate, DensityMatrix, Isometry};
