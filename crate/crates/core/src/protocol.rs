//! Local-purity protocols on a two-party register.
//!
//! Two operation classes are modeled. CLOCC allows local unitaries, local
//! partial traces and sending qubits through a dephasing channel; NLOCC
//! additionally lets either party append maximally mixed ancillas. Every
//! primitive is unital or a partial trace, so neither class can create
//! purity from nothing.
//!
//! Subsystems carry an owner label. Step indices (`subsystem`, `qubit`) count
//! only the subsystems owned by the acting party, in register order. Ancillas
//! added by A go in front of the register and those added by B go at the end.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::entropy::vn_entropy;
use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian_unchecked, ComplexMatrix};
use crate::measurement::dephasing_channel;
use crate::state::{apply_local_unitary, check_cap, kron_vectors, max_dim, partial_trace, tensor, DensityMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Self {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    #[serde(rename = "CLOCC")]
    Clocc,
    #[serde(rename = "NLOCC")]
    Nlocc,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Clocc => "CLOCC",
            Mode::Nlocc => "NLOCC",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op")]
pub enum ProtocolStep {
    /// A unitary on the joint space of everything `side` owns.
    LocalUnitary { side: Side, matrix: ComplexMatrix },
    /// Appends I/dim owned by `side` (NLOCC only).
    AddMaxMixedAncilla { side: Side, dim: usize },
    /// Discards the `subsystem`-th subsystem owned by `side`.
    LocalPartialTrace { side: Side, subsystem: usize },
    /// Dephases the `qubit`-th subsystem owned by `from` and hands it to the other party.
    SendQubit { from: Side, qubit: usize },
}

impl ProtocolStep {
    fn label(&self) -> String {
        match self {
            ProtocolStep::LocalUnitary { side, .. } => format!("LocalUnitary({side})"),
            ProtocolStep::AddMaxMixedAncilla { side, dim } => format!("AddMaxMixedAncilla({side}, {dim})"),
            ProtocolStep::LocalPartialTrace { side, subsystem } => format!("LocalPartialTrace({side}, {subsystem})"),
            ProtocolStep::SendQubit { from, qubit } => format!("SendQubit({from}, {qubit})"),
        }
    }

    fn allowed_in(&self, mode: Mode) -> bool {
        !matches!((self, mode), (ProtocolStep::AddMaxMixedAncilla { .. }, Mode::Clocc))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolScript {
    pub mode: Mode,
    pub steps: Vec<ProtocolStep>,
}

impl ProtocolScript {
    pub fn new(mode: Mode, steps: Vec<ProtocolStep>) -> Result<Self> {
        let script = Self { mode, steps };
        script.check_mode()?;
        Ok(script)
    }

    /// Fails on the first step the mode does not allow.
    pub fn check_mode(&self) -> Result<()> {
        for (index, step) in self.steps.iter().enumerate() {
            if !step.allowed_in(self.mode) {
                return Err(Error::Step { index, source: Box::new(illegal(self.mode, step)) });
            }
        }
        Ok(())
    }
}

fn illegal(mode: Mode, step: &ProtocolStep) -> Error {
    Error::IllegalStepForMode { mode: mode.to_string(), step: step.label() }
}

/// A state together with the owner of each subsystem.
#[derive(Debug, Clone, PartialEq)]
pub struct Register {
    state: DensityMatrix,
    owners: Vec<Side>,
}

impl Register {
    pub fn new(state: DensityMatrix, owners: Vec<Side>) -> Result<Self> {
        if owners.len() != state.num_subsystems() {
            return Err(Error::DimensionMismatch(format!(
                "{} owner labels for {} subsystems",
                owners.len(),
                state.num_subsystems()
            )));
        }
        Ok(Self { state, owners })
    }

    /// A two-subsystem state with A owning the first factor.
    pub fn bipartite(state: DensityMatrix) -> Result<Self> {
        state.bipartite_dims()?;
        Self::new(state, vec![Side::A, Side::B])
    }

    pub fn state(&self) -> &DensityMatrix {
        &self.state
    }

    pub fn owners(&self) -> &[Side] {
        &self.owners
    }

    /// Register indices of the subsystems owned by `side`.
    pub fn owned_by(&self, side: Side) -> Vec<usize> {
        (0..self.owners.len()).filter(|&k| self.owners[k] == side).collect()
    }

    fn resolve(&self, side: Side, local: usize) -> Result<usize> {
        let owned = self.owned_by(side);
        owned.get(local).copied().ok_or(Error::IndexOutOfRange { index: local, len: owned.len() })
    }

    /// log2 of the total dimension.
    pub fn total_qubits(&self) -> f64 {
        (self.state.dim() as f64).log2()
    }
}

/// Applies one primitive.
pub fn apply_step(r: &Register, step: &ProtocolStep, mode: Mode) -> Result<Register> {
    if !step.allowed_in(mode) {
        return Err(illegal(mode, step));
    }
    match step {
        ProtocolStep::LocalUnitary { side, matrix } => {
            let targets = r.owned_by(*side);
            if targets.is_empty() {
                return Err(Error::DimensionMismatch(format!("party {side} owns no subsystems")));
            }
            let state = apply_local_unitary(&r.state, matrix, &targets)?;
            Ok(Register { state, owners: r.owners.clone() })
        }
        ProtocolStep::AddMaxMixedAncilla { side, dim } => {
            if *dim < 2 {
                return Err(Error::InvalidInput(format!("ancilla dimension must be at least 2, got {dim}")));
            }
            check_cap(r.state.dim() * dim, max_dim())?;
            let ancilla = DensityMatrix::maximally_mixed(vec![*dim]);
            let mut owners = r.owners.clone();
            let state = match side {
                Side::A => {
                    owners.insert(0, Side::A);
                    tensor(&ancilla, &r.state)?
                }
                Side::B => {
                    owners.push(Side::B);
                    tensor(&r.state, &ancilla)?
                }
            };
            Ok(Register { state, owners })
        }
        ProtocolStep::LocalPartialTrace { side, subsystem } => {
            let target = r.resolve(*side, *subsystem)?;
            let keep: Vec<usize> = (0..r.owners.len()).filter(|&k| k != target).collect();
            let state = partial_trace(&r.state, &keep)?;
            let owners = keep.iter().map(|&k| r.owners[k]).collect();
            Ok(Register { state, owners })
        }
        ProtocolStep::SendQubit { from, qubit } => {
            let target = r.resolve(*from, *qubit)?;
            let state = dephasing_channel(&r.state, target)?;
            let mut owners = r.owners.clone();
            owners[target] = from.other();
            Ok(Register { state, owners })
        }
    }
}

/// Applies the steps left to right. Errors carry the failing step's index.
pub fn run_protocol(r: &Register, script: &ProtocolScript) -> Result<Register> {
    script.steps.iter().enumerate().try_fold(r.clone(), |reg, (index, step)| {
        apply_step(&reg, step, script.mode).map_err(|e| Error::Step { index, source: Box::new(e) })
    })
}

/// How qubit subsets are chosen when counting extractable purity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Counting {
    /// Take qubits in order of decreasing single-qubit purity.
    #[default]
    Greedy,
    /// Try every subset; registers with at most [`EXHAUSTIVE_MAX_QUBITS`] qubits.
    Exhaustive,
}

pub const EXHAUSTIVE_MAX_QUBITS: usize = 4;

struct QubitCandidate {
    index: usize,
    purity: f64,
    top: Vec<Complex64>,
}

fn qubit_candidates(r: &Register) -> Result<Vec<QubitCandidate>> {
    let mut out = Vec::new();
    for (index, &d) in r.state.dims().iter().enumerate() {
        if d != 2 {
            continue;
        }
        let reduced = partial_trace(&r.state, &[index])?;
        let (spec, vecs) = eig_hermitian_unchecked(reduced.matrix());
        out.push(QubitCandidate { index, purity: spec.values()[0], top: vecs.column(0) });
    }
    Ok(out)
}

/// ⟨ψ|ρ_S|ψ⟩ for ψ the product of the chosen qubits' top eigenvectors.
fn product_fidelity(r: &Register, chosen: &[&QubitCandidate]) -> Result<f64> {
    let mut sorted: Vec<&QubitCandidate> = chosen.to_vec();
    sorted.sort_by_key(|c| c.index);
    let keep: Vec<usize> = sorted.iter().map(|c| c.index).collect();
    let reduced = partial_trace(&r.state, &keep)?;
    let psi = kron_vectors(&sorted.iter().map(|c| c.top.clone()).collect::<Vec<_>>());
    let proj = ComplexMatrix::projector(&psi);
    Ok((&proj * reduced.matrix()).trace().re)
}

/// Number of qubit subsystems jointly within fidelity `1 − epsilon` of a pure product state.
///
/// This is a one-shot counting proxy for the local purity a protocol has
/// produced, not an asymptotic rate. The candidate product state uses each
/// qubit's top eigenvector.
pub fn extracted_local_purity(r: &Register, epsilon: f64) -> Result<usize> {
    extracted_local_purity_with(r, epsilon, Counting::Greedy)
}

pub fn extracted_local_purity_with(r: &Register, epsilon: f64, counting: Counting) -> Result<usize> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidInput(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    let mut cands = qubit_candidates(r)?;
    cands.sort_by(|a, b| b.purity.total_cmp(&a.purity).then(a.index.cmp(&b.index)));
    let threshold = 1.0 - epsilon;
    match counting {
        Counting::Greedy => {
            let mut count = 0;
            for m in 1..=cands.len() {
                let chosen: Vec<&QubitCandidate> = cands[..m].iter().collect();
                if product_fidelity(r, &chosen)? >= threshold {
                    count = m;
                } else {
                    break;
                }
            }
            Ok(count)
        }
        Counting::Exhaustive => {
            let n = cands.len();
            if n > EXHAUSTIVE_MAX_QUBITS {
                return Err(Error::InvalidInput(format!(
                    "exhaustive counting supports at most {EXHAUSTIVE_MAX_QUBITS} qubits, register has {n}"
                )));
            }
            let mut best = 0;
            for mask in 1u32..(1 << n) {
                let m = mask.count_ones() as usize;
                if m <= best {
                    continue;
                }
                let chosen: Vec<&QubitCandidate> = (0..n).filter(|k| mask & (1 << k) != 0).map(|k| &cands[k]).collect();
                if product_fidelity(r, &chosen)? >= threshold {
                    best = m;
                }
            }
            Ok(best)
        }
    }
}

/// N − S(ρ) − (pure qubits extracted by `script`), for a CLOCC script on a
/// two-party state. N is log2 of the total dimension.
pub fn deficit_bound(rho: &DensityMatrix, script: &ProtocolScript, epsilon: f64) -> Result<f64> {
    deficit_bound_for(&Register::bipartite(rho.clone())?, script, epsilon)
}

/// [`deficit_bound`] for a register with an arbitrary ownership layout.
pub fn deficit_bound_for(r: &Register, script: &ProtocolScript, epsilon: f64) -> Result<f64> {
    if script.mode != Mode::Clocc {
        return Err(Error::IllegalStepForMode {
            mode: script.mode.to_string(),
            step: "deficit bounds are defined for CLOCC scripts".into(),
        });
    }
    let out = run_protocol(r, script)?;
    let count = extracted_local_purity(&out, epsilon)?;
    Ok(r.total_qubits() - vn_entropy(&r.state) - count as f64)
}
