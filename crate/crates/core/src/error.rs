use thiserror::Error;

/// Errors raised by state construction and the resource-theory operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },
    #[error("trace is {trace} rather than 1")]
    NotUnitTrace { trace: f64 },
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPSD { min_eigenvalue: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("dimension {dim} exceeds the cap of {cap}")]
    DimensionTooLarge { dim: usize, cap: usize },
    #[error("partial trace needs at least one subsystem to keep")]
    EmptyKeepSet,
    #[error("index {index} out of range for {len} subsystems")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("rank {rank} outside 1..={dim}")]
    RankOutOfRange { rank: usize, dim: usize },
    #[error("expected a bipartite state, found {0} subsystems")]
    NotBipartite(usize),
    #[error("expected {expected} parameters, found {found}")]
    ParamCountMismatch { expected: usize, found: usize },
    #[error("subsystem {index} has dimension {dim}, not 2")]
    NotAQubit { index: usize, dim: usize },
    #[error("subsystem A has dimension {0}, not 2")]
    NotAQubitOnA(usize),
    #[error("matrix is not unitary (max deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },
    #[error("matrix is not an isometry (max deviation {deviation:.3e})")]
    NotIsometry { deviation: f64 },
    #[error("spectra sums differ: {0} vs {1}")]
    UnequalSums(f64, f64),
    #[error("conversion between two free states is undefined")]
    BothZero,
    #[error("state does not commute with the Hamiltonian (max deviation {deviation:.3e})")]
    NonCommuting { deviation: f64 },
    #[error("step not allowed in {mode} mode: {step}")]
    IllegalStepForMode { mode: String, step: String },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("step {index}: {source}")]
    Step {
        index: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Stable identifier of the error kind, as printed by the CLI.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NotSquare { .. } => "NotSquare",
            Error::NonFinite { .. } => "NonFinite",
            Error::NotHermitian { .. } => "NotHermitian",
            Error::NotUnitTrace { .. } => "NotUnitTrace",
            Error::NotPSD { .. } => "NotPSD",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::DimensionTooLarge { .. } => "DimensionTooLarge",
            Error::EmptyKeepSet => "EmptyKeepSet",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::RankOutOfRange { .. } => "RankOutOfRange",
            Error::NotBipartite(_) => "NotBipartite",
            Error::ParamCountMismatch { .. } => "ParamCountMismatch",
            Error::NotAQubit { .. } => "NotAQubit",
            Error::NotAQubitOnA(_) => "NotAQubitOnA",
            Error::NotUnitary { .. } => "NotUnitary",
            Error::NotIsometry { .. } => "NotIsometry",
            Error::UnequalSums(..) => "UnequalSums",
            Error::BothZero => "BothZero",
            Error::NonCommuting { .. } => "NonCommuting",
            Error::IllegalStepForMode { .. } => "IllegalStepForMode",
            Error::InvalidInput(_) => "InvalidInput",
            Error::Step { source, .. } => source.name(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
