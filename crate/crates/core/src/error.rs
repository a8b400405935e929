use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid bipartition k = {k} for N = {n} (need 1 <= k <= floor(N/2))")]
    InvalidBipartition { n: u32, k: u32 },

    #[error("invalid Dicke label {label:?} for N = {n}, d = {d}")]
    InvalidLabel { n: u32, d: u32, label: Vec<u32> },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("probability {0} outside [0, 1]")]
    ProbabilityOutOfRange(f64),

    #[error("state is not normalized (norm deviates by {0:e})")]
    NotNormalized(f64),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("eigensolver did not converge on a block of size {0}")]
    NoConvergence(usize),

    #[error("eigenpair residual {residual:e} exceeds tolerance {tolerance:e}")]
    Residual { residual: f64, tolerance: f64 },

    #[error("operation is defined for qubits only (got d = {0})")]
    QubitOnly(u32),

    #[error("bipartite dimension {dim} exceeds the cap of {cap}")]
    SizeCap { dim: usize, cap: usize },

    #[error("unknown witness `{0}` (expected W5, W7 or W9)")]
    UnknownWitness(String),

    #[error("invalid witness: {0}")]
    InvalidWitness(String),

    #[error("detection threshold is undefined: Tr(rho(p) W) does not depend on p")]
    DegenerateThreshold,

    #[error("cannot parse `{0}` as a rational number")]
    ParseRational(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
