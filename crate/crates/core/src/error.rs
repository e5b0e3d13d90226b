use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("excitation count {excitations} out of range for {sites} sites with local dimension {local_dim}")]
    ExcitationsOutOfRange {
        excitations: usize,
        sites: usize,
        local_dim: u8,
    },
    #[error("operation requires local dimension {required}, basis has {actual}")]
    LocalDimMismatch { required: u8, actual: u8 },
    #[error("dimension mismatch: operator is {operator}, state is {state}")]
    DimensionMismatch { operator: usize, state: usize },
    #[error("coupling list `{name}` has length {actual}, expected {expected}")]
    CouplingLength {
        name: &'static str,
        actual: usize,
        expected: usize,
    },
    #[error("scar index n={n} outside valid range {min}..={max}")]
    ScarIndexOutOfRange { n: usize, min: usize, max: usize },
    #[error("qubit index {index} out of range for {sites} sites")]
    QubitOutOfRange { index: usize, sites: usize },
    #[error("duplicate qubit index {index} in subsystem")]
    DuplicateQubit { index: usize },
    #[error("sector dimension {dim} exceeds cap {cap}; split the sector by the conserved charge first")]
    SectorCapExceeded { dim: usize, cap: usize },
    #[error("state is not a computational product state (needed for an imbalance reference)")]
    NotProductState,
    #[error("malformed Fock string `{input}`: {reason}")]
    MalformedFock { input: String, reason: String },
    #[error("state `{name}` requires at least {min} rungs, got {actual}")]
    TooFewRungs {
        name: &'static str,
        min: usize,
        actual: usize,
    },
    #[error("zero-norm state")]
    ZeroState,
    #[error("time grid must be non-negative and strictly increasing")]
    BadTimeGrid,
    #[error("Krylov propagator could not reach tolerance {tolerance} (best residual {best})")]
    KrylovToleranceUnreachable { tolerance: f64, best: f64 },
    #[error("density matrix has eigenvalue {value} below the PSD floor")]
    NotPositiveSemidefinite { value: f64 },
    #[error("non-uniform time grid (max deviation {max_dev})")]
    NonUniformGrid { max_dev: f64 },
    #[error("need at least {min} samples, got {actual}")]
    TooFewSamples { min: usize, actual: usize },
    #[error("uniform bounds invalid: low {low} > high {high}")]
    InvalidBounds { low: f64, high: f64 },
    #[error("device table `{path}`: {reason}")]
    DeviceTable { path: String, reason: String },
    #[error("eigendecomposition failed: {0}")]
    Eigen(String),
}

pub type Result<T> = std::result::Result<T, Error>;
