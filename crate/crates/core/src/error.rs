use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid configuration: {field}: {reason}")]
    InvalidConfig { field: String, reason: String },

    #[error("site index {site} out of range for {n_spins} spin(s)")]
    SiteOutOfRange { site: usize, n_spins: usize },

    #[error("operator has dimension {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("steady state is not unique: {count} singular values below {threshold:e}")]
    DegenerateSteadyState { count: usize, threshold: f64 },

    #[error("perturbation order {order}: right-hand side leaves the dissipator range (residual {residual:e})")]
    RhsNotInRange { order: usize, residual: f64 },

    #[error("coefficient design matrix is ill-conditioned (condition number {condition:e})")]
    IllConditioned { condition: f64 },

    #[error("correlation undefined: variance {variance:e} below threshold")]
    UndefinedCorrelation { variance: f64 },

    #[error("no sign change of the target in [{lower}, {upper}]")]
    NoSignChange { lower: f64, upper: f64 },

    #[error("unsupported spin quantum number 2S = {twice_spin}")]
    UnsupportedSpin { twice_spin: u32 },

    #[error("unsupported number of spins: {0}")]
    UnsupportedSpinCount(usize),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("numerical decomposition failed: {0}")]
    Decomposition(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
