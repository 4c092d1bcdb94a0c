//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("operator is not unitary (‖U†U − I‖_F = {residual:.3e})")]
    NonUnitary { residual: f64 },

    #[error("operator is not hermitian (‖H − H†‖_F = {residual:.3e})")]
    NonHermitian { residual: f64 },

    #[error("operator is not a projector (‖P² − P‖_F = {residual:.3e})")]
    NonProjector { residual: f64 },

    #[error("subsystem index {index} out of range (state has {count} subsystems)")]
    IndexOutOfRange { index: usize, count: usize },

    #[error("Jacobi iteration did not converge within {0} sweeps")]
    NoConvergence(usize),

    #[error("rotation does not act within a single degeneracy group: {0}")]
    NotDegenerate(String),

    #[error("zero vector")]
    ZeroVector,

    #[error("apparatus dimension {dim} is smaller than branch count {branches}")]
    DimensionTooSmall { dim: usize, branches: usize },

    #[error("branch kick is not unitary (‖U†U − I‖_F = {residual:.3e})")]
    NonUnitaryKick { residual: f64 },

    #[error("momentum kick δ = {delta} risks aliasing: {reason}")]
    AliasRisk { delta: f64, reason: String },

    #[error("decoherence factor needs exactly 2 branches, got {0}")]
    BranchCountUnsupported(usize),

    #[error("canonical decomposition does not reconstruct the state (residual {residual:.3e})")]
    InvalidCanonical { residual: f64 },

    #[error("invalid `{field}`: {reason}")]
    InvalidConfig { field: String, reason: String },

    #[error("io failure: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid_config(field: &str, reason: impl Into<String>) -> Self {
        Error::InvalidConfig {
            field: field.to_string(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
