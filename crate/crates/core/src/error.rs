use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("anisotropic Rabi model requires lambda != mu")]
    EqualCouplings,

    #[error("isotropic Rabi limit (lambda == mu): squeezing parameter diverges")]
    IsotropicSingularLimit,

    #[error("factorizable model requires |alpha_Q| != |alpha_R|")]
    DegenerateCouplings,

    #[error("factorized and explicit Hamiltonians disagree (max defect {residual:e})")]
    FactorizationMismatch { residual: f64 },

    #[error("operator dimensions differ: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("excitation number must be >= 1, got {0}")]
    InvalidN(usize),

    #[error("mixing angle undefined for zero detuning and zero coupling")]
    DegenerateAngle,

    #[error("invalid dressed label: {0}")]
    InvalidLabel(String),

    #[error("truncation n_max = {n_max} cannot hold excitation number {needed}")]
    TruncationTooSmall { n_max: usize, needed: usize },

    #[error("matrix is not Hermitian (max defect {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("no truncation certificate: spectrum was not produced by certify_truncation")]
    NotConverged,

    #[error("lowest levels did not converge up to n_max = {n_max}")]
    NoConvergence { n_max: usize },

    #[error("displaced state leaks {leakage:e} past the truncation edge")]
    SupportExceeded { leakage: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
