use std::path::PathBuf;

use thiserror::Error;

/// CLI failures, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] susyjc_core::Error),

    #[error("consistency check failed: {0}")]
    Consistency(String),

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    /// 2 usage, 3 convergence failure, 4 internal consistency failure, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        use susyjc_core::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Consistency(_) => 4,
            CliError::Io { .. } => 1,
            CliError::Core(e) => match e {
                E::NoConvergence { .. } | E::NotConverged => 3,
                E::FactorizationMismatch { .. } | E::NotHermitian { .. } => 4,
                E::InvalidParameter(_)
                | E::EqualCouplings
                | E::IsotropicSingularLimit
                | E::DegenerateCouplings
                | E::InvalidN(_)
                | E::DegenerateAngle
                | E::InvalidLabel(_)
                | E::TruncationTooSmall { .. }
                | E::SupportExceeded { .. } => 2,
                E::DimensionMismatch { .. } => 4,
            },
        }
    }
}
