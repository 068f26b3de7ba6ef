//! Crate-wide error type.
//!
//! Analysis-level failures (non-sectorial input, branch-cut eigenvalues, unstable
//! systems, ...) are distinguished from format/usage failures (`Format`, `Io`)
//! so the CLI can map them to different exit codes.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("singular tensor: {0}")]
    SingularTensor(String),

    #[error("not sectorial: {0}")]
    NotSectorial(String),

    /// Phase spread reaches a half turn; the canonical branch is not determined.
    #[error("branch spread: {0}")]
    BranchSpread(String),

    /// An eigenvalue sits on the principal-branch cut (-inf, 0].
    #[error("branch cut: {0}")]
    BranchCut(String),

    #[error("not accretive: {0}")]
    NotAccretive(String),

    #[error("not Hermitian: {0}")]
    NotHermitian(String),

    /// Canonical phases leave [0, pi), where half-phase truncation is defined.
    #[error("not in sector [0, pi): {0}")]
    NotInSector(String),

    #[error("quadrature did not converge: {0}")]
    QuadratureNotConverged(String),

    #[error("rank out of range: {0}")]
    RankOutOfRange(String),

    #[error("pole at evaluation frequency: {0}")]
    PoleAtFrequency(String),

    #[error("unstable: {0}")]
    Unstable(String),

    #[error("ill-posed interconnection: {0}")]
    IllPosed(String),

    #[error("sector assumption violated: {0}")]
    SectorAssumptionViolated(String),

    /// An iterative kernel (Schur, quadrature bracket, ...) failed to converge.
    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by malformed input files or arguments rather
    /// than by the mathematics of the analysis.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Format(_) | Error::Io(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
