use thiserror::Error;

/// Errors raised by the toolkit.
///
/// Variants fall into three classes that map onto process exit codes
/// (see [`Error::exit_code`]): input validation, failed numerical checks and
/// iterative procedures that did not converge.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension {0} outside the supported range 2..=8")]
    Dimension(usize),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("expected {expected} entries, got {got}")]
    EntryCount { expected: usize, got: usize },

    #[error("non-finite entry at ({0}, {1})")]
    NonFinite(usize, usize),

    #[error("matrix is not Hermitian: entry ({row}, {col}) deviates by {deviation:.3e}")]
    NotHermitian { row: usize, col: usize, deviation: f64 },

    #[error("trace is {0}, expected 1")]
    Trace(f64),

    #[error("matrix is not positive semidefinite (minimum eigenvalue {0:.3e})")]
    NotPositive(f64),

    #[error("matrix is not unitary (max |U†U - I| = {0:.3e})")]
    NotUnitary(f64),

    #[error("invalid permutation {0:?}")]
    Permutation(Vec<usize>),

    #[error("alpha = {value} outside ({lower}, 1] for dimension {dim}")]
    Alpha { value: f64, lower: f64, dim: usize },

    #[error("frame does not diagonalize the state (off-diagonal mass {0:.3e})")]
    FrameMismatch(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal {off:.3e})")]
    EigenConvergence { sweeps: usize, off: f64 },

    #[error("frame tracking lost continuity at t = {t} (overlap {overlap:.3})")]
    FrameTracking { t: f64, overlap: f64 },

    #[error("negative radicand {0:.3e} in {1}")]
    NegativeRadicand(f64, &'static str),

    #[error("non-finite sample at t = {0}")]
    NonFiniteSample(f64),

    #[error("inconsistent trajectory: {0}")]
    InconsistentTrajectory(String),

    #[error("bound undefined: {0}")]
    UndefinedBound(String),

    #[error("quadrature did not converge (estimate {estimate}, error {error:.3e})")]
    Quadrature { estimate: f64, error: f64 },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("check failed: {0}")]
    CheckFailed(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code for this error: 1 validation, 2 check failure,
    /// 3 convergence failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::EigenConvergence { .. } | Error::Quadrature { .. } => 3,
            Error::CheckFailed(_)
            | Error::NegativeRadicand(..)
            | Error::InconsistentTrajectory(_)
            | Error::FrameTracking { .. } => 2,
            _ => 1,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
