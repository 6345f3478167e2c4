use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (max asymmetry {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semi-definite (min eigenvalue {0:.3e})")]
    NotPsd(f64),

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off:.3e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("dimension {0} exceeds the configured cap {1}")]
    DimensionOverflow(usize, usize),

    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    #[error("bad dimensions: {0}")]
    BadDims(String),

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("invalid test channel: {0}")]
    InvalidChannel(String),

    #[error("enumeration size {0:.3e} exceeds cap {1:.3e}")]
    CapExceeded(f64, f64),

    #[error("monte carlo mode needs at least {min} trials, got {got}")]
    InsufficientTrials { got: usize, min: usize },

    #[error("invalid input in `{field}`: {msg}")]
    Input { field: String, msg: String },

    #[error("{path}: {msg}")]
    Io { path: String, msg: String },

    #[error("recomputed rates ({got_r1}, {got_r2}) differ from claimed ({r1}, {r2}) by {diff:.3e}")]
    RateMismatch {
        r1: f64,
        r2: f64,
        got_r1: f64,
        got_r2: f64,
        diff: f64,
    },
}

impl Error {
    /// Stable variant name, used for diagnostics and exit reporting.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NotHermitian(_) => "NotHermitian",
            Error::NotPsd(_) => "NotPSD",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::DimensionOverflow(..) => "DimensionOverflow",
            Error::DimMismatch(_) => "DimMismatch",
            Error::BadDims(_) => "BadDims",
            Error::NonFinite => "NonFinite",
            Error::InvalidState(_) => "InvalidState",
            Error::InvalidPovm(_) => "InvalidPovm",
            Error::InvalidDistribution(_) => "InvalidDistribution",
            Error::InvalidEnsemble(_) => "InvalidEnsemble",
            Error::InvalidChannel(_) => "InvalidChannel",
            Error::CapExceeded(..) => "CapExceeded",
            Error::InsufficientTrials { .. } => "InsufficientTrials",
            Error::Input { .. } => "Input",
            Error::Io { .. } => "Io",
            Error::RateMismatch { .. } => "RateMismatch",
        }
    }

    /// Errors caused by the caller's input rather than by the numerics.
    pub fn is_input(&self) -> bool {
        matches!(self, Error::Input { .. } | Error::Io { .. })
    }

    pub(crate) fn input(field: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Input {
            field: field.into(),
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
