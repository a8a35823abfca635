use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("under-resolved grid: {0}")]
    UnderResolved(String),

    #[error("root finder did not converge for {points}-point Gauss-Hermite rule")]
    NonConvergence { points: usize },

    #[error("STFT does not decay at the lattice boundary (relative {relative:.3e} > {tolerance:.1e}); increase the extent")]
    BoundaryDecay { relative: f64, tolerance: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("kernel transform is singular at zero frequency")]
    SingularFrequency,

    #[error("exponents out of range: {0}")]
    ExponentRange(String),

    #[error("fixed-point iteration is not contracting (ratios {ratios:?}); shorten the horizon")]
    NonContraction { ratios: Vec<f64> },

    #[error("monitor breach at t = {t}: {reason}")]
    MonitorBreach { t: f64, reason: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("malformed file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
