use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("quadrature did not converge within {panels} panels")]
    QuadratureNonConvergence { panels: usize },

    #[error("root is not bracketed: f({lo}) = {f_lo}, f({hi}) = {f_hi}")]
    InvalidBracket {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("eigendecomposition failed: {0}")]
    Eigendecomposition(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("unknown jump channel (source {source_component}, label {label})")]
    UnknownChannel {
        source_component: usize,
        label: usize,
    },

    #[error("jump requested on a channel with zero rate")]
    ZeroRateJump,

    #[error("drift step rejected at t = {time}: {reason}")]
    StepRejected { time: f64, reason: String },

    #[error("step size underflow: no convergence after {halvings} halvings")]
    StepUnderflow { halvings: u32 },

    #[error("trajectory {index}: {source}")]
    Trajectory {
        index: u64,
        #[source]
        source: Box<Error>,
    },
}
