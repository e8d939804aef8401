use thiserror::Error;

/// Errors raised by the numerical routines and the harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (asymmetry {0:.3e})")]
    NotHermitian(f64),

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:.3e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("negative eigenvalue {0:.3e} for a function that requires a PSD argument")]
    NegativeEigenvalue(f64),

    #[error("matrix is not positive semi-definite (min eigenvalue {0:.3e})")]
    NotPsd(f64),

    #[error("trace is not one (got {0})")]
    TraceNotOne(f64),

    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    #[error("partial trace must keep at least one subsystem")]
    EmptyKeep,

    #[error("S is singular (min eigenvalue {0:.3e})")]
    SingularS(f64),

    #[error("input must be full rank: {0}")]
    SingularInput(String),

    #[error("sigma must be full rank (rank {rank} of {dim})")]
    SingularSigma { rank: usize, dim: usize },

    #[error("logarithm of a singular operator: {0}")]
    SupportViolation(String),

    #[error("Markov block {block}: {detail}")]
    BlockDimMismatch { block: usize, detail: String },

    #[error("block weights do not form a probability distribution (sum {0})")]
    WeightsNotNormalized(f64),

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("not a probability distribution: {0}")]
    NotDistribution(String),

    #[error("Kraus operators are not trace preserving (deviation {0:.3e})")]
    NotTracePreserving(f64),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid field `{field}`: {source}")]
    Validation {
        field: String,
        #[source]
        source: Box<Error>,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{inequality} violated by {amount:.3e} at sample {sample}; state written to {artifact}")]
    Violation {
        inequality: String,
        amount: f64,
        sample: usize,
        artifact: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
