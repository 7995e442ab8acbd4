use thiserror::Error;

/// Errors raised by the regularisation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid mass {value} at position {index}: masses must be finite and strictly positive")]
    InvalidMass { index: usize, value: f64 },

    #[error("degenerate ladder: masses {first} and {second} are not separated (relative gap {gap:e})")]
    DegenerateLadder { first: f64, second: f64, gap: f64 },

    #[error("evaluation point {re}{im:+}i lies within the guard distance of the pole at {pole}")]
    PoleProximity { re: f64, im: f64, pole: f64 },

    #[error("index {index} out of range for a ladder with N = {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("index order violated: expected K < L, got K = {k}, L = {l}")]
    IndexOrder { k: usize, l: usize },

    #[error("adaptive quadrature did not converge after {intervals} intervals (error estimate {error:e})")]
    QuadratureFailure { intervals: usize, error: f64 },

    #[error("integration step {step} exceeds the limit {limit}")]
    StepTooLarge { step: f64, limit: f64 },

    #[error("independent evaluations disagree: {what} (difference {diff:e}, tolerance {tol:e})")]
    OracleMismatch { what: &'static str, diff: f64, tol: f64 },

    #[error("commutator is not a multiple of the identity (deviation {deviation:e})")]
    NonScalarCommutator { deviation: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("the unregularised Feynman contraction is undefined at tau = 0")]
    TauZeroUndefined,

    #[error("diagram '{0}' has no internal fermion lines; regulators cannot act on it")]
    NoFermionLines(String),

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
