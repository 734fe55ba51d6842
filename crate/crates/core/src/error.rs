use thiserror::Error;

/// Errors produced by construction and evolution routines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("input is not Hermitian (max |M - M†| = {defect:.3e})")]
    NonHermitianInput { defect: f64 },

    #[error("input is not unitary (max |U†U - 1| = {defect:.3e})")]
    NonUnitaryInput { defect: f64 },

    #[error("environment state is not diagonal (max off-diagonal {defect:.3e})")]
    NonDiagonalEnvironment { defect: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("trace is not one (got {trace})")]
    TraceNotOne { trace: f64 },

    #[error("Kraus set is not trace preserving (max |ΣK†K - 1| = {defect:.3e})")]
    IncompleteKraus { defect: f64 },

    #[error("Kraus list has {len} operators, more than dim² = {max}")]
    KrausListTooLong { len: usize, max: usize },

    #[error("negative time {t}")]
    NegativeTime { t: f64 },

    #[error("time grid is not ascending from zero")]
    GridNotAscending,

    #[error("eigenfrequency target {target} is not above the gap {omega}")]
    InfeasibleTarget { omega: f64, target: f64 },

    #[error("omega must be positive, got {omega}")]
    NonPositiveOmega { omega: f64 },

    #[error("{what} out of domain: {value}")]
    DomainError { what: &'static str, value: f64 },

    #[error("no rescue found (best fidelity {best_fidelity:.6} at t = {at_t:.6})")]
    NoRescueFound { best_fidelity: f64, at_t: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
