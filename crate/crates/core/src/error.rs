use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("cutoff must be at least 1, got {0}")]
    InvalidCutoff(usize),
    #[error("operands live on different bases (cutoff {left} vs {right})")]
    BasisMismatch { left: usize, right: usize },
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("invalid quantum numbers N={n}, m={m}: {reason}")]
    InvalidQuantumNumbers { n: u32, m: i32, reason: &'static str },
    #[error("state (n_a={na}, n_b={nb}) exceeds cutoff {cutoff}")]
    OutOfCutoff { na: u32, nb: u32, cutoff: usize },
    #[error("representation label out of range: {0}")]
    OutOfRange(String),
    #[error("coupling must satisfy 0 <= lambda < omega (omega={omega}, lambda={lambda})")]
    CouplingTooStrong { omega: f64, lambda: f64 },
    #[error("invalid model parameter: {0}")]
    InvalidParameter(String),
    #[error("coherent-state series did not converge within {max_s} terms (tail estimate {tail:e})")]
    NonConvergent { max_s: usize, tail: f64 },
    #[error("no closed-form similarity transformation for {0}")]
    UnsupportedLabel(String),
    #[error("truncation leakage {leakage:e} exceeds {threshold:e}")]
    Leakage { leakage: f64, threshold: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
