use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid ring: N={n}, m={m} (need N >= 3, m >= 1, 2m <= N-1)")]
    InvalidRing { n: usize, m: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("node {node} out of range for N={n}")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("half-period asymmetry needs an even network size, got N={0}")]
    OddSize(usize),
    #[error("eigensolver did not converge for eigenvalue {index} after {iterations} iterations")]
    NoConvergence { index: usize, iterations: usize },
    #[error("field has imaginary residue {0:e} above tolerance")]
    ImaginaryResidue(f64),
    #[error("realization with seed {seed} failed: {reason}")]
    Realization {
        seed: u64,
        reason: alloc::boxed::Box<Error>,
    },
}
