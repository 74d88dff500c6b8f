use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GalledError {
    #[error("parts sum to {actual}, expected {expected}")]
    PartsMismatch { expected: usize, actual: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("series has a nonzero constant term; 1/(1-f) is not a formal power series")]
    NonzeroConstant,
    #[error("fixed-point iteration diverged at coefficient {index}")]
    Divergence { index: usize },
    #[error("coefficient {index} is not integral")]
    NotIntegral { index: usize },
    #[error("no root in bracket: {0}")]
    NoRoot(String),
    #[error("size guard exceeded: n = {n}, limit {limit}")]
    SizeGuard { n: usize, limit: usize },
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}
