use thiserror::Error;

use crate::mring::Variable;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parameters must be positive, got n={n}, m={m}, k={k}")]
    InvalidParams { n: u32, m: u32, k: u32 },
    #[error("incompatible shapes: {left_rows}x{left_cols} times {right_rows}x{right_cols}")]
    ShapeMismatch { left_rows: usize, left_cols: usize, right_rows: usize, right_cols: usize },
    #[error("no value assigned to variable {0}")]
    MissingVariable(Variable),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("cohomological degree {t} exceeds dim X = {dim}")]
    DegreeOutOfRange { t: usize, dim: usize },
    #[error("exterior power {q} exceeds rank {rank}")]
    ExteriorPowerTooLarge { q: u64, rank: u64 },
    #[error("objects live on different spaces")]
    ParamsMismatch,
    #[error("at least one trial is required")]
    NoTrials,
    #[error("exterior power index {q} outside 1..={max}")]
    WedgeIndexOutOfRange { q: u32, max: u32 },
    #[error("expected exactly one unknown term in the sequence, found {0}")]
    UnknownCount(usize),
    #[error("cohomology profile length {found} does not match dim X + 1 = {expected}")]
    ProfileLength { found: usize, expected: usize },
    #[error("cohomology bounds are inconsistent at degree {0}")]
    InconsistentSequence(usize),
    #[error("multiplicity overflow")]
    Overflow,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
