use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("inadmissible algebra {label}: {constraint}")]
    Inadmissible { label: String, constraint: String },

    #[error("index out of range: {0}")]
    InvalidIndex(String),

    #[error("string pattern is empty; there is no string center system")]
    EmptyPattern,

    #[error("singular system: determinant is zero")]
    Singular,

    #[error("constant term must be 1 to invert a series")]
    NonUnitConstant,

    #[error("monomial of degree {degree} exceeds truncation degree {cap}")]
    DegreeAboveCap { degree: u32, cap: u32 },

    #[error("highest weight {0:?} is not dominant")]
    NonDominant(Vec<i64>),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// An internal invariant failed. Seeing this means a table or a
    /// formula is wrong, not that the input was bad.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
