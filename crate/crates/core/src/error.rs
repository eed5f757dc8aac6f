//! Error values shared by all modules.

use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Malformed input (bad parameter range, empty vertex list, ...).
    InvalidInput(String),
    /// Two arguments live in different ambient dimensions.
    DimensionMismatch { expected: usize, got: usize },
    /// A stated precondition of the operation does not hold.
    Precondition(String),
    /// A certified search ran out of budget; carries the best bracket found.
    NumericFailure { what: String, bracket: Option<(f64, f64)> },
    /// A feasibility search came back empty where a witness was expected.
    SearchFailure(String),
    /// Spike target point is not strictly outside the body.
    DegenerateSpike,
    /// Osculating circle construction has no admissible circle.
    UndefinedRadius,
    /// Boundary sampling failed (no intersection at a requested scale).
    Sampling(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(m) => write!(f, "invalid input: {m}"),
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::Precondition(m) => write!(f, "precondition violated: {m}"),
            Error::NumericFailure { what, bracket } => match bracket {
                Some((lo, hi)) => {
                    write!(f, "numeric failure in {what}: best bracket [{lo}, {hi}]")
                }
                None => write!(f, "numeric failure in {what}"),
            },
            Error::SearchFailure(m) => write!(f, "search failure: {m}"),
            Error::DegenerateSpike => write!(f, "degenerate spike: point not outside the body"),
            Error::UndefinedRadius => {
                write!(f, "undefined osculating radius: point not on the inward side")
            }
            Error::Sampling(m) => write!(f, "sampling failure: {m}"),
        }
    }
}
