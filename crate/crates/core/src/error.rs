use thiserror::Error;

/// Violated [`ChannelConfig`](crate::ChannelConfig) invariant, reported for
/// the first offending field.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValidationError {
    #[error("K = {k}: at least two users are required")]
    TooFewUsers { k: usize },
    #[error("field `{field}`: expected {expected} entries, found {found}")]
    Length {
        field: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("field `{field}`[{index}]: value {value} is not finite")]
    NonFinite {
        field: &'static str,
        index: usize,
        value: f64,
    },
    #[error("field `a`[{index}]: negative gain {value}")]
    NegativeGain { index: usize, value: f64 },
    #[error("field `{field}`[{index}]: {value} must be strictly positive")]
    NonPositive {
        field: &'static str,
        index: usize,
        value: f64,
    },
}

impl ValidationError {
    /// Name of the offending field.
    pub fn field(&self) -> &'static str {
        match self {
            ValidationError::TooFewUsers { .. } => "K",
            ValidationError::NegativeGain { .. } => "a",
            ValidationError::Length { field, .. }
            | ValidationError::NonFinite { field, .. }
            | ValidationError::NonPositive { field, .. } => field,
        }
    }

    /// Zero-based index of the offending entry, if the violation is per-entry.
    pub fn index(&self) -> Option<usize> {
        match self {
            ValidationError::NonFinite { index, .. }
            | ValidationError::NegativeGain { index, .. }
            | ValidationError::NonPositive { index, .. } => Some(*index),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid channel: {0}")]
    Invalid(#[from] ValidationError),
    #[error("capacity argument {0} outside the domain [0, inf)")]
    Domain(f64),
    #[error("degenerate channel: direct gain d[{index}] is zero")]
    DegenerateChannel { index: usize },
    #[error("invalid power split: {0}")]
    InvalidSplit(String),
    #[error("invalid rate polytope: {0}")]
    InvalidPolytope(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("user index {index} out of range 2..={k}")]
    UserIndex { index: usize, k: usize },
    #[error("operation needs a 3-user channel, got K = {0}")]
    NotThreeUser(usize),
    #[error("very strong interference link a[{index}] = {gain} >= {threshold}")]
    VeryStrongLink {
        index: usize,
        gain: f64,
        threshold: f64,
    },
    #[error("channel is not in the {0} regime")]
    RegimeMismatch(&'static str),
    #[error("grid step {0} does not divide [0, 1] into an integer number of cells")]
    GridStep(f64),
    #[error("grid of {points} points exceeds the cap of {cap}")]
    GridTooLarge { points: u128, cap: u128 },
}

pub type Result<T> = std::result::Result<T, Error>;
