use std::fmt;

use thiserror::Error;

/// Why a hypermatrix was rejected as degenerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegenerateReason {
    /// The first slice has rank below `k`, so the pencil is singular at (1:0).
    FirstSliceRankDeficient { column: usize },
    /// Double elimination met a pivot row that is zero at and left of the diagonal.
    ZeroPivotRow { row: usize },
}

impl DegenerateReason {
    /// Stable short code used in CLI output.
    pub fn code(&self) -> &'static str {
        match self {
            DegenerateReason::FirstSliceRankDeficient { .. } => "first-slice-rank",
            DegenerateReason::ZeroPivotRow { .. } => "zero-pivot-row",
        }
    }
}

impl fmt::Display for DegenerateReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegenerateReason::FirstSliceRankDeficient { column } => {
                write!(f, "first slice has no pivot in column {column}")
            }
            DegenerateReason::ZeroPivotRow { row } => {
                write!(f, "second slice row {row} vanishes up to the diagonal")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("variable count mismatch: {left} vs {right}")]
    VariableCountMismatch { left: usize, right: usize },
    #[error("empty input")]
    EmptyInput,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("scale factor is zero")]
    ZeroScale,
    #[error("invalid operation: {0}")]
    InvalidOperation(String),
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("degenerate hypermatrix: {0}")]
    Degenerate(DegenerateReason),
    #[error("budget exceeded: {required} > {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("computation infeasible: {0}")]
    Infeasible(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0} is not a supported prime modulus")]
    InvalidModulus(u64),
}

pub type Result<T> = std::result::Result<T, Error>;
