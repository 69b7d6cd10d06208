//! Finite fields GF(q), q <= 9, and canonical subspace algebra over GF(q)^n.

mod field;
mod flag;
mod grassmannian;
mod subspace;

use thiserror::Error;

pub use field::{make_field, Field, FieldSpec, SUPPORTED_Q};
pub use flag::{build_flag, Flag};
pub use grassmannian::{
    check_budget, default_budget, enumerate_grassmannian, subspaces_of, Chunk, Grassmannian, GrassmannianStream,
    PivotBlock, BUDGET_ENV, DEFAULT_BUDGET,
};
pub use subspace::Subspace;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfqError {
    #[error("unsupported field order q = {0} (supported: 2, 3, 4, 5, 7, 8, 9)")]
    UnsupportedQ(u64),
    #[error("tables for q = {0} fail the field axioms")]
    NotAField(u64),
    #[error("row {row} has length {got}, expected {expected}")]
    RowLength { row: usize, expected: usize, got: usize },
    #[error("row {row}, column {col}: {value} is not an element of GF({q})")]
    InvalidEntry { row: usize, col: usize, value: u64, q: u64 },
    #[error("row {row} is not in reduced row-echelon form")]
    NotCanonical { row: usize },
    #[error("ambient mismatch: GF({})^{} vs GF({})^{}", .left.1, .left.0, .right.1, .right.0)]
    AmbientMismatch { left: (usize, u64), right: (usize, u64) },
    #[error("enumeration of {count} subspaces exceeds the budget of {budget}")]
    BudgetExceeded { count: String, budget: u64 },
    #[error("invalid dimensions: {0}")]
    InvalidDims(String),
}
