//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or unsupported ring specification string.
    #[error("invalid ring spec: {0}")]
    RingSpec(String),

    /// Operation requires a unit but the element lies in the maximal ideal.
    #[error("element is not a unit")]
    NotAUnit,

    /// Square root requested of a non-square unit.
    #[error("element is not a square unit")]
    NotASquare,

    /// Element was expected to lie in the maximal ideal.
    #[error("element is not in the maximal ideal")]
    NotInIdeal,

    /// `decompose_nonsquare` requires -1 to be a non-square unit.
    #[error("-1 is a square unit in this ring")]
    MinusOneIsSquare,

    /// The matrix is not symmetric.
    #[error("matrix is not symmetric")]
    NotSymmetric,

    /// The matrix determinant is not a unit (degenerate form).
    #[error("matrix is not invertible over the ring")]
    NotInvertible,

    /// Operation requires a square matrix or compatible dimensions.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// Exhaustive enumeration would exceed the configured state budget.
    #[error("enumeration budget exceeded: {states} states > budget {budget}")]
    BudgetExceeded { states: u128, budget: u128 },
}
