//! Exact integer and rational 2×2 matrix algebra.

mod hnf;
mod lattice;
mod mat;
mod word;

use thiserror::Error;

pub use hnf::{column_hnf, ext_gcd, hnf_of_det, is_column_hnf, primitive_hnf_of_det};
pub use lattice::{echelon_basis, smith_exponent, smith_invariants};
pub use mat::{IntMat2, RatMat2};
pub use word::{st_word, Letter, StWord};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("matrix {0} has non-positive determinant")]
    NonPositiveDeterminant(String),
    #[error("matrix {0} is not in SL2(Z)")]
    NotUnimodular(String),
    #[error("span has rank {0} < 4")]
    RankDeficient(usize),
    #[error("{0}")]
    Parse(String),
}
