//! Finite-index subgroups of SL₂(ℤ) and PSL₂(ℤ).

mod coset;
mod ops;
mod spec;
mod todd_coxeter;

use thiserror::Error;

use crate::exact::ExactError;

pub use coset::{
    coset_enumerate, coset_enumerate_with_cap, generating_set, schreier_from_table, schreier_generators, CosetTable,
};
pub use ops::{conjugate_by_matrix, conjugate_subgroup, subgroups_equal, subgroups_equal_opts};
pub use spec::{
    parse_spec, pullback, pullback_strict, CongruenceCondition, Family, GeneratedGroup, SpecKind, SubgroupSpec, DEFAULT_CAP,
};
pub use todd_coxeter::{enumerate_matrices, index_of_generated, TcTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("matrix {0} is not in SL2(Z)")]
    NotUnimodular(String),
    #[error("pullback of {0} is not integral")]
    PullbackNotIntegral(String),
    #[error("coset enumeration exceeded {cap} cosets")]
    IndexCapExceeded { cap: usize },
    #[error("Todd-Coxeter enumeration exceeded {cap} cosets")]
    CapExceeded { cap: usize },
    #[error("conjugating {generator} by B={b} is not integral")]
    NotConjugateIntoIntegral { generator: String, b: String },
    #[error("GammaPow({0}) is unsupported (only n = 2, 3)")]
    UnsupportedPower(u32),
    #[error("group spec parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

impl GroupError {
    /// True for either flavour of enumeration cap.
    pub fn is_cap(&self) -> bool {
        matches!(self, GroupError::IndexCapExceeded { .. } | GroupError::CapExceeded { .. })
    }
}
