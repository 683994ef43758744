//! Free algebras over set operads, the functors `D_ℓ`, the fibered operad
//! `A(n) = D_n X`, modules over it and the `π₀` specialness check.

mod module;
mod object;
mod operad;
mod orbit;
mod special;

use thiserror::Error;

use crate::operad::OperadError;
use crate::simplicial::SimplicialError;

pub use module::{hom_equalizer, lemma_pred_check, HomEqualizer, LemmaPredReport};
pub use object::FiberedSetObject;
pub use operad::{build_fibered_a, fibered_arity, CompositionTable, FiberedOperadData, FiberedOperadReport};
pub use orbit::{
    check_action_laws, d_functor, free_algebra, orbits_upto, weighted_tuples, LawReport, Orbit,
    TruncatedAlgebra, Weighted,
};
pub use special::{specialness_diagnostic, ComponentReport, SpecialnessReport, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiberedError {
    #[error("operad tabulated to arity {cap}, {needed} needed")]
    CapExceeded { needed: usize, cap: usize },
    #[error("C(0) must be a single point: {0}")]
    NotReduced(String),
    #[error("base mismatch: {0}")]
    BaseMismatch(String),
    #[error("not functorial: {0}")]
    NotFunctorial(String),
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error(transparent)]
    Operad(#[from] OperadError),
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
}
