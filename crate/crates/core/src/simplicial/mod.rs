//! Levelwise-finite simplicial sets: nerves, bar constructions, subdivision
//! and component counts.

mod bisimplicial;
mod category;
mod monoid;
mod sset;
mod subdivide;

use thiserror::Error;

pub use bisimplicial::BisimplicialSet;
pub use category::{category_subdivision, nerve, Chain, CategoryFile, FiniteCategory, Functor, Morphism};
pub use monoid::{two_sided_bar, MSet, Monoid, MonoidFile, Side};
pub use sset::{FiniteSimplicialSet, IdentityFailure, IdentityReport, Level, Provenance, SimplicialMap};
pub use subdivide::{face_category, last_vertex_map, subdivide, FaceCategory};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimplicialError {
    #[error("invalid table: {0}")]
    InvalidTable(String),
    #[error("not a category: {0}")]
    NotACategory(String),
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("invalid operator: {0}")]
    InvalidOperator(String),
    #[error("cap {cap} exceeded")]
    CapExceeded { cap: usize },
    #[error("level {level} still has {count} nondegenerate elements; raise the cap")]
    TruncationInconclusive { level: usize, count: usize },
    #[error("degenerate face: {0}")]
    DegenerateFace(String),
    #[error("not a simplicial map: {0}")]
    MapMismatch(String),
}
