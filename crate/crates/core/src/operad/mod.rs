//! Permutations, free-operad trees and finite set operads.

mod axioms;
mod permutation;
mod set_operad;
mod tree;

use thiserror::Error;

pub use axioms::{check_operad_axioms, Axiom, AxiomCheck, AxiomReport};
pub use permutation::{block_wreath, factorial, Permutation};
pub use set_operad::{
    cartesian, eval_tree, weak_compositions, Assoc, BinaryTerm, Comm, FreeBinary, Op, SetOperad,
    TabulatedOperad,
};
pub use tree::{
    format_path, parse_path, parse_signature_tree, parse_tree, Color, Generator,
    GeneratorSignature, NodePath, OperadTree,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OperadError {
    #[error("not a permutation: {0:?}")]
    NotAPermutation(Vec<usize>),
    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("leaf labels {0:?} are not a bijection onto 1..=n")]
    BadLeafLabels(Vec<usize>),
    #[error("no node at path {0}")]
    BadPath(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("arity {arity} exceeds the tabulated cap {cap}")]
    Overflow { arity: usize, cap: usize },
    #[error("unknown element {0}")]
    UnknownElement(String),
    #[error("truncated: {0}")]
    Truncated(String),
    #[error("not tabulated: {0}")]
    Untabulated(String),
}
