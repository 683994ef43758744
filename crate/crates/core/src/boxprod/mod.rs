//! Words in the free operad on two coloured alphabets and rewriting modulo
//! colour-internal composition and the interchange relation.

mod equiv;
mod rewrite;

use std::fmt;

use thiserror::Error;

use crate::operad::{
    format_path, parse_signature_tree, Color, Generator, GeneratorSignature, OperadError,
    OperadTree, Permutation,
};

pub use equiv::{EquivalenceStrategy, EquivalenceVerdict};
pub use rewrite::{ColourAlgebra, FreeColours, RewriteStep, Rewriter, TableColours};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoxError {
    #[error(transparent)]
    Operad(#[from] OperadError),
    #[error("pattern mismatch at {path}: {reason}")]
    PatternMismatch { path: String, reason: String },
    #[error("not composable: {0}")]
    NotComposable(String),
    #[error("generator {0} has no colour in a two-coloured word")]
    Uncoloured(String),
    #[error("nullary identification is disabled")]
    NullariesNotIdentified,
    #[error("budget must be positive")]
    ZeroBudget,
    #[error("replay failed at step {index}: {source}")]
    Replay {
        index: usize,
        #[source]
        source: Box<BoxError>,
    },
}

/// Row-major enumeration `(i, j) ↦ (i−1)n + j` of an `m×n` grid.
pub fn rho_row(m: usize, n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i >= 1 && i <= m && j >= 1 && j <= n);
    (i - 1) * n + j
}

/// Column-major enumeration `(i, j) ↦ (j−1)m + i` of an `m×n` grid.
pub fn rho_col(m: usize, _n: usize, i: usize, j: usize) -> usize {
    (j - 1) * m + i
}

/// The permutation `σ = ρ₂∘ρ₁⁻¹` of the interchange relation
/// `α(β,…,β) = β(α,…,α)·σ`.
pub fn interchange_perm(m: usize, n: usize) -> Permutation {
    let mut images = vec![0; m * n];
    for i in 1..=m {
        for j in 1..=n {
            images[rho_row(m, n, i, j) - 1] = rho_col(m, n, i, j);
        }
    }
    Permutation::from_images(images).expect("grid enumerations are bijective")
}

/// A generator of one of the two colours of a box-product word.
pub trait BoxGenerator: Generator + fmt::Display + Send + Sync {
    fn color(&self) -> Color;
}

impl BoxGenerator for GeneratorSignature {
    fn color(&self) -> Color {
        self.color
    }
}

/// An element of the free operad on two coloured alphabets.
///
/// Stored as a tree with labelled leaves; this equals the planar tree acted
/// on by the trailing permutation returned by [`BoxWord::trailing`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoxWord<G> {
    tree: OperadTree<G>,
}

impl<G: BoxGenerator> BoxWord<G> {
    pub fn new(tree: OperadTree<G>) -> Result<Self, BoxError> {
        tree.validate()?;
        check_colours(&tree)?;
        Ok(BoxWord { tree })
    }

    /// The planar tree (leaves read `1..n`) acted on by `trailing`.
    pub fn from_planar(tree: OperadTree<G>, trailing: &Permutation) -> Result<Self, BoxError> {
        let w = BoxWord::new(tree)?;
        w.act(trailing)
    }

    pub fn identity() -> Self {
        BoxWord {
            tree: OperadTree::Leaf(1),
        }
    }

    pub fn tree(&self) -> &OperadTree<G> {
        &self.tree
    }

    pub fn into_tree(self) -> OperadTree<G> {
        self.tree
    }

    pub fn arity(&self) -> usize {
        self.tree.arity()
    }

    pub fn planar(&self) -> OperadTree<G> {
        let mut next = 0;
        renumber(&self.tree, &mut next)
    }

    /// The permutation `π` with `self = planar·π`.
    pub fn trailing(&self) -> Permutation {
        Permutation::from_images(self.tree.leaves())
            .expect("validated leaves")
            .inverse()
    }

    pub fn act(&self, sigma: &Permutation) -> Result<Self, BoxError> {
        Ok(BoxWord {
            tree: self.tree.act(sigma)?,
        })
    }

    pub fn graft(&self, inners: &[BoxWord<G>]) -> Result<Self, BoxError> {
        let trees: Vec<OperadTree<G>> = inners.iter().map(|w| w.tree.clone()).collect();
        Ok(BoxWord {
            tree: self.tree.graft(&trees)?,
        })
    }

    pub fn node_count(&self) -> usize {
        self.tree.node_count()
    }

    pub(crate) fn from_tree_unchecked(tree: OperadTree<G>) -> Self {
        BoxWord { tree }
    }
}

fn renumber<G: Generator>(t: &OperadTree<G>, next: &mut usize) -> OperadTree<G> {
    match t {
        OperadTree::Leaf(_) => {
            *next += 1;
            OperadTree::Leaf(*next)
        }
        OperadTree::Node { op, children } => OperadTree::Node {
            op: op.clone(),
            children: children.iter().map(|c| renumber(c, next)).collect(),
        },
    }
}

fn check_colours<G: BoxGenerator>(t: &OperadTree<G>) -> Result<(), BoxError> {
    if let OperadTree::Node { op, children } = t {
        if op.color() == Color::Single {
            return Err(BoxError::Uncoloured(op.to_string()));
        }
        for c in children {
            check_colours(c)?;
        }
    }
    Ok(())
}

impl<G: BoxGenerator> fmt::Display for BoxWord<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.planar(), self.trailing())
    }
}

/// Splits `text` into the tree part and an optional trailing `[..]`.
pub(crate) fn split_trailing(text: &str) -> (&str, Option<&str>) {
    let s = text.trim();
    if !s.ends_with(']') {
        return (s, None);
    }
    let after_tree = s.rfind(')').map_or(0, |i| i + 1);
    match s[after_tree..].find('[') {
        Some(rel) => {
            let at = after_tree + rel;
            (s[..at].trim(), Some(&s[at..]))
        }
        None => (s, None),
    }
}

impl BoxWord<GeneratorSignature> {
    /// Parses `(L:alpha (R:beta 1 2) (R:beta 3 4))[1,3,2,4]`; the trailing
    /// permutation is optional and defaults to the identity.
    pub fn parse(text: &str) -> Result<Self, BoxError> {
        let (tree_part, perm_part) = split_trailing(text);
        let tree = parse_signature_tree(tree_part)?;
        let w = BoxWord::new(tree)?;
        match perm_part {
            Some(p) => w.act(&p.parse::<Permutation>()?),
            None => Ok(w),
        }
    }
}

pub(crate) fn mismatch(path: &[usize], reason: impl Into<String>) -> BoxError {
    BoxError::PatternMismatch {
        path: format_path(path),
        reason: reason.into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Oracle: compose the two enumerations as explicit lookup tables.
    fn sigma_oracle(m: usize, n: usize) -> Vec<usize> {
        let mut row = Vec::new();
        let mut col = std::collections::HashMap::new();
        for i in 1..=m {
            for j in 1..=n {
                row.push((i, j));
            }
        }
        for j in 1..=n {
            for i in 1..=m {
                let next = col.len() + 1;
                col.insert((i, j), next);
            }
        }
        row.iter().map(|p| col[p]).collect()
    }

    #[test]
    fn sigma_examples() {
        assert!(interchange_perm(1, 4).is_identity());
        assert_eq!(interchange_perm(2, 2).to_string(), "[1,3,2,4]");
        assert_eq!(interchange_perm(2, 3).to_string(), "[1,3,5,2,4,6]");
    }

    #[test]
    fn sigma_matches_oracle_and_inverts() {
        for m in 1..=6 {
            for n in 1..=6 {
                assert_eq!(interchange_perm(m, n).images(), sigma_oracle(m, n));
                assert_eq!(interchange_perm(m, n).inverse(), interchange_perm(n, m));
            }
        }
    }

    #[test]
    fn word_roundtrip() {
        let s = "(L:alpha (R:beta 1 2) (R:beta 3 4))[1,3,2,4]";
        let w = BoxWord::parse(s).unwrap();
        assert_eq!(w.to_string(), s);
        assert_eq!(w.tree().leaves(), vec![1, 3, 2, 4]);
        let plain = BoxWord::parse("(L:alpha 2 1)").unwrap();
        assert_eq!(plain.to_string(), "(L:alpha 1 2)[2,1]");
        assert_eq!(BoxWord::parse("1").unwrap(), BoxWord::identity());
    }

    #[test]
    fn uncoloured_rejected() {
        assert!(matches!(
            BoxWord::parse("(alpha 1 2)"),
            Err(BoxError::Uncoloured(_))
        ));
    }

    #[test]
    fn tabulated_labels_survive_split() {
        let (t, p) = split_trailing("(L:[1,2] 1 2)[2,1]");
        assert_eq!(t, "(L:[1,2] 1 2)");
        assert_eq!(p, Some("[2,1]"));
        let (t, p) = split_trailing("(L:[1,2] 1 2)");
        assert_eq!(t, "(L:[1,2] 1 2)");
        assert_eq!(p, None);
    }
}
