use std::collections::BTreeSet;
use std::fmt;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use super::{OperadError, Permutation};

/// Anything that can label an internal node of a free-operad tree.
pub trait Generator: Clone + Eq + Hash + fmt::Debug {
    fn arity(&self) -> usize;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Left,
    Right,
    Single,
}

impl Color {
    pub fn opposite(self) -> Color {
        match self {
            Color::Left => Color::Right,
            Color::Right => Color::Left,
            Color::Single => Color::Single,
        }
    }
}

/// A named generator of a free (possibly two-coloured) operad.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GeneratorSignature {
    pub name: String,
    pub arity: usize,
    pub color: Color,
}

impl GeneratorSignature {
    pub fn new(name: impl Into<String>, arity: usize, color: Color) -> Self {
        GeneratorSignature {
            name: name.into(),
            arity,
            color,
        }
    }

    pub fn left(name: impl Into<String>, arity: usize) -> Self {
        Self::new(name, arity, Color::Left)
    }

    pub fn right(name: impl Into<String>, arity: usize) -> Self {
        Self::new(name, arity, Color::Right)
    }

    pub fn single(name: impl Into<String>, arity: usize) -> Self {
        Self::new(name, arity, Color::Single)
    }

    /// Parses an atom such as `L:alpha`, `R:beta` or `mu`.
    pub fn from_atom(atom: &str, arity: usize) -> Result<Self, OperadError> {
        let (color, name) = if let Some(rest) = atom.strip_prefix("L:") {
            (Color::Left, rest)
        } else if let Some(rest) = atom.strip_prefix("R:") {
            (Color::Right, rest)
        } else {
            (Color::Single, atom)
        };
        if name.is_empty() {
            return Err(OperadError::Parse(format!("empty generator name in {atom:?}")));
        }
        Ok(Self::new(name, arity, color))
    }
}

impl Generator for GeneratorSignature {
    fn arity(&self) -> usize {
        self.arity
    }
}

impl fmt::Display for GeneratorSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.color {
            Color::Left => write!(f, "L:{}", self.name),
            Color::Right => write!(f, "R:{}", self.name),
            Color::Single => write!(f, "{}", self.name),
        }
    }
}

/// An element of a free operad: a planar tree of generators whose leaves
/// carry input labels `1..=n`.
///
/// A tree whose leaves read `ℓ(1), …, ℓ(n)` left to right is the planar tree
/// acted on by `ℓ⁻¹`; equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum OperadTree<G> {
    Leaf(usize),
    Node { op: G, children: Vec<OperadTree<G>> },
}

/// Child indices from the root, 0-indexed.
pub type NodePath = Vec<usize>;

pub fn format_path(path: &[usize]) -> String {
    if path.is_empty() {
        return ".".to_string();
    }
    path.iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(".")
}

pub fn parse_path(s: &str) -> Result<NodePath, OperadError> {
    let s = s.trim();
    if s.is_empty() || s == "." {
        return Ok(Vec::new());
    }
    s.split('.')
        .map(|t| {
            t.parse::<usize>()
                .map_err(|e| OperadError::Parse(format!("bad path segment {t:?}: {e}")))
        })
        .collect()
}

impl<G: Generator> OperadTree<G> {
    pub fn leaf(slot: usize) -> Self {
        OperadTree::Leaf(slot)
    }

    pub fn node(op: G, children: Vec<OperadTree<G>>) -> Result<Self, OperadError> {
        if op.arity() != children.len() {
            return Err(OperadError::ArityMismatch {
                expected: op.arity(),
                found: children.len(),
            });
        }
        Ok(OperadTree::Node { op, children })
    }

    /// The generator applied to the leaves `1..=arity` in order.
    pub fn corolla(op: G) -> Self {
        let children = (1..=op.arity()).map(OperadTree::Leaf).collect();
        OperadTree::Node { op, children }
    }

    pub fn arity(&self) -> usize {
        match self {
            OperadTree::Leaf(_) => 1,
            OperadTree::Node { children, .. } => children.iter().map(|c| c.arity()).sum(),
        }
    }

    /// Leaf labels in left-to-right order.
    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self {
            OperadTree::Leaf(s) => out.push(*s),
            OperadTree::Node { children, .. } => {
                for c in children {
                    c.collect_leaves(out);
                }
            }
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            OperadTree::Leaf(_) => 0,
            OperadTree::Node { children, .. } => {
                1 + children.iter().map(|c| c.node_count()).sum::<usize>()
            }
        }
    }

    pub fn generator(&self) -> Option<&G> {
        match self {
            OperadTree::Leaf(_) => None,
            OperadTree::Node { op, .. } => Some(op),
        }
    }

    pub fn children(&self) -> &[OperadTree<G>] {
        match self {
            OperadTree::Leaf(_) => &[],
            OperadTree::Node { children, .. } => children,
        }
    }

    /// Checks child counts and that leaf labels are a bijection onto `1..=n`.
    pub fn validate(&self) -> Result<(), OperadError> {
        self.check_arities()?;
        let leaves = self.leaves();
        let n = leaves.len();
        let set: BTreeSet<usize> = leaves.iter().copied().collect();
        if set.len() != n || leaves.iter().any(|&s| s == 0 || s > n) {
            return Err(OperadError::BadLeafLabels(leaves));
        }
        Ok(())
    }

    fn check_arities(&self) -> Result<(), OperadError> {
        if let OperadTree::Node { op, children } = self {
            if op.arity() != children.len() {
                return Err(OperadError::ArityMismatch {
                    expected: op.arity(),
                    found: children.len(),
                });
            }
            for c in children {
                c.check_arities()?;
            }
        }
        Ok(())
    }

    pub fn relabel(&self, f: &impl Fn(usize) -> usize) -> OperadTree<G> {
        match self {
            OperadTree::Leaf(s) => OperadTree::Leaf(f(*s)),
            OperadTree::Node { op, children } => OperadTree::Node {
                op: op.clone(),
                children: children.iter().map(|c| c.relabel(f)).collect(),
            },
        }
    }

    /// Relabels the leaves of a subtree to `1..=k` preserving their order.
    pub fn standardized(&self) -> OperadTree<G> {
        let mut sorted = self.leaves();
        sorted.sort_unstable();
        self.relabel(&|s| sorted.binary_search(&s).expect("leaf present") + 1)
    }

    pub fn map_generators<H: Generator>(&self, f: &impl Fn(&G) -> H) -> OperadTree<H> {
        match self {
            OperadTree::Leaf(s) => OperadTree::Leaf(*s),
            OperadTree::Node { op, children } => OperadTree::Node {
                op: f(op),
                children: children.iter().map(|c| c.map_generators(f)).collect(),
            },
        }
    }

    /// Free-operad composition: leaf `i` of `self` is replaced by `inners[i-1]`,
    /// whose labels are shifted by the arities of `inners[..i-1]`.
    pub fn graft(&self, inners: &[OperadTree<G>]) -> Result<OperadTree<G>, OperadError> {
        let n = self.arity();
        if inners.len() != n {
            return Err(OperadError::ArityMismatch {
                expected: n,
                found: inners.len(),
            });
        }
        let mut offsets = Vec::with_capacity(n);
        let mut acc = 0;
        for t in inners {
            offsets.push(acc);
            acc += t.arity();
        }
        Ok(self.graft_with(inners, &offsets))
    }

    fn graft_with(&self, inners: &[OperadTree<G>], offsets: &[usize]) -> OperadTree<G> {
        match self {
            OperadTree::Leaf(s) => {
                let off = offsets[s - 1];
                inners[s - 1].relabel(&|x| x + off)
            }
            OperadTree::Node { op, children } => OperadTree::Node {
                op: op.clone(),
                children: children
                    .iter()
                    .map(|c| c.graft_with(inners, offsets))
                    .collect(),
            },
        }
    }

    /// Right action of `Σₙ`: `T·σ` carries label `σ⁻¹(s)` where `T` carried `s`.
    pub fn act(&self, sigma: &Permutation) -> Result<OperadTree<G>, OperadError> {
        let n = self.arity();
        if sigma.size() != n {
            return Err(OperadError::SizeMismatch {
                expected: n,
                found: sigma.size(),
            });
        }
        let inv = sigma.inverse();
        Ok(self.relabel(&|s| inv.image(s)))
    }

    pub fn subtree(&self, path: &[usize]) -> Option<&OperadTree<G>> {
        let mut cur = self;
        for &i in path {
            cur = cur.children().get(i)?;
        }
        Some(cur)
    }

    /// Returns a copy with the subtree at `path` replaced.
    pub fn replace_at(
        &self,
        path: &[usize],
        replacement: OperadTree<G>,
    ) -> Result<OperadTree<G>, OperadError> {
        match path.split_first() {
            None => Ok(replacement),
            Some((&i, rest)) => match self {
                OperadTree::Node { op, children } if i < children.len() => {
                    let mut children = children.clone();
                    children[i] = children[i].replace_at(rest, replacement)?;
                    Ok(OperadTree::Node {
                        op: op.clone(),
                        children,
                    })
                }
                _ => Err(OperadError::BadPath(format_path(path))),
            },
        }
    }

    /// Paths of all internal nodes in preorder.
    pub fn node_paths(&self) -> Vec<NodePath> {
        let mut out = Vec::new();
        let mut stack = vec![(Vec::new(), self)];
        while let Some((path, t)) = stack.pop() {
            if let OperadTree::Node { children, .. } = t {
                for (i, c) in children.iter().enumerate().rev() {
                    let mut p = path.clone();
                    p.push(i);
                    stack.push((p, c));
                }
                out.push(path);
            }
        }
        out
    }
}

impl<G: Generator + fmt::Display> fmt::Display for OperadTree<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperadTree::Leaf(s) => write!(f, "{s}"),
            OperadTree::Node { op, children } => {
                write!(f, "({op}")?;
                for c in children {
                    write!(f, " {c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Open,
    Close,
    Atom(String),
}

fn tokenize(s: &str) -> Vec<Token> {
    let mut out = Vec::new();
    let mut atom = String::new();
    for ch in s.chars() {
        match ch {
            '(' | ')' => {
                if !atom.is_empty() {
                    out.push(Token::Atom(std::mem::take(&mut atom)));
                }
                out.push(if ch == '(' { Token::Open } else { Token::Close });
            }
            c if c.is_whitespace() => {
                if !atom.is_empty() {
                    out.push(Token::Atom(std::mem::take(&mut atom)));
                }
            }
            c => atom.push(c),
        }
    }
    if !atom.is_empty() {
        out.push(Token::Atom(atom));
    }
    out
}

/// Parses an s-expression tree, resolving each generator atom with `resolve`
/// given its name and observed child count.
pub fn parse_tree<G: Generator>(
    s: &str,
    resolve: &mut impl FnMut(&str, usize) -> Result<G, OperadError>,
) -> Result<OperadTree<G>, OperadError> {
    let tokens = tokenize(s);
    let mut pos = 0;
    let tree = parse_tokens(&tokens, &mut pos, resolve)?;
    if pos != tokens.len() {
        return Err(OperadError::Parse(format!("trailing input in {s:?}")));
    }
    tree.validate()?;
    Ok(tree)
}

fn parse_tokens<G: Generator>(
    tokens: &[Token],
    pos: &mut usize,
    resolve: &mut impl FnMut(&str, usize) -> Result<G, OperadError>,
) -> Result<OperadTree<G>, OperadError> {
    match tokens.get(*pos) {
        Some(Token::Atom(a)) => {
            *pos += 1;
            a.parse::<usize>()
                .map(OperadTree::Leaf)
                .map_err(|_| OperadError::Parse(format!("expected leaf slot, got {a:?}")))
        }
        Some(Token::Open) => {
            *pos += 1;
            let name = match tokens.get(*pos) {
                Some(Token::Atom(a)) => a.clone(),
                _ => return Err(OperadError::Parse("expected generator name".into())),
            };
            *pos += 1;
            let mut children = Vec::new();
            loop {
                match tokens.get(*pos) {
                    Some(Token::Close) => {
                        *pos += 1;
                        break;
                    }
                    Some(_) => children.push(parse_tokens(tokens, pos, resolve)?),
                    None => return Err(OperadError::Parse("unbalanced parentheses".into())),
                }
            }
            let op = resolve(&name, children.len())?;
            OperadTree::node(op, children)
        }
        _ => Err(OperadError::Parse("unexpected token".into())),
    }
}

/// Parses a tree over named generators; colours come from `L:`/`R:` prefixes.
pub fn parse_signature_tree(s: &str) -> Result<OperadTree<GeneratorSignature>, OperadError> {
    parse_tree(s, &mut |name, arity| GeneratorSignature::from_atom(name, arity))
}
