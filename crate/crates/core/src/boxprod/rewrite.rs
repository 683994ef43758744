use std::collections::HashMap;
use std::fmt;

use crate::operad::{format_path, Color, GeneratorSignature, Op, OperadTree, Permutation, SetOperad};

use super::{mismatch, BoxError, BoxGenerator, BoxWord};

/// One rewrite step, addressed by the path of the node it acts on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RewriteStep<G> {
    /// `α(β(t₁₁…t₁ₙ),…,β(tₘ₁…tₘₙ)) ↔ β(α(t₁₁…tₘ₁),…,α(t₁ₙ…tₘₙ))`.
    Interchange { path: Vec<usize> },
    /// Composes the node with the marked same-colour children.
    Merge { path: Vec<usize>, which: Vec<bool> },
    /// Inverse of `Merge`: the node becomes `outer` over `inners`
    /// (`None` standing for the unit).
    Split {
        path: Vec<usize>,
        outer: G,
        inners: Vec<Option<G>>,
    },
    ElideUnit { path: Vec<usize> },
    InsertUnit { path: Vec<usize>, unit: G },
    /// `X(z,…,z) → z` for a nullary `z` of the other colour.
    AbsorbNullary { path: Vec<usize> },
    /// Inverse of `AbsorbNullary`.
    EmitNullary { path: Vec<usize>, node: G },
    /// Replaces a nullary by a nullary of the other colour.
    SwapNullary { path: Vec<usize>, to: G },
    /// `x(c₁…cₘ) → (x·σ)(c_{σ(1)}…c_{σ(m)})`.
    Permute { path: Vec<usize>, perm: Permutation },
}

impl<G> RewriteStep<G> {
    pub fn path(&self) -> &[usize] {
        match self {
            RewriteStep::Interchange { path }
            | RewriteStep::Merge { path, .. }
            | RewriteStep::Split { path, .. }
            | RewriteStep::ElideUnit { path }
            | RewriteStep::InsertUnit { path, .. }
            | RewriteStep::AbsorbNullary { path }
            | RewriteStep::EmitNullary { path, .. }
            | RewriteStep::SwapNullary { path, .. }
            | RewriteStep::Permute { path, .. } => path,
        }
    }

    /// Steps whose inverse is again a step of the same kind.
    pub fn is_symmetric(&self) -> bool {
        matches!(
            self,
            RewriteStep::Interchange { .. }
                | RewriteStep::SwapNullary { .. }
                | RewriteStep::Permute { .. }
        )
    }
}

impl<G: fmt::Display> fmt::Display for RewriteStep<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = format_path(self.path());
        match self {
            RewriteStep::Interchange { .. } => write!(f, "interchange @{p}"),
            RewriteStep::Merge { which, .. } => {
                let marks: String = which.iter().map(|&b| if b { '1' } else { '0' }).collect();
                write!(f, "merge @{p} [{marks}]")
            }
            RewriteStep::Split { outer, inners, .. } => {
                write!(f, "split @{p} {outer} <-")?;
                for i in inners {
                    match i {
                        Some(g) => write!(f, " {g}")?,
                        None => write!(f, " 1")?,
                    }
                }
                Ok(())
            }
            RewriteStep::ElideUnit { .. } => write!(f, "elide-unit @{p}"),
            RewriteStep::InsertUnit { unit, .. } => write!(f, "insert-unit @{p} {unit}"),
            RewriteStep::AbsorbNullary { .. } => write!(f, "absorb-nullary @{p}"),
            RewriteStep::EmitNullary { node, .. } => write!(f, "emit-nullary @{p} {node}"),
            RewriteStep::SwapNullary { to, .. } => write!(f, "swap-nullary @{p} {to}"),
            RewriteStep::Permute { perm, .. } => write!(f, "permute @{p} {perm}"),
        }
    }
}

/// The operad structure inside each colour.
pub trait ColourAlgebra<G>: Sync {
    /// `γ(outer; inners)` with `None` standing for the unit.
    fn compose(&self, outer: &G, inners: &[Option<G>]) -> Result<G, BoxError>;
    fn is_unit(&self, g: &G) -> bool;
    fn unit(&self, color: Color) -> Option<G>;
    fn act(&self, g: &G, sigma: &Permutation) -> Result<G, BoxError>;
    /// Nullary generators of a colour known to the algebra.
    fn nullaries(&self, color: Color) -> Vec<G>;
    /// True when nothing is identified inside either colour.
    fn is_free(&self) -> bool {
        false
    }
}

/// Free colours: no internal compositions, no units.
#[derive(Clone, Debug, Default)]
pub struct FreeColours {
    pub nullary_alphabet: Vec<GeneratorSignature>,
}

impl ColourAlgebra<GeneratorSignature> for FreeColours {
    fn compose(
        &self,
        outer: &GeneratorSignature,
        _inners: &[Option<GeneratorSignature>],
    ) -> Result<GeneratorSignature, BoxError> {
        Err(BoxError::NotComposable(format!("{outer} is a free generator")))
    }
    fn is_unit(&self, _g: &GeneratorSignature) -> bool {
        false
    }
    fn unit(&self, _color: Color) -> Option<GeneratorSignature> {
        None
    }
    fn act(
        &self,
        g: &GeneratorSignature,
        sigma: &Permutation,
    ) -> Result<GeneratorSignature, BoxError> {
        if sigma.is_identity() {
            Ok(g.clone())
        } else {
            Err(BoxError::NotComposable(format!("{g}·{sigma} in a free colour")))
        }
    }
    fn nullaries(&self, color: Color) -> Vec<GeneratorSignature> {
        self.nullary_alphabet
            .iter()
            .filter(|g| g.color == color && g.arity == 0)
            .cloned()
            .collect()
    }
    fn is_free(&self) -> bool {
        true
    }
}

/// Both colours given by finite set operads; generator names are element labels.
pub struct TableColours<'a> {
    left: &'a dyn SetOperad,
    right: &'a dyn SetOperad,
    index: [HashMap<(usize, String), Op>; 2],
}

impl<'a> TableColours<'a> {
    pub fn new(left: &'a dyn SetOperad, right: &'a dyn SetOperad) -> Self {
        let build = |c: &dyn SetOperad| {
            let mut m = HashMap::new();
            for n in 0..=c.arity_cap() {
                for op in c.elements(n) {
                    m.insert((n, c.label(op)), op);
                }
            }
            m
        };
        TableColours {
            left,
            right,
            index: [build(left), build(right)],
        }
    }

    fn side(&self, color: Color) -> Result<(&dyn SetOperad, &HashMap<(usize, String), Op>), BoxError> {
        match color {
            Color::Left => Ok((self.left, &self.index[0])),
            Color::Right => Ok((self.right, &self.index[1])),
            Color::Single => Err(BoxError::Uncoloured("single".into())),
        }
    }

    fn lookup(&self, g: &GeneratorSignature) -> Result<Op, BoxError> {
        let (_, idx) = self.side(g.color)?;
        idx.get(&(g.arity, g.name.clone()))
            .copied()
            .ok_or_else(|| BoxError::NotComposable(format!("{g} is not tabulated")))
    }

    fn signature(&self, color: Color, op: Op) -> Result<GeneratorSignature, BoxError> {
        let (c, _) = self.side(color)?;
        Ok(GeneratorSignature::new(c.label(op), op.arity, color))
    }
}

impl ColourAlgebra<GeneratorSignature> for TableColours<'_> {
    fn compose(
        &self,
        outer: &GeneratorSignature,
        inners: &[Option<GeneratorSignature>],
    ) -> Result<GeneratorSignature, BoxError> {
        let (c, _) = self.side(outer.color)?;
        let x = self.lookup(outer)?;
        let mut ys = Vec::with_capacity(inners.len());
        for i in inners {
            match i {
                None => ys.push(c.unit()),
                Some(g) if g.color == outer.color => ys.push(self.lookup(g)?),
                Some(g) => {
                    return Err(BoxError::NotComposable(format!(
                        "{g} and {outer} have different colours"
                    )))
                }
            }
        }
        let r = c.compose(x, &ys)?;
        self.signature(outer.color, r)
    }
    fn is_unit(&self, g: &GeneratorSignature) -> bool {
        match (self.side(g.color), self.lookup(g)) {
            (Ok((c, _)), Ok(op)) => op == c.unit(),
            _ => false,
        }
    }
    fn unit(&self, color: Color) -> Option<GeneratorSignature> {
        let (c, _) = self.side(color).ok()?;
        self.signature(color, c.unit()).ok()
    }
    fn act(
        &self,
        g: &GeneratorSignature,
        sigma: &Permutation,
    ) -> Result<GeneratorSignature, BoxError> {
        let (c, _) = self.side(g.color)?;
        let r = c.act(self.lookup(g)?, sigma)?;
        self.signature(g.color, r)
    }
    fn nullaries(&self, color: Color) -> Vec<GeneratorSignature> {
        match self.side(color) {
            Ok((c, _)) => c
                .elements(0)
                .into_iter()
                .filter_map(|op| self.signature(color, op).ok())
                .collect(),
            Err(_) => Vec::new(),
        }
    }
}

/// Applies rewrite steps over a fixed colour algebra.
pub struct Rewriter<'a, G> {
    pub algebra: &'a dyn ColourAlgebra<G>,
    /// Whether nullaries of the two colours are identified.
    pub identify_nullaries: bool,
}

impl<'a, G: BoxGenerator> Rewriter<'a, G> {
    pub fn new(algebra: &'a dyn ColourAlgebra<G>) -> Self {
        Rewriter {
            algebra,
            identify_nullaries: true,
        }
    }

    pub fn with_nullary_identification(mut self, on: bool) -> Self {
        self.identify_nullaries = on;
        self
    }

    pub fn apply(&self, w: &BoxWord<G>, step: &RewriteStep<G>) -> Result<BoxWord<G>, BoxError> {
        let path = step.path();
        let node = w
            .tree()
            .subtree(path)
            .ok_or_else(|| mismatch(path, "no such node"))?;
        let replacement = self.rewrite_node(node, step)?;
        Ok(BoxWord::from_tree_unchecked(
            w.tree().replace_at(path, replacement)?,
        ))
    }

    pub fn replay(
        &self,
        w: &BoxWord<G>,
        trace: &[RewriteStep<G>],
    ) -> Result<BoxWord<G>, BoxError> {
        let mut cur = w.clone();
        for (index, step) in trace.iter().enumerate() {
            cur = self.apply(&cur, step).map_err(|e| BoxError::Replay {
                index,
                source: Box::new(e),
            })?;
        }
        Ok(cur)
    }

    /// The step undoing `step` when applied to `before`.
    pub fn inverse(&self, before: &BoxWord<G>, step: &RewriteStep<G>) -> Result<RewriteStep<G>, BoxError> {
        let path = step.path().to_vec();
        let node = before
            .tree()
            .subtree(&path)
            .ok_or_else(|| mismatch(&path, "no such node"))?;
        let (op, children) = match node {
            OperadTree::Node { op, children } => (op, children),
            OperadTree::Leaf(_) => match step {
                RewriteStep::InsertUnit { .. } => {
                    return Ok(RewriteStep::ElideUnit { path });
                }
                _ => return Err(mismatch(&path, "leaf")),
            },
        };
        Ok(match step {
            RewriteStep::Interchange { .. } => step.clone(),
            RewriteStep::Merge { which, .. } => RewriteStep::Split {
                path,
                outer: op.clone(),
                inners: children
                    .iter()
                    .zip(which)
                    .map(|(c, &m)| if m { c.generator().cloned() } else { None })
                    .collect(),
            },
            RewriteStep::Split { inners, .. } => RewriteStep::Merge {
                path,
                which: inners.iter().map(|i| i.is_some()).collect(),
            },
            RewriteStep::ElideUnit { .. } => RewriteStep::InsertUnit {
                path,
                unit: op.clone(),
            },
            RewriteStep::InsertUnit { .. } => RewriteStep::ElideUnit { path },
            RewriteStep::AbsorbNullary { .. } => RewriteStep::EmitNullary {
                path,
                node: op.clone(),
            },
            RewriteStep::EmitNullary { .. } => RewriteStep::AbsorbNullary { path },
            RewriteStep::SwapNullary { .. } => RewriteStep::SwapNullary {
                path,
                to: op.clone(),
            },
            RewriteStep::Permute { perm, .. } => RewriteStep::Permute {
                path,
                perm: perm.inverse(),
            },
        })
    }

    /// Inverts a whole trace starting at `start`, returning the reversed
    /// inverse trace and the final word.
    pub fn invert_trace(
        &self,
        start: &BoxWord<G>,
        trace: &[RewriteStep<G>],
    ) -> Result<(Vec<RewriteStep<G>>, BoxWord<G>), BoxError> {
        let mut cur = start.clone();
        let mut inverses = Vec::with_capacity(trace.len());
        for step in trace {
            inverses.push(self.inverse(&cur, step)?);
            cur = self.apply(&cur, step)?;
        }
        inverses.reverse();
        Ok((inverses, cur))
    }

    fn rewrite_node(
        &self,
        node: &OperadTree<G>,
        step: &RewriteStep<G>,
    ) -> Result<OperadTree<G>, BoxError> {
        let path = step.path();
        if let RewriteStep::InsertUnit { unit, .. } = step {
            if unit.arity() != 1 || !self.algebra.is_unit(unit) {
                return Err(mismatch(path, format!("{unit} is not a unit")));
            }
            return Ok(OperadTree::Node {
                op: unit.clone(),
                children: vec![node.clone()],
            });
        }
        if let RewriteStep::EmitNullary { node: x, .. } = step {
            let z = nullary_of(node).ok_or_else(|| mismatch(path, "not a nullary node"))?;
            if x.color() == z.color() || x.arity() == 0 {
                return Err(mismatch(path, "emitted node must have the other colour and positive arity"));
            }
            return Ok(OperadTree::Node {
                op: x.clone(),
                children: vec![node.clone(); x.arity()],
            });
        }
        let (op, children) = match node {
            OperadTree::Node { op, children } => (op, children),
            OperadTree::Leaf(_) => return Err(mismatch(path, "expected a node, found a leaf")),
        };
        match step {
            RewriteStep::Interchange { .. } => interchange(op, children, path),
            RewriteStep::Merge { which, .. } => {
                if which.len() != children.len() {
                    return Err(mismatch(path, "merge mask length"));
                }
                let mut inners = Vec::with_capacity(children.len());
                let mut new_children = Vec::new();
                for (c, &m) in children.iter().zip(which) {
                    if m {
                        match c {
                            OperadTree::Node { op: g, children: gc } if g.color() == op.color() => {
                                inners.push(Some(g.clone()));
                                new_children.extend(gc.iter().cloned());
                            }
                            _ => return Err(mismatch(path, "merged child must be a same-colour node")),
                        }
                    } else {
                        inners.push(None);
                        new_children.push(c.clone());
                    }
                }
                let g = self.algebra.compose(op, &inners)?;
                Ok(OperadTree::Node {
                    op: g,
                    children: new_children,
                })
            }
            RewriteStep::Split { outer, inners, .. } => {
                if outer.color() != op.color() || inners.len() != outer.arity() {
                    return Err(mismatch(path, "split outer does not fit"));
                }
                let total: usize = inners
                    .iter()
                    .map(|i| i.as_ref().map_or(1, |g| g.arity()))
                    .sum();
                if total != children.len() {
                    return Err(mismatch(path, "split inner arities do not sum to the node arity"));
                }
                if self.algebra.compose(outer, inners)? != *op {
                    return Err(mismatch(path, "split does not compose back to the node"));
                }
                let mut rest = children.iter();
                let mut new_children = Vec::with_capacity(inners.len());
                for i in inners {
                    match i {
                        None => new_children.push(rest.next().expect("counted").clone()),
                        Some(g) => {
                            let gc: Vec<OperadTree<G>> =
                                rest.by_ref().take(g.arity()).cloned().collect();
                            new_children.push(OperadTree::Node {
                                op: g.clone(),
                                children: gc,
                            });
                        }
                    }
                }
                Ok(OperadTree::Node {
                    op: outer.clone(),
                    children: new_children,
                })
            }
            RewriteStep::ElideUnit { .. } => {
                if op.arity() == 1 && self.algebra.is_unit(op) {
                    Ok(children[0].clone())
                } else {
                    Err(mismatch(path, format!("{op} is not a unit")))
                }
            }
            RewriteStep::AbsorbNullary { .. } => {
                let first = children
                    .first()
                    .ok_or_else(|| mismatch(path, "node has no children"))?;
                let z = nullary_of(first).ok_or_else(|| mismatch(path, "children are not nullary"))?;
                if z.color() == op.color() || children.iter().any(|c| c != first) {
                    return Err(mismatch(path, "children must be identical nullaries of the other colour"));
                }
                Ok(first.clone())
            }
            RewriteStep::SwapNullary { to, .. } => {
                if !self.identify_nullaries {
                    return Err(BoxError::NullariesNotIdentified);
                }
                if op.arity() != 0 || to.arity() != 0 || to.color() == op.color() {
                    return Err(mismatch(path, "swap needs nullaries of opposite colours"));
                }
                Ok(OperadTree::Node {
                    op: to.clone(),
                    children: Vec::new(),
                })
            }
            RewriteStep::Permute { perm, .. } => {
                if perm.size() != children.len() {
                    return Err(mismatch(path, "permutation size"));
                }
                let g = self.algebra.act(op, perm)?;
                let new_children = (0..children.len())
                    .map(|i| children[perm.apply0(i)].clone())
                    .collect();
                Ok(OperadTree::Node {
                    op: g,
                    children: new_children,
                })
            }
            RewriteStep::InsertUnit { .. } | RewriteStep::EmitNullary { .. } => unreachable!(),
        }
    }

    /// Interchange applied at `path`, exposed for callers outside traces.
    pub fn apply_interchange(&self, w: &BoxWord<G>, path: &[usize]) -> Result<BoxWord<G>, BoxError> {
        self.apply(w, &RewriteStep::Interchange { path: path.to_vec() })
    }

    /// Merges every same-colour parent/child pair and elides units until none
    /// remain, returning the normal form and the steps taken.
    pub fn collapse_traced(&self, w: &BoxWord<G>) -> Result<(BoxWord<G>, Vec<RewriteStep<G>>), BoxError> {
        let mut trace = Vec::new();
        let mut cur = w.clone();
        loop {
            let next = self.first_collapse_step(&cur)?;
            match next {
                None => return Ok((cur, trace)),
                Some(step) => {
                    cur = self.apply(&cur, &step)?;
                    trace.push(step);
                }
            }
        }
    }

    pub fn collapse_internal(&self, w: &BoxWord<G>) -> Result<BoxWord<G>, BoxError> {
        Ok(self.collapse_traced(w)?.0)
    }

    /// The deepest-first pending merge or unit elision, if any.
    fn first_collapse_step(&self, w: &BoxWord<G>) -> Result<Option<RewriteStep<G>>, BoxError> {
        let mut paths = w.tree().node_paths();
        paths.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
        for path in paths {
            let node = w.tree().subtree(&path).expect("listed path");
            if let OperadTree::Node { op, children } = node {
                let which: Vec<bool> = children
                    .iter()
                    .map(|c| matches!(c.generator(), Some(g) if g.color() == op.color()))
                    .collect();
                if which.iter().any(|&b| b) {
                    return Ok(Some(RewriteStep::Merge { path, which }));
                }
                if op.arity() == 1 && self.algebra.is_unit(op) {
                    return Ok(Some(RewriteStep::ElideUnit { path }));
                }
            }
        }
        Ok(None)
    }

    /// Every single move applicable to `w`, in preorder of nodes.
    pub fn moves(&self, w: &BoxWord<G>) -> Vec<(RewriteStep<G>, BoxWord<G>)> {
        let mut out = Vec::new();
        for path in w.tree().node_paths() {
            let node = w.tree().subtree(&path).expect("listed path");
            let (op, children) = match node {
                OperadTree::Node { op, children } => (op, children),
                OperadTree::Leaf(_) => continue,
            };
            let mut candidates = vec![
                RewriteStep::Interchange { path: path.clone() },
                RewriteStep::AbsorbNullary { path: path.clone() },
                RewriteStep::ElideUnit { path: path.clone() },
            ];
            for (i, c) in children.iter().enumerate() {
                if matches!(c.generator(), Some(g) if g.color() == op.color()) {
                    let mut which = vec![false; children.len()];
                    which[i] = true;
                    candidates.push(RewriteStep::Merge {
                        path: path.clone(),
                        which,
                    });
                }
            }
            if self.identify_nullaries && op.arity() == 0 {
                for to in self.algebra.nullaries(op.color().opposite()) {
                    candidates.push(RewriteStep::SwapNullary {
                        path: path.clone(),
                        to,
                    });
                }
            }
            for step in candidates {
                if let Ok(next) = self.apply(w, &step) {
                    out.push((step, next));
                }
            }
        }
        out
    }
}

fn nullary_of<G: BoxGenerator>(t: &OperadTree<G>) -> Option<&G> {
    match t {
        OperadTree::Node { op, children } if op.arity() == 0 && children.is_empty() => Some(op),
        _ => None,
    }
}

fn interchange<G: BoxGenerator>(
    op: &G,
    children: &[OperadTree<G>],
    path: &[usize],
) -> Result<OperadTree<G>, BoxError> {
    let m = children.len();
    if m == 0 {
        return Err(mismatch(path, "outer node is nullary"));
    }
    let beta = children[0]
        .generator()
        .ok_or_else(|| mismatch(path, "children must be nodes"))?;
    if beta.color() == op.color() {
        return Err(mismatch(path, "children must have the other colour"));
    }
    let n = beta.arity();
    if n == 0 {
        return Err(mismatch(path, "inner generator is nullary"));
    }
    if children.iter().any(|c| c.generator() != Some(beta)) {
        return Err(mismatch(path, "children are not all the same generator"));
    }
    let grid: Vec<&[OperadTree<G>]> = children.iter().map(|c| c.children()).collect();
    let columns = (0..n)
        .map(|j| OperadTree::Node {
            op: op.clone(),
            children: (0..m).map(|i| grid[i][j].clone()).collect(),
        })
        .collect();
    Ok(OperadTree::Node {
        op: beta.clone(),
        children: columns,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxprod::interchange_perm;
    use crate::operad::Assoc;

    fn w(s: &str) -> BoxWord<GeneratorSignature> {
        BoxWord::parse(s).unwrap()
    }

    #[test]
    fn interchange_two_by_two() {
        let free = FreeColours::default();
        let r = Rewriter::new(&free);
        let lhs = w("(L:alpha (R:beta 1 2) (R:beta 3 4))");
        let rhs = r.apply_interchange(&lhs, &[]).unwrap();
        assert_eq!(rhs.to_string(), "(R:beta (L:alpha 1 2) (L:alpha 3 4))[1,3,2,4]");
        assert_eq!(rhs.trailing(), interchange_perm(2, 2));
        assert_eq!(r.apply_interchange(&rhs, &[]).unwrap(), lhs);
    }

    #[test]
    fn interchange_unary_outer() {
        let free = FreeColours::default();
        let r = Rewriter::new(&free);
        let lhs = w("(L:alpha (R:beta 1 2))");
        let rhs = r.apply_interchange(&lhs, &[]).unwrap();
        assert_eq!(rhs.to_string(), "(R:beta (L:alpha 1) (L:alpha 2))[1,2]");
    }

    #[test]
    fn interchange_rejects_mixed_children() {
        let free = FreeColours::default();
        let r = Rewriter::new(&free);
        let bad = w("(L:alpha (R:beta 1 2) (R:gamma 3 4))");
        assert!(matches!(
            r.apply_interchange(&bad, &[]),
            Err(BoxError::PatternMismatch { .. })
        ));
        assert!(r.apply_interchange(&bad, &[7]).is_err());
    }

    #[test]
    fn collapse_assoc_chain() {
        let a = Assoc::new(4);
        let t = TableColours::new(&a, &a);
        let r = Rewriter::new(&t);
        let word = w("(L:[1,2] (L:[1,2] 1 2) 3)");
        let c = r.collapse_internal(&word).unwrap();
        assert_eq!(c.to_string(), "(L:[1,2,3] 1 2 3)[1,2,3]");
        assert_eq!(r.collapse_internal(&c).unwrap(), c);
        let with_unit = w("(R:[1,2] (L:[1] 1) 2)");
        assert_eq!(r.collapse_internal(&with_unit).unwrap(), w("(R:[1,2] 1 2)"));
    }

    #[test]
    fn merge_split_inverse() {
        let a = Assoc::new(4);
        let t = TableColours::new(&a, &a);
        let r = Rewriter::new(&t);
        let word = w("(L:[2,1] (L:[1,2] 1 3) (R:[1] 2))");
        let step = RewriteStep::Merge {
            path: vec![],
            which: vec![true, false],
        };
        let after = r.apply(&word, &step).unwrap();
        let inv = r.inverse(&word, &step).unwrap();
        assert_eq!(r.apply(&after, &inv).unwrap(), word);
    }

    #[test]
    fn permute_step_roundtrip() {
        let a = Assoc::new(3);
        let t = TableColours::new(&a, &a);
        let r = Rewriter::new(&t);
        let word = w("(L:[1,2] (R:[1] 1) 2)");
        let step = RewriteStep::Permute {
            path: vec![],
            perm: "[2,1]".parse().unwrap(),
        };
        let after = r.apply(&word, &step).unwrap();
        assert_eq!(after, w("(L:[2,1] 2 (R:[1] 1))"));
        let back = r.apply(&after, &r.inverse(&word, &step).unwrap()).unwrap();
        assert_eq!(back, word);
    }

    #[test]
    fn nullary_moves() {
        let free = FreeColours {
            nullary_alphabet: vec![GeneratorSignature::left("a0", 0)],
        };
        let r = Rewriter::new(&free);
        let word = w("(L:alpha (R:b0) (R:b0))");
        let absorbed = r.apply(&word, &RewriteStep::AbsorbNullary { path: vec![] }).unwrap();
        assert_eq!(absorbed, w("(R:b0)"));
        let swapped = r
            .apply(
                &absorbed,
                &RewriteStep::SwapNullary {
                    path: vec![],
                    to: GeneratorSignature::left("a0", 0),
                },
            )
            .unwrap();
        assert_eq!(swapped, w("(L:a0)"));
        let strict = Rewriter::new(&free).with_nullary_identification(false);
        assert!(matches!(
            strict.apply(
                &absorbed,
                &RewriteStep::SwapNullary {
                    path: vec![],
                    to: GeneratorSignature::left("a0", 0)
                }
            ),
            Err(BoxError::NullariesNotIdentified)
        ));
    }
}
