use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::tree::{GeneratorSignature, OperadTree};
use super::{OperadError, Permutation};

/// An element of a finite set operad: its arity and its index in `C(arity)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Op {
    pub arity: usize,
    pub index: usize,
}

impl Op {
    pub fn new(arity: usize, index: usize) -> Self {
        Op { arity, index }
    }
}

/// A set operad tabulated on arities `0..=arity_cap`.
///
/// Operations whose result would leave the tabulated range return
/// [`OperadError::Overflow`]; nothing is silently truncated.
pub trait SetOperad: Sync {
    fn name(&self) -> String;
    fn arity_cap(&self) -> usize;
    /// `|C(n)|`, zero above the cap.
    fn carrier_size(&self, arity: usize) -> usize;
    fn label(&self, op: Op) -> String;
    fn unit(&self) -> Op;
    /// `γ(outer; inners)`.
    fn compose(&self, outer: Op, inners: &[Op]) -> Result<Op, OperadError>;
    /// Right action `x·σ`.
    fn act(&self, x: Op, sigma: &Permutation) -> Result<Op, OperadError>;

    /// Whether `C(n)` is listed in full for every `n` up to the cap.
    fn carriers_complete(&self) -> bool {
        true
    }

    fn find(&self, arity: usize, label: &str) -> Option<Op> {
        (0..self.carrier_size(arity))
            .map(|i| Op::new(arity, i))
            .find(|&op| self.label(op) == label)
    }

    fn elements(&self, arity: usize) -> Vec<Op> {
        (0..self.carrier_size(arity))
            .map(|i| Op::new(arity, i))
            .collect()
    }

    /// `γ(x; 1,…,1, y, 1,…,1)` with `y` in slot `i` (0-indexed).
    fn partial_compose(&self, x: Op, i: usize, y: Op) -> Result<Op, OperadError> {
        let mut inners = vec![self.unit(); x.arity];
        inners[i] = y;
        self.compose(x, &inners)
    }
}

fn check_op(c: &dyn SetOperadInfo, op: Op) -> Result<(), OperadError> {
    if op.arity > c.cap() {
        return Err(OperadError::Overflow {
            arity: op.arity,
            cap: c.cap(),
        });
    }
    if op.index >= c.size(op.arity) {
        return Err(OperadError::UnknownElement(format!(
            "index {} in arity {}",
            op.index, op.arity
        )));
    }
    Ok(())
}

trait SetOperadInfo {
    fn cap(&self) -> usize;
    fn size(&self, arity: usize) -> usize;
}

impl<T: SetOperad + ?Sized> SetOperadInfo for T {
    fn cap(&self) -> usize {
        self.arity_cap()
    }
    fn size(&self, arity: usize) -> usize {
        self.carrier_size(arity)
    }
}

fn composite_arity(c: &dyn SetOperadInfo, outer: Op, inners: &[Op]) -> Result<usize, OperadError> {
    check_op(c, outer)?;
    if inners.len() != outer.arity {
        return Err(OperadError::ArityMismatch {
            expected: outer.arity,
            found: inners.len(),
        });
    }
    for &y in inners {
        check_op(c, y)?;
    }
    let total: usize = inners.iter().map(|y| y.arity).sum();
    if total > c.cap() {
        return Err(OperadError::Overflow {
            arity: total,
            cap: c.cap(),
        });
    }
    Ok(total)
}

fn check_action(c: &dyn SetOperadInfo, x: Op, sigma: &Permutation) -> Result<(), OperadError> {
    check_op(c, x)?;
    if sigma.size() != x.arity {
        return Err(OperadError::SizeMismatch {
            expected: x.arity,
            found: sigma.size(),
        });
    }
    Ok(())
}

/// The terminal operad: one operation of each arity.
#[derive(Clone, Debug)]
pub struct Comm {
    cap: usize,
}

impl Comm {
    pub fn new(cap: usize) -> Self {
        Comm { cap }
    }
}

impl SetOperad for Comm {
    fn name(&self) -> String {
        format!("comm(cap={})", self.cap)
    }
    fn arity_cap(&self) -> usize {
        self.cap
    }
    fn carrier_size(&self, arity: usize) -> usize {
        usize::from(arity <= self.cap)
    }
    fn label(&self, op: Op) -> String {
        format!("c{}", op.arity)
    }
    fn unit(&self) -> Op {
        Op::new(1, 0)
    }
    fn compose(&self, outer: Op, inners: &[Op]) -> Result<Op, OperadError> {
        let n = composite_arity(self, outer, inners)?;
        Ok(Op::new(n, 0))
    }
    fn act(&self, x: Op, sigma: &Permutation) -> Result<Op, OperadError> {
        check_action(self, x, sigma)?;
        Ok(x)
    }
}

/// The unital associative operad: `C(n) = Σₙ`, an element being the order in
/// which the inputs are read (`π(p)` is the input at position `p`).
#[derive(Clone, Debug)]
pub struct Assoc {
    cap: usize,
}

impl Assoc {
    pub fn new(cap: usize) -> Self {
        Assoc { cap }
    }

    pub fn reading_order(&self, op: Op) -> Permutation {
        Permutation::unrank(op.arity, op.index)
    }

    pub fn op_of(&self, reading: &Permutation) -> Op {
        Op::new(reading.size(), reading.rank())
    }
}

impl SetOperad for Assoc {
    fn name(&self) -> String {
        format!("assoc(cap={})", self.cap)
    }
    fn arity_cap(&self) -> usize {
        self.cap
    }
    fn carrier_size(&self, arity: usize) -> usize {
        if arity <= self.cap {
            super::permutation::factorial(arity)
        } else {
            0
        }
    }
    fn label(&self, op: Op) -> String {
        self.reading_order(op).to_string()
    }
    fn unit(&self) -> Op {
        Op::new(1, 0)
    }
    fn compose(&self, outer: Op, inners: &[Op]) -> Result<Op, OperadError> {
        let n = composite_arity(self, outer, inners)?;
        let pi = self.reading_order(outer);
        let mut offsets = Vec::with_capacity(inners.len());
        let mut acc = 0;
        for y in inners {
            offsets.push(acc);
            acc += y.arity;
        }
        let mut reading = Vec::with_capacity(n);
        for p in 0..outer.arity {
            let j = pi.apply0(p);
            let rho = self.reading_order(inners[j]);
            reading.extend(rho.zero_based().iter().map(|r| offsets[j] + r));
        }
        let reading = Permutation::from_zero_based(reading)?;
        Ok(self.op_of(&reading))
    }
    fn act(&self, x: Op, sigma: &Permutation) -> Result<Op, OperadError> {
        check_action(self, x, sigma)?;
        let pi = self.reading_order(x);
        Ok(self.op_of(&sigma.inverse().compose(&pi)?))
    }
}

/// A term of the free operad on one binary generator `mu`, with a single
/// nullary operation `*` and with every input-free subterm collapsed to `*`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BinaryTerm {
    Input(usize),
    Star,
    Mu(Box<BinaryTerm>, Box<BinaryTerm>),
}

impl BinaryTerm {
    fn mu(l: BinaryTerm, r: BinaryTerm) -> BinaryTerm {
        if l == BinaryTerm::Star && r == BinaryTerm::Star {
            BinaryTerm::Star
        } else {
            BinaryTerm::Mu(Box::new(l), Box::new(r))
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            BinaryTerm::Mu(l, r) => 1 + l.node_count() + r.node_count(),
            _ => 0,
        }
    }

    fn inputs(&self) -> usize {
        match self {
            BinaryTerm::Input(_) => 1,
            BinaryTerm::Star => 0,
            BinaryTerm::Mu(l, r) => l.inputs() + r.inputs(),
        }
    }

    fn relabel(&self, f: &impl Fn(usize) -> usize) -> BinaryTerm {
        match self {
            BinaryTerm::Input(i) => BinaryTerm::Input(f(*i)),
            BinaryTerm::Star => BinaryTerm::Star,
            BinaryTerm::Mu(l, r) => BinaryTerm::Mu(Box::new(l.relabel(f)), Box::new(r.relabel(f))),
        }
    }

    fn substitute(&self, inners: &[BinaryTerm], offsets: &[usize]) -> BinaryTerm {
        match self {
            BinaryTerm::Input(i) => {
                let off = offsets[i - 1];
                inners[i - 1].relabel(&|x| x + off)
            }
            BinaryTerm::Star => BinaryTerm::Star,
            BinaryTerm::Mu(l, r) => {
                BinaryTerm::mu(l.substitute(inners, offsets), r.substitute(inners, offsets))
            }
        }
    }

    /// Shapes with `inputs` unlabeled input positions and exactly `nodes` nodes.
    fn shapes(inputs: usize, nodes: usize) -> Vec<BinaryTerm> {
        if nodes == 0 {
            return match inputs {
                0 => vec![BinaryTerm::Star],
                1 => vec![BinaryTerm::Input(0)],
                _ => vec![],
            };
        }
        if inputs == 0 {
            return vec![];
        }
        let mut out = Vec::new();
        for left_nodes in 0..nodes {
            let right_nodes = nodes - 1 - left_nodes;
            for left_inputs in 0..=inputs {
                let right_inputs = inputs - left_inputs;
                for l in Self::shapes(left_inputs, left_nodes) {
                    for r in Self::shapes(right_inputs, right_nodes) {
                        out.push(BinaryTerm::Mu(Box::new(l.clone()), Box::new(r)));
                    }
                }
            }
        }
        out
    }

    fn fill_labels(&self, labels: &[usize], next: &mut usize) -> BinaryTerm {
        match self {
            BinaryTerm::Input(_) => {
                let t = BinaryTerm::Input(labels[*next]);
                *next += 1;
                t
            }
            BinaryTerm::Star => BinaryTerm::Star,
            BinaryTerm::Mu(l, r) => {
                let l = l.fill_labels(labels, next);
                let r = r.fill_labels(labels, next);
                BinaryTerm::Mu(Box::new(l), Box::new(r))
            }
        }
    }
}

impl fmt::Display for BinaryTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BinaryTerm::Input(i) => write!(f, "{i}"),
            BinaryTerm::Star => write!(f, "*"),
            BinaryTerm::Mu(l, r) => write!(f, "mu[{l},{r}]"),
        }
    }
}

/// The free unital operad on one binary operation with `C(0) = *`,
/// truncated to terms with at most `node_cap` binary nodes.
#[derive(Clone, Debug)]
pub struct FreeBinary {
    cap: usize,
    node_cap: usize,
    carriers: Vec<Vec<BinaryTerm>>,
    index: HashMap<BinaryTerm, usize>,
}

impl FreeBinary {
    pub fn new(cap: usize, node_cap: usize) -> Self {
        let mut carriers = Vec::with_capacity(cap + 1);
        let mut index = HashMap::new();
        for arity in 0..=cap {
            let mut terms = Vec::new();
            if arity == 0 {
                terms.push(BinaryTerm::Star);
            } else {
                for nodes in 0..=node_cap {
                    for shape in BinaryTerm::shapes(arity, nodes) {
                        if !Self::is_reduced(&shape) {
                            continue;
                        }
                        for p in Permutation::all(arity) {
                            let labels = p.images();
                            terms.push(shape.fill_labels(&labels, &mut 0));
                        }
                    }
                }
            }
            terms.sort();
            terms.dedup();
            for (i, t) in terms.iter().enumerate() {
                index.insert(t.clone(), i);
            }
            carriers.push(terms);
        }
        FreeBinary {
            cap,
            node_cap,
            carriers,
            index,
        }
    }

    fn is_reduced(t: &BinaryTerm) -> bool {
        match t {
            BinaryTerm::Mu(l, r) => {
                !(l.inputs() == 0 && r.inputs() == 0) && Self::is_reduced(l) && Self::is_reduced(r)
            }
            _ => true,
        }
    }

    pub fn term(&self, op: Op) -> &BinaryTerm {
        &self.carriers[op.arity][op.index]
    }

    pub fn node_cap(&self) -> usize {
        self.node_cap
    }

    fn op_of(&self, t: &BinaryTerm) -> Result<Op, OperadError> {
        let arity = t.inputs();
        if arity > self.cap {
            return Err(OperadError::Overflow {
                arity,
                cap: self.cap,
            });
        }
        match self.index.get(t) {
            Some(&i) if self.carriers[arity][i] == *t => Ok(Op::new(arity, i)),
            _ => Err(OperadError::Truncated(format!(
                "term {t} exceeds {} binary nodes",
                self.node_cap
            ))),
        }
    }
}

impl SetOperad for FreeBinary {
    fn name(&self) -> String {
        format!("free-binary(cap={}, nodes={})", self.cap, self.node_cap)
    }
    fn arity_cap(&self) -> usize {
        self.cap
    }
    fn carrier_size(&self, arity: usize) -> usize {
        self.carriers.get(arity).map_or(0, |c| c.len())
    }
    fn label(&self, op: Op) -> String {
        self.term(op).to_string()
    }
    fn unit(&self) -> Op {
        self.op_of(&BinaryTerm::Input(1)).expect("unit present")
    }
    fn compose(&self, outer: Op, inners: &[Op]) -> Result<Op, OperadError> {
        composite_arity(self, outer, inners)?;
        let terms: Vec<BinaryTerm> = inners.iter().map(|&y| self.term(y).clone()).collect();
        let mut offsets = Vec::with_capacity(terms.len());
        let mut acc = 0;
        for y in inners {
            offsets.push(acc);
            acc += y.arity;
        }
        self.op_of(&self.term(outer).substitute(&terms, &offsets))
    }
    fn act(&self, x: Op, sigma: &Permutation) -> Result<Op, OperadError> {
        check_action(self, x, sigma)?;
        let inv = sigma.inverse();
        self.op_of(&self.term(x).relabel(&|i| inv.image(i)))
    }
    fn carriers_complete(&self) -> bool {
        false
    }
}

/// A set operad given entirely by explicit tables.
#[derive(Clone, Debug, PartialEq)]
pub struct TabulatedOperad {
    pub name: String,
    pub carriers: Vec<Vec<String>>,
    pub unit: Op,
    pub composition: HashMap<(Op, Vec<Op>), Op>,
    pub action: HashMap<(Op, Permutation), Op>,
}

impl TabulatedOperad {
    /// Materializes every composition and action of `c` inside its cap.
    pub fn from_operad(c: &dyn SetOperad) -> Result<Self, OperadError> {
        let cap = c.arity_cap();
        let carriers: Vec<Vec<String>> = (0..=cap)
            .map(|n| c.elements(n).into_iter().map(|op| c.label(op)).collect())
            .collect();
        let mut composition = HashMap::new();
        for m in 0..=cap {
            for outer in c.elements(m) {
                for arities in weak_compositions(m, cap) {
                    let choices: Vec<Vec<Op>> = arities.iter().map(|&n| c.elements(n)).collect();
                    for inners in cartesian(&choices) {
                        match c.compose(outer, &inners) {
                            Ok(r) => {
                                composition.insert((outer, inners), r);
                            }
                            Err(OperadError::Truncated(_)) => {}
                            Err(e) => return Err(e),
                        }
                    }
                }
            }
        }
        let mut action = HashMap::new();
        for n in 0..=cap {
            for x in c.elements(n) {
                for sigma in Permutation::all(n) {
                    action.insert((x, sigma.clone()), c.act(x, &sigma)?);
                }
            }
        }
        Ok(TabulatedOperad {
            name: c.name(),
            carriers,
            unit: c.unit(),
            composition,
            action,
        })
    }

    pub fn set_composition(&mut self, outer: Op, inners: Vec<Op>, result: Op) {
        self.composition.insert((outer, inners), result);
    }
}

impl SetOperad for TabulatedOperad {
    fn name(&self) -> String {
        self.name.clone()
    }
    fn arity_cap(&self) -> usize {
        self.carriers.len().saturating_sub(1)
    }
    fn carrier_size(&self, arity: usize) -> usize {
        self.carriers.get(arity).map_or(0, |c| c.len())
    }
    fn label(&self, op: Op) -> String {
        self.carriers[op.arity][op.index].clone()
    }
    fn unit(&self) -> Op {
        self.unit
    }
    fn compose(&self, outer: Op, inners: &[Op]) -> Result<Op, OperadError> {
        composite_arity(self, outer, inners)?;
        self.composition
            .get(&(outer, inners.to_vec()))
            .copied()
            .ok_or_else(|| OperadError::Untabulated(format!("γ({outer:?}; {inners:?})")))
    }
    fn act(&self, x: Op, sigma: &Permutation) -> Result<Op, OperadError> {
        check_action(self, x, sigma)?;
        self.action
            .get(&(x, sigma.clone()))
            .copied()
            .ok_or_else(|| OperadError::Untabulated(format!("{x:?}·{sigma}")))
    }
}

/// All `m`-tuples of non-negative integers with sum at most `max_sum`.
pub fn weak_compositions(m: usize, max_sum: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(m);
    fn rec(m: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for a in 0..=left {
            cur.push(a);
            rec(m, left - a, cur, out);
            cur.pop();
        }
    }
    rec(m, max_sum, &mut cur, &mut out);
    out
}

pub fn cartesian<T: Clone>(choices: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out = vec![Vec::with_capacity(choices.len())];
    for options in choices {
        let mut next = Vec::with_capacity(out.len() * options.len());
        for prefix in &out {
            for o in options {
                let mut v = prefix.clone();
                v.push(o.clone());
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// Evaluates a tree of named generators in `c`, folding `γ` bottom-up.
///
/// Each generator name must be the label of an element of `c` in the
/// generator's arity.
pub fn eval_tree(
    c: &dyn SetOperad,
    tree: &OperadTree<GeneratorSignature>,
) -> Result<Op, OperadError> {
    tree.validate()?;
    let n = tree.arity();
    if n > c.arity_cap() {
        return Err(OperadError::Overflow {
            arity: n,
            cap: c.arity_cap(),
        });
    }
    eval_standard(c, tree)
}

fn eval_standard(
    c: &dyn SetOperad,
    tree: &OperadTree<GeneratorSignature>,
) -> Result<Op, OperadError> {
    match tree {
        OperadTree::Leaf(_) => Ok(c.unit()),
        OperadTree::Node { op, children } => {
            if op.arity > c.arity_cap() {
                return Err(OperadError::Overflow {
                    arity: op.arity,
                    cap: c.arity_cap(),
                });
            }
            let x = c
                .find(op.arity, &op.name)
                .ok_or_else(|| OperadError::UnknownElement(op.name.clone()))?;
            let mut vals = Vec::with_capacity(children.len());
            for child in children {
                vals.push(eval_standard(c, &child.standardized())?);
            }
            let composed = c.compose(x, &vals)?;
            // children's leaves in block order give the relabelling τ: block → actual.
            let mut sorted = tree.leaves();
            sorted.sort_unstable();
            let rank = |s: usize| sorted.binary_search(&s).expect("leaf present");
            let mut tau = Vec::with_capacity(sorted.len());
            for child in children {
                let mut labels = child.leaves();
                labels.sort_unstable();
                tau.extend(labels.into_iter().map(rank));
            }
            let tau = Permutation::from_zero_based(tau)?;
            c.act(composed, &tau.inverse())
        }
    }
}
