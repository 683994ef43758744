use std::collections::BTreeSet;

use serde::Serialize;

use crate::operad::{Op, OperadError, Permutation, SetOperad};

use super::FiberedError;

/// The class of `(y, x₁…xₘ)` in `C(free + m) ×_{Σₘ} Tᵐ`, where `Σₘ` moves
/// the last `m` inputs of `y` together with the `xᵢ`.
///
/// Built only through [`Orbit::canonical`], which picks the
/// lexicographically least representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Orbit<T> {
    op: Op,
    free: usize,
    inputs: Vec<T>,
}

/// Things with a number of generators below them.
pub trait Weighted {
    fn weight(&self) -> usize;
}

impl Weighted for usize {
    fn weight(&self) -> usize {
        1
    }
}

impl<T: Weighted> Weighted for Orbit<T> {
    fn weight(&self) -> usize {
        self.inputs.iter().map(Weighted::weight).sum()
    }
}

impl<T: Clone + Ord> Orbit<T> {
    pub fn canonical(c: &dyn SetOperad, op: Op, free: usize, inputs: Vec<T>) -> Result<Self, OperadError> {
        let m = inputs.len();
        if op.arity != free + m {
            return Err(OperadError::ArityMismatch {
                expected: op.arity,
                found: free + m,
            });
        }
        let mut best: Option<Orbit<T>> = None;
        for sigma in Permutation::all(m) {
            let full = Permutation::block_sum(&[Permutation::identity(free), sigma.clone()]);
            let cand = Orbit {
                op: c.act(op, &full)?,
                free,
                inputs: (0..m).map(|i| inputs[sigma.apply0(i)].clone()).collect(),
            };
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
        Ok(best.expect("Σₘ is non-empty"))
    }

    pub fn op(&self) -> Op {
        self.op
    }

    pub fn free(&self) -> usize {
        self.free
    }

    pub fn inputs(&self) -> &[T] {
        &self.inputs
    }

    /// Applies `f` to every input and re-canonicalizes.
    pub fn map<U: Clone + Ord>(
        &self,
        c: &dyn SetOperad,
        f: impl Fn(&T) -> Result<U, OperadError>,
    ) -> Result<Orbit<U>, OperadError> {
        let inputs = self.inputs.iter().map(f).collect::<Result<Vec<_>, _>>()?;
        Orbit::canonical(c, self.op, self.free, inputs)
    }

    /// Every representative of the class, one per permutation.
    pub fn representatives(&self, c: &dyn SetOperad) -> Result<Vec<(Op, Vec<T>)>, OperadError> {
        let m = self.inputs.len();
        Permutation::all(m)
            .map(|sigma| {
                let full = Permutation::block_sum(&[Permutation::identity(self.free), sigma.clone()]);
                Ok((
                    c.act(self.op, &full)?,
                    (0..m).map(|i| self.inputs[sigma.apply0(i)].clone()).collect(),
                ))
            })
            .collect()
    }
}

impl<T: Clone + Ord> Orbit<Orbit<T>> {
    /// `(y; r₁…rₘ) ↦ (γ(y; 1,…,1, r₁…rₘ), inputs of the rᵢ in order)`.
    ///
    /// With `free = 0` this is the multiplication of the monad; otherwise it
    /// is the structure map `D_ℓC → D_ℓ`.
    pub fn flatten(&self, c: &dyn SetOperad) -> Result<Orbit<T>, OperadError> {
        let mut inners = vec![c.unit(); self.free];
        inners.extend(self.inputs.iter().map(|r| r.op));
        let op = c.compose(self.op, &inners)?;
        let inputs = self.inputs.iter().flat_map(|r| r.inputs.iter().cloned()).collect();
        Orbit::canonical(c, op, self.free, inputs)
    }
}

impl Orbit<usize> {
    pub fn label(&self, c: &dyn SetOperad, names: &[String]) -> String {
        let xs: Vec<&str> = self.inputs.iter().map(|&i| names[i].as_str()).collect();
        format!("{}|{}", c.label(self.op), xs.join(","))
    }
}

/// Canonical classes `C(free + m) ×_{Σₘ} Tᵐ` over all `m` with
/// `free + m ≤ cap` and total weight at most `max_weight`.
pub fn orbits_upto<T: Clone + Ord + Weighted>(
    c: &dyn SetOperad,
    free: usize,
    items: &[T],
    max_weight: usize,
) -> Result<Vec<Orbit<T>>, OperadError> {
    let mut out = BTreeSet::new();
    for m in 0..=c.arity_cap().saturating_sub(free) {
        if free + m > c.arity_cap() {
            break;
        }
        for tuple in weighted_tuples(items, m, max_weight) {
            for op in c.elements(free + m) {
                out.insert(Orbit::canonical(c, op, free, tuple.clone())?);
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// All `m`-tuples from `items` whose weights sum to at most `max_weight`.
pub fn weighted_tuples<T: Clone + Weighted>(items: &[T], m: usize, max_weight: usize) -> Vec<Vec<T>> {
    fn go<T: Clone + Weighted>(items: &[T], m: usize, left: usize, cur: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for it in items {
            let w = it.weight();
            if w <= left {
                cur.push(it.clone());
                go(items, m, left - w, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(items, m, max_weight, &mut Vec::with_capacity(m), &mut out);
    out
}

/// `D_ℓX` truncated to at most `cap` generators; `ℓ = 0` gives the free
/// algebra `CX`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TruncatedAlgebra {
    pub operad: String,
    pub free: usize,
    pub generators: Vec<String>,
    pub cap: usize,
    #[serde(skip)]
    pub levels: Vec<Vec<Orbit<usize>>>,
    #[serde(rename = "levels")]
    pub labels: Vec<Vec<String>>,
}

impl TruncatedAlgebra {
    pub fn sizes(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    pub fn len(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn elements(&self) -> impl Iterator<Item = &Orbit<usize>> {
        self.levels.iter().flatten()
    }
}

pub(crate) fn require_cap(c: &dyn SetOperad, needed: usize) -> Result<(), FiberedError> {
    if c.arity_cap() < needed {
        return Err(FiberedError::CapExceeded {
            needed,
            cap: c.arity_cap(),
        });
    }
    Ok(())
}

/// `CX = ∐ C(n) ×_{Σₙ} Xⁿ` for `n ≤ cap`.
pub fn free_algebra(c: &dyn SetOperad, generators: &[String], cap: usize) -> Result<TruncatedAlgebra, FiberedError> {
    d_functor(c, 0, generators, cap)
}

/// `D_ℓX = ∐ C(n + ℓ) ×_{Σₙ} Xⁿ` for `n ≤ cap`.
pub fn d_functor(c: &dyn SetOperad, ell: usize, generators: &[String], cap: usize) -> Result<TruncatedAlgebra, FiberedError> {
    require_cap(c, cap + ell)?;
    let xs: Vec<usize> = (0..generators.len()).collect();
    let mut levels = vec![Vec::new(); cap + 1];
    for o in orbits_upto(c, ell, &xs, cap)? {
        levels[o.inputs.len()].push(o);
    }
    let labels = levels
        .iter()
        .map(|l| l.iter().map(|o| o.label(c, generators)).collect())
        .collect();
    Ok(TruncatedAlgebra {
        operad: c.name(),
        free: ell,
        generators: generators.to_vec(),
        cap,
        levels,
        labels,
    })
}

/// Counts from [`check_action_laws`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub well_defined: usize,
    pub unit: usize,
    pub associativity: usize,
    /// Associativity instances whose intermediate arity leaves the cap.
    pub beyond_cap: usize,
    pub failures: Vec<String>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(&mut self, msg: String) {
        if self.failures.len() < 16 {
            self.failures.push(msg);
        }
    }
}

/// Laws of the structure map `D_ℓ C X → D_ℓ X` below the cap: it does not
/// depend on representatives, `η` is a unit on both sides (the left unit
/// law only when `ℓ = 0`), and the two maps `D_ℓ C C X → D_ℓ X` agree.
///
/// With `ℓ = 0` these are the monad laws of `C`.
pub fn check_action_laws(
    c: &dyn SetOperad,
    ell: usize,
    generators: usize,
    cap: usize,
) -> Result<LawReport, FiberedError> {
    require_cap(c, cap + ell)?;
    let xs: Vec<usize> = (0..generators).collect();
    let cx = orbits_upto(c, 0, &xs, cap)?;
    let dcx = orbits_upto(c, ell, &cx, cap)?;
    let ccx = orbits_upto(c, 0, &cx, cap)?;
    let dccx = orbits_upto(c, ell, &ccx, cap)?;
    let eta = |x: &usize| Orbit::canonical(c, c.unit(), 0, vec![*x]);
    let mut report = LawReport::default();

    for w in &dcx {
        let target = w.flatten(c)?;
        for (op, inputs) in w.representatives(c)? {
            report.well_defined += 1;
            let raw = Orbit {
                op,
                free: ell,
                inputs,
            };
            if raw.flatten(c)? != target {
                report.fail(format!("representatives of {w:?} disagree"));
            }
        }
    }

    for d in orbits_upto(c, ell, &xs, cap)? {
        report.unit += 1;
        if d.map(c, eta)?.flatten(c)? != d {
            report.fail(format!("η inside fails on {d:?}"));
        }
    }
    if ell == 0 {
        for r in &cx {
            report.unit += 1;
            let wrapped = Orbit::canonical(c, c.unit(), 0, vec![r.clone()])?;
            if wrapped.flatten(c)? != *r {
                report.fail(format!("η outside fails on {r:?}"));
            }
        }
    }

    for big in &dccx {
        let inner_first = big.map(c, |w| w.flatten(c)).and_then(|d| d.flatten(c));
        let outer_first = big.flatten(c).and_then(|d| d.flatten(c));
        match (inner_first, outer_first) {
            (Ok(a), Ok(b)) => {
                report.associativity += 1;
                if a != b {
                    report.fail(format!("associativity fails on {big:?}"));
                }
            }
            (Err(OperadError::Overflow { .. }), _) | (_, Err(OperadError::Overflow { .. })) => report.beyond_cap += 1,
            (Err(e), _) | (_, Err(e)) => return Err(e.into()),
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operad::{Assoc, Comm};

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| ["x", "y", "z"][i].to_string()).collect()
    }

    #[test]
    fn comm_one_generator() {
        let a = free_algebra(&Comm::new(3), &names(1), 3).unwrap();
        assert_eq!(a.sizes(), vec![1, 1, 1, 1]);
        assert_eq!(a.labels[2], vec!["c2|x,x"]);
    }

    #[test]
    fn no_generators() {
        let a = free_algebra(&Assoc::new(3), &[], 3).unwrap();
        assert_eq!(a.sizes(), vec![1, 0, 0, 0]);
    }

    #[test]
    fn assoc_orbits_are_words() {
        let a = free_algebra(&Assoc::new(3), &names(2), 3).unwrap();
        assert_eq!(a.sizes(), vec![1, 2, 4, 8]);
        let c = free_algebra(&Comm::new(3), &names(2), 3).unwrap();
        assert_eq!(c.sizes(), vec![1, 2, 3, 4]);
    }

    #[test]
    fn d_functor_levels() {
        assert_eq!(d_functor(&Assoc::new(2), 1, &names(1), 1).unwrap().sizes(), vec![1, 2]);
        assert_eq!(d_functor(&Comm::new(4), 1, &names(1), 3).unwrap().len(), 4);
        assert_eq!(
            d_functor(&Comm::new(3), 0, &names(2), 3).unwrap(),
            free_algebra(&Comm::new(3), &names(2), 3).unwrap()
        );
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            d_functor(&Comm::new(3), 1, &names(1), 3),
            Err(FiberedError::CapExceeded { needed: 4, cap: 3 })
        ));
    }

    #[test]
    fn monad_laws_small() {
        for ell in 0..=1 {
            let r = check_action_laws(&Assoc::new(3), ell, 1, 2).unwrap();
            assert!(r.passed(), "{:?}", r.failures);
            assert!(r.associativity > 0);
        }
    }

    #[test]
    fn canonical_representative_is_least() {
        let c = Assoc::new(2);
        let bad = Orbit {
            op: Op::new(2, 1),
            free: 0,
            inputs: vec![0usize, 1],
        };
        let good = Orbit::canonical(&c, Op::new(2, 1), 0, vec![0usize, 1]).unwrap();
        assert_ne!(bad, good);
        assert_eq!(good.inputs, vec![1, 0]);
    }
}
