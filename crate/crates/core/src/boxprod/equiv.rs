use std::collections::{HashMap, VecDeque};

use super::{BoxError, BoxGenerator, BoxWord, RewriteStep, Rewriter};

/// A domain-specific source of candidate traces; every proposal is checked
/// by replay before it is trusted.
pub trait EquivalenceStrategy<G>: Sync {
    fn name(&self) -> &str;
    fn propose(&self, w1: &BoxWord<G>, w2: &BoxWord<G>) -> Option<Vec<RewriteStep<G>>>;
}

#[derive(Clone, Debug, PartialEq)]
pub enum EquivalenceVerdict<G> {
    /// Replaying `trace` on the first word yields the second.
    Equal { trace: Vec<RewriteStep<G>> },
    /// Both closures were explored completely and are disjoint.
    Distinct {
        left_closure: Vec<BoxWord<G>>,
        right_closure: Vec<BoxWord<G>>,
    },
    Unknown { explored: usize },
}

impl<G> EquivalenceVerdict<G> {
    pub fn is_equal(&self) -> bool {
        matches!(self, EquivalenceVerdict::Equal { .. })
    }
    pub fn is_distinct(&self) -> bool {
        matches!(self, EquivalenceVerdict::Distinct { .. })
    }
    pub fn label(&self) -> &'static str {
        match self {
            EquivalenceVerdict::Equal { .. } => "equal",
            EquivalenceVerdict::Distinct { .. } => "distinct",
            EquivalenceVerdict::Unknown { .. } => "unknown",
        }
    }
}

struct Closure<G> {
    words: Vec<BoxWord<G>>,
    parent: Vec<Option<(usize, RewriteStep<G>)>>,
    index: HashMap<BoxWord<G>, usize>,
    queue: VecDeque<usize>,
    only_symmetric: bool,
}

impl<G: BoxGenerator> Closure<G> {
    fn new(start: &BoxWord<G>) -> Self {
        let mut index = HashMap::new();
        index.insert(start.clone(), 0);
        Closure {
            words: vec![start.clone()],
            parent: vec![None],
            index,
            queue: VecDeque::from([0]),
            only_symmetric: true,
        }
    }

    fn path_to(&self, mut i: usize) -> Vec<RewriteStep<G>> {
        let mut steps = Vec::new();
        while let Some((p, step)) = &self.parent[i] {
            steps.push(step.clone());
            i = *p;
        }
        steps.reverse();
        steps
    }
}

impl<G: BoxGenerator> Rewriter<'_, G> {
    pub fn equivalent(
        &self,
        w1: &BoxWord<G>,
        w2: &BoxWord<G>,
        budget: usize,
    ) -> Result<EquivalenceVerdict<G>, BoxError> {
        self.equivalent_with(w1, w2, budget, &[])
    }

    /// Decides `w1 ~ w2` within `budget` explored words.
    ///
    /// Strategies are tried first; then closures under single moves are grown
    /// from both ends until they meet. `Distinct` is only returned for free
    /// colours when every move seen was symmetric, so that the closures are
    /// whole equivalence classes.
    pub fn equivalent_with(
        &self,
        w1: &BoxWord<G>,
        w2: &BoxWord<G>,
        budget: usize,
        strategies: &[&dyn EquivalenceStrategy<G>],
    ) -> Result<EquivalenceVerdict<G>, BoxError> {
        if budget == 0 {
            return Err(BoxError::ZeroBudget);
        }
        if w1 == w2 {
            return Ok(EquivalenceVerdict::Equal { trace: Vec::new() });
        }
        for s in strategies {
            if let Some(trace) = s.propose(w1, w2) {
                if matches!(self.replay(w1, &trace), Ok(ref end) if end == w2) {
                    return Ok(EquivalenceVerdict::Equal { trace });
                }
            }
        }
        self.search(w1, w2, budget)
    }

    fn search(
        &self,
        w1: &BoxWord<G>,
        w2: &BoxWord<G>,
        budget: usize,
    ) -> Result<EquivalenceVerdict<G>, BoxError> {
        let mut sides = [Closure::new(w1), Closure::new(w2)];
        let mut explored = 2;
        let mut turn = 0;
        loop {
            if sides[0].queue.is_empty() && sides[1].queue.is_empty() {
                break;
            }
            if sides[turn].queue.is_empty() {
                turn = 1 - turn;
            }
            let current = sides[turn].queue.pop_front().expect("non-empty queue");
            let word = sides[turn].words[current].clone();
            for (step, next) in self.moves(&word) {
                if !step.is_symmetric() {
                    sides[turn].only_symmetric = false;
                }
                if sides[turn].index.contains_key(&next) {
                    continue;
                }
                let id = sides[turn].words.len();
                sides[turn].words.push(next.clone());
                sides[turn].parent.push(Some((current, step)));
                sides[turn].index.insert(next.clone(), id);
                sides[turn].queue.push_back(id);
                explored += 1;
                if let Some(&other) = sides[1 - turn].index.get(&next) {
                    let (a, ia, b, ib) = if turn == 0 {
                        (&sides[0], id, &sides[1], other)
                    } else {
                        (&sides[0], other, &sides[1], id)
                    };
                    return self.join(w1, w2, a.path_to(ia), b.path_to(ib));
                }
                if explored >= budget {
                    return Ok(EquivalenceVerdict::Unknown { explored });
                }
            }
            turn = 1 - turn;
        }
        let certified = self.algebra.is_free() && sides.iter().all(|s| s.only_symmetric);
        if certified {
            let [a, b] = sides;
            Ok(EquivalenceVerdict::Distinct {
                left_closure: a.words,
                right_closure: b.words,
            })
        } else {
            Ok(EquivalenceVerdict::Unknown { explored })
        }
    }

    fn join(
        &self,
        w1: &BoxWord<G>,
        w2: &BoxWord<G>,
        forward: Vec<RewriteStep<G>>,
        backward: Vec<RewriteStep<G>>,
    ) -> Result<EquivalenceVerdict<G>, BoxError> {
        let (inverse, _) = self.invert_trace(w2, &backward)?;
        let mut trace = forward;
        trace.extend(inverse);
        let end = self.replay(w1, &trace)?;
        debug_assert!(end == *w2);
        if end != *w2 {
            return Ok(EquivalenceVerdict::Unknown { explored: 0 });
        }
        Ok(EquivalenceVerdict::Equal { trace })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxprod::{interchange_perm, FreeColours, TableColours};
    use crate::operad::{Assoc, GeneratorSignature};

    fn w(s: &str) -> BoxWord<GeneratorSignature> {
        BoxWord::parse(s).unwrap()
    }

    #[test]
    fn reflexive_empty_trace() {
        let free = FreeColours::default();
        let r = Rewriter::new(&free);
        let a = w("(L:alpha (R:beta 1 2) 3)");
        assert_eq!(
            r.equivalent(&a, &a, 10).unwrap(),
            EquivalenceVerdict::Equal { trace: vec![] }
        );
    }

    #[test]
    fn relation_in_one_step() {
        let free = FreeColours::default();
        let r = Rewriter::new(&free);
        let lhs = w("(L:alpha (R:beta 1 2) (R:beta 3 4))");
        let rhs = BoxWord::from_planar(
            w("(R:beta (L:alpha 1 2) (L:alpha 3 4))").into_tree(),
            &interchange_perm(2, 2),
        )
        .unwrap();
        match r.equivalent(&lhs, &rhs, 100).unwrap() {
            EquivalenceVerdict::Equal { trace } => {
                assert_eq!(trace.len(), 1);
                assert_eq!(r.replay(&lhs, &trace).unwrap(), rhs);
            }
            v => panic!("expected equal, got {}", v.label()),
        }
    }

    #[test]
    fn missing_sigma_is_distinct() {
        let free = FreeColours::default();
        let r = Rewriter::new(&free);
        let lhs = w("(L:alpha (R:beta 1 2) (R:beta 3 4))");
        let rhs = w("(R:beta (L:alpha 1 2) (L:alpha 3 4))");
        match r.equivalent(&lhs, &rhs, 100).unwrap() {
            EquivalenceVerdict::Distinct {
                left_closure,
                right_closure,
            } => {
                assert_eq!(left_closure.len(), 2);
                assert_eq!(right_closure.len(), 2);
                assert!(left_closure.iter().all(|x| !right_closure.contains(x)));
            }
            v => panic!("expected distinct, got {}", v.label()),
        }
    }

    #[test]
    fn tables_never_certify_distinct() {
        let a = Assoc::new(3);
        let t = TableColours::new(&a, &a);
        let r = Rewriter::new(&t);
        let lhs = w("(L:[1,2] 1 2)");
        let rhs = w("(L:[2,1] 1 2)");
        assert!(matches!(
            r.equivalent(&lhs, &rhs, 100).unwrap(),
            EquivalenceVerdict::Unknown { .. }
        ));
    }

    #[test]
    fn meet_through_collapse() {
        let a = Assoc::new(4);
        let t = TableColours::new(&a, &a);
        let r = Rewriter::new(&t);
        let lhs = w("(L:[1,2] (L:[1,2] 1 2) 3)");
        let rhs = w("(L:[1,2] 1 (L:[1,2] 2 3))");
        let v = r.equivalent(&lhs, &rhs, 1000).unwrap();
        match v {
            EquivalenceVerdict::Equal { trace } => assert_eq!(r.replay(&lhs, &trace).unwrap(), rhs),
            v => panic!("expected equal, got {}", v.label()),
        }
    }

    #[test]
    fn zero_budget_is_an_error() {
        let free = FreeColours::default();
        let r = Rewriter::new(&free);
        let a = w("(L:alpha 1)");
        assert_eq!(r.equivalent(&a, &a, 0), Err(BoxError::ZeroBudget));
    }
}
