use serde::Serialize;

use crate::simplicial::{FiniteSimplicialSet, Provenance, SimplicialMap};

use super::FiberedError;

/// A set-valued functor on the category of simplices of `base`, stored as
/// its total simplicial set with the projection to `base`: the fiber over
/// `s` is the preimage of `s`, and each simplicial operator acts on fibers
/// through the total space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberedSetObject {
    base: FiniteSimplicialSet,
    total: FiniteSimplicialSet,
    projection: SimplicialMap,
}

impl FiberedSetObject {
    /// Checks the simplicial identities on the total space and that the
    /// projection commutes with every operator, which is functoriality.
    pub fn new(base: FiniteSimplicialSet, total: FiniteSimplicialSet, projection: SimplicialMap) -> Result<Self, FiberedError> {
        if base.cap() != total.cap() {
            return Err(FiberedError::BaseMismatch(format!(
                "base has cap {}, total space {}",
                base.cap(),
                total.cap()
            )));
        }
        let report = total.check_identities();
        if let Some(f) = report.failures.first() {
            return Err(FiberedError::NotFunctorial(format!("{} at level {}", f.identity, f.level)));
        }
        projection
            .check(&total, &base)
            .map_err(|e| FiberedError::NotFunctorial(e.to_string()))?;
        Ok(FiberedSetObject {
            base,
            total,
            projection,
        })
    }

    /// A family of sets over a set, both viewed as constant simplicial sets.
    pub fn over_discrete(base: &[String], fibers: &[Vec<String>], cap: usize) -> Result<Self, FiberedError> {
        if base.len() != fibers.len() {
            return Err(FiberedError::BaseMismatch(format!(
                "{} base points, {} fibers",
                base.len(),
                fibers.len()
            )));
        }
        let names: Vec<String> = fibers.iter().flatten().cloned().collect();
        let over: Vec<usize> = fibers
            .iter()
            .enumerate()
            .flat_map(|(b, f)| std::iter::repeat_n(b, f.len()))
            .collect();
        let total = FiniteSimplicialSet::discrete(&names, cap);
        let projection = SimplicialMap {
            levels: vec![over; cap + 1],
        };
        FiberedSetObject::new(FiniteSimplicialSet::discrete(base, cap), total, projection)
    }

    pub fn base(&self) -> &FiniteSimplicialSet {
        &self.base
    }

    pub fn total(&self) -> &FiniteSimplicialSet {
        &self.total
    }

    pub fn projection(&self) -> &SimplicialMap {
        &self.projection
    }

    /// Elements of the total space over `s ∈ Sₙ`.
    pub fn fiber(&self, n: usize, s: usize) -> Vec<usize> {
        (0..self.total.size(n)).filter(|&e| self.projection.levels[n][e] == s).collect()
    }

    pub fn fiber_sizes(&self, n: usize) -> Vec<usize> {
        (0..self.base.size(n)).map(|s| self.fiber(n, s).len()).collect()
    }

    /// `F(θ): F_s → F_{θ*s}` as pairs of total-space indices.
    pub fn fiber_map(&self, theta: &[usize], n: usize, s: usize) -> Result<Vec<(usize, usize)>, FiberedError> {
        self.fiber(n, s)
            .into_iter()
            .map(|e| Ok((e, self.total.apply_operator(theta, n, e)?)))
            .collect()
    }

    /// `i*F = F ∘ ī` for `i: S → base`: the fiber over `s` is a copy of the
    /// fiber over `i(s)`.
    pub fn pullback(&self, i: &SimplicialMap, source: &FiniteSimplicialSet) -> Result<Self, FiberedError> {
        i.check(source, &self.base)
            .map_err(|e| FiberedError::BaseMismatch(e.to_string()))?;
        let cap = source.cap();
        let fibers: Vec<Vec<Vec<usize>>> = (0..=cap)
            .map(|n| (0..self.base.size(n)).map(|t| self.fiber(n, t)).collect())
            .collect();
        let keys: Vec<Vec<(usize, usize)>> = (0..=cap)
            .map(|n| {
                (0..source.size(n))
                    .flat_map(|s| fibers[n][i.levels[n][s]].iter().map(move |&e| (s, e)))
                    .collect()
            })
            .collect();
        let total = FiniteSimplicialSet::from_model(
            cap,
            |n| keys[n].clone(),
            |n, k, &(s, e)| (source.face(n, k, s), self.total.face(n, k, e)),
            |n, k, &(s, e)| (source.degeneracy(n, k, s), self.total.degeneracy(n, k, e)),
            |&(s, e)| format!("({s},{e})"),
        )?
        .with_provenance(Provenance::new("pullback", &[]));
        let projection = SimplicialMap {
            levels: keys.iter().map(|ks| ks.iter().map(|&(s, _)| s).collect()).collect(),
        };
        FiberedSetObject::new(source.clone(), total, projection)
    }

    /// The colimit over the category of simplices: every fiber, glued along
    /// all fiber maps. Returned as classes of vertices of the total space.
    pub fn collapse(&self) -> Vec<Vec<usize>> {
        self.total.pi0()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn interval_cover() -> FiberedSetObject {
        let base = FiniteSimplicialSet::simplex(1, 2);
        let total = base.disjoint_union(&base);
        let n = |k: usize| base.size(k);
        let projection = SimplicialMap {
            levels: (0..=2).map(|k| (0..2 * n(k)).map(|e| e % n(k)).collect()).collect(),
        };
        FiberedSetObject::new(base, total, projection).unwrap()
    }

    #[test]
    fn discrete_family() {
        let f = FiberedSetObject::over_discrete(&names(&["a", "b"]), &[names(&["p", "q"]), names(&[])], 0).unwrap();
        assert_eq!(f.fiber_sizes(0), vec![2, 0]);
        assert_eq!(f.collapse().len(), 2);
    }

    #[test]
    fn point_base_collapses_to_its_fiber() {
        let f = FiberedSetObject::over_discrete(&names(&["*"]), &[names(&["p", "q", "r"])], 2).unwrap();
        assert_eq!(f.collapse().len(), 3);
        let empty = FiberedSetObject::over_discrete(&names(&["*"]), &[vec![]], 1).unwrap();
        assert!(empty.collapse().is_empty());
    }

    #[test]
    fn trivial_cover_collapses_to_one_fiber() {
        let f = interval_cover();
        assert_eq!(f.fiber_sizes(0), vec![2, 2]);
        assert_eq!(f.collapse().len(), 2);
        let map = f.fiber_map(&[0, 0], 1, 1).unwrap();
        assert_eq!(map.len(), 2);
    }

    #[test]
    fn pullback_along_identity() {
        let f = interval_cover();
        let id = SimplicialMap::identity(f.base());
        let g = f.pullback(&id, f.base()).unwrap();
        assert_eq!(g.total().sizes(), f.total().sizes());
        assert_eq!(g.collapse().len(), f.collapse().len());
        for n in 0..=2 {
            for s in 0..f.base().size(n) {
                assert_eq!(g.fiber(n, s).len(), f.fiber(n, s).len());
            }
        }
    }

    #[test]
    fn pullback_to_a_point() {
        let f = interval_cover();
        let pt = FiniteSimplicialSet::simplex(0, 2);
        let mut v = 1;
        let mut levels = vec![vec![v]];
        for n in 0..2 {
            v = f.base().degeneracy(n, 0, v);
            levels.push(vec![v]);
        }
        let vertex = SimplicialMap { levels };
        let g = f.pullback(&vertex, &pt).unwrap();
        assert_eq!(g.total().sizes(), vec![2, 2, 2]);
        assert_eq!(g.collapse().len(), 2);
    }

    #[test]
    fn base_mismatch() {
        let f = interval_cover();
        let pt = FiniteSimplicialSet::simplex(0, 2);
        let bad = SimplicialMap {
            levels: vec![vec![7]; 3],
        };
        assert!(matches!(f.pullback(&bad, &pt), Err(FiberedError::BaseMismatch(_))));
    }

    #[test]
    fn broken_functoriality_rejected() {
        let base = FiniteSimplicialSet::simplex(1, 1);
        let total = base.clone();
        let mut projection = SimplicialMap::identity(&base);
        projection.levels[0].swap(0, 1);
        assert!(FiberedSetObject::new(base, total, projection).is_err());
    }
}
