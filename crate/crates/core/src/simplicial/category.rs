use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{FiniteSimplicialSet, Provenance, SimplicialError};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Morphism {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// A finite category with a total composition table on composable pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CategoryFile", into = "CategoryFile")]
pub struct FiniteCategory {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<usize>,
    /// `comp[g][f] = g∘f` when `target(f) = source(g)`.
    comp: Vec<Vec<Option<usize>>>,
}

/// Wire format: composition as `[g, f, g∘f]` triples.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CategoryFile {
    pub objects: Vec<String>,
    pub morphisms: Vec<Morphism>,
    pub identities: Vec<usize>,
    pub composition: Vec<[usize; 3]>,
}

impl From<FiniteCategory> for CategoryFile {
    fn from(c: FiniteCategory) -> Self {
        let mut composition = Vec::new();
        for (g, row) in c.comp.iter().enumerate() {
            for (f, h) in row.iter().enumerate() {
                if let Some(h) = h {
                    composition.push([g, f, *h]);
                }
            }
        }
        CategoryFile {
            objects: c.objects,
            morphisms: c.morphisms,
            identities: c.identities,
            composition,
        }
    }
}

impl TryFrom<CategoryFile> for FiniteCategory {
    type Error = SimplicialError;

    fn try_from(f: CategoryFile) -> Result<Self, Self::Error> {
        let n = f.morphisms.len();
        let mut table = vec![vec![None; n]; n];
        for [g, h, gh] in f.composition {
            if g >= n || h >= n || gh >= n {
                return Err(SimplicialError::NotACategory(format!("composition entry {g},{h},{gh}")));
            }
            table[g][h] = Some(gh);
        }
        FiniteCategory::new(f.objects, f.morphisms, f.identities, |g, h| table[g][h])
    }
}

impl FiniteCategory {
    /// Tabulates `compose(g, f) = g∘f` on composable pairs and checks the
    /// category axioms.
    pub fn new(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<usize>,
        compose: impl Fn(usize, usize) -> Option<usize>,
    ) -> Result<Self, SimplicialError> {
        let n = morphisms.len();
        let bad = |m: String| Err(SimplicialError::NotACategory(m));
        if identities.len() != objects.len() {
            return bad("one identity per object".into());
        }
        if morphisms.iter().any(|m| m.source >= objects.len() || m.target >= objects.len()) {
            return bad("morphism endpoint out of range".into());
        }
        for (x, &id) in identities.iter().enumerate() {
            if id >= n || morphisms[id].source != x || morphisms[id].target != x {
                return bad(format!("identity of {}", objects[x]));
            }
        }
        let mut comp = vec![vec![None; n]; n];
        for g in 0..n {
            for f in 0..n {
                if morphisms[f].target != morphisms[g].source {
                    continue;
                }
                let Some(h) = compose(g, f) else {
                    return bad(format!("{} ∘ {} undefined", morphisms[g].name, morphisms[f].name));
                };
                if h >= n || morphisms[h].source != morphisms[f].source || morphisms[h].target != morphisms[g].target {
                    return bad(format!("{} ∘ {} has the wrong endpoints", morphisms[g].name, morphisms[f].name));
                }
                comp[g][f] = Some(h);
            }
        }
        let c = FiniteCategory {
            objects,
            morphisms,
            identities,
            comp,
        };
        c.check_axioms()?;
        Ok(c)
    }

    fn check_axioms(&self) -> Result<(), SimplicialError> {
        let n = self.morphisms.len();
        for f in 0..n {
            let m = &self.morphisms[f];
            if self.compose(self.identities[m.target], f) != Some(f) || self.compose(f, self.identities[m.source]) != Some(f) {
                return Err(SimplicialError::NotACategory(format!("unit law fails at {}", m.name)));
            }
        }
        for f in 0..n {
            for g in 0..n {
                let Some(gf) = self.compose(g, f) else { continue };
                for h in 0..n {
                    let Some(hg) = self.compose(h, g) else { continue };
                    if self.compose(h, gf) != self.compose(hg, f) {
                        return Err(SimplicialError::NotACategory(format!(
                            "associativity fails at ({}, {}, {})",
                            self.morphisms[h].name, self.morphisms[g].name, self.morphisms[f].name
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn identity(&self, x: usize) -> usize {
        self.identities[x]
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.identities[self.morphisms[f].source] == f
    }

    pub fn source(&self, f: usize) -> usize {
        self.morphisms[f].source
    }

    pub fn target(&self, f: usize) -> usize {
        self.morphisms[f].target
    }

    /// `g∘f`, if composable.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        self.comp[g][f]
    }

    /// Objects only.
    pub fn discrete(names: &[&str]) -> Self {
        let objects: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let morphisms = objects
            .iter()
            .enumerate()
            .map(|(i, o)| Morphism {
                name: format!("id_{o}"),
                source: i,
                target: i,
            })
            .collect();
        let identities = (0..objects.len()).collect();
        FiniteCategory::new(objects, morphisms, identities, |g, f| (g == f).then_some(f)).expect("discrete")
    }

    /// The poset on `0..n` generated by `le(i, j)`, which must be reflexive
    /// and transitive.
    pub fn poset(names: &[String], le: impl Fn(usize, usize) -> bool) -> Result<Self, SimplicialError> {
        let n = names.len();
        let mut morphisms = Vec::new();
        let mut index = HashMap::new();
        let mut identities = vec![0; n];
        for i in 0..n {
            for j in 0..n {
                if le(i, j) {
                    if i == j {
                        identities[i] = morphisms.len();
                    }
                    index.insert((i, j), morphisms.len());
                    morphisms.push(Morphism {
                        name: format!("{}<={}", names[i], names[j]),
                        source: i,
                        target: j,
                    });
                }
            }
        }
        if (0..n).any(|i| !index.contains_key(&(i, i))) {
            return Err(SimplicialError::NotACategory("order is not reflexive".into()));
        }
        let ends: Vec<(usize, usize)> = morphisms.iter().map(|m| (m.source, m.target)).collect();
        FiniteCategory::new(names.to_vec(), morphisms, identities, |g, f| {
            index.get(&(ends[f].0, ends[g].1)).copied()
        })
    }

    /// `• → •` with one non-identity map.
    pub fn arrow() -> Self {
        let names = vec!["a".to_string(), "b".to_string()];
        FiniteCategory::poset(&names, |i, j| i <= j).expect("total order")
    }

    /// Two objects and inverse isomorphisms between them.
    pub fn iso_pair() -> Self {
        let names = vec!["a".to_string(), "b".to_string()];
        FiniteCategory::poset(&names, |_, _| true).expect("chaotic order")
    }

    /// One object with the given monoid table `mul[a][b] = a·b`, unit `0`.
    pub fn from_monoid(table: &[Vec<usize>]) -> Result<Self, SimplicialError> {
        let morphisms = (0..table.len())
            .map(|m| Morphism {
                name: format!("m{m}"),
                source: 0,
                target: 0,
            })
            .collect();
        FiniteCategory::new(vec!["*".into()], morphisms, vec![0], |g, f| table.get(g)?.get(f).copied())
    }

    pub fn product(&self, other: &Self) -> Self {
        let b = other.morphisms.len();
        let ob = other.objects.len();
        let objects = self
            .objects
            .iter()
            .flat_map(|x| other.objects.iter().map(move |y| format!("({x},{y})")))
            .collect();
        let morphisms = self
            .morphisms
            .iter()
            .flat_map(|f| {
                other.morphisms.iter().map(move |g| Morphism {
                    name: format!("({},{})", f.name, g.name),
                    source: f.source * ob + g.source,
                    target: f.target * ob + g.target,
                })
            })
            .collect();
        let identities = (0..self.objects.len() * ob)
            .map(|p| self.identities[p / ob] * b + other.identities[p % ob])
            .collect();
        FiniteCategory::new(objects, morphisms, identities, |g, f| {
            Some(self.compose(g / b, f / b)? * b + other.compose(g % b, f % b)?)
        })
        .expect("product of categories")
    }

    /// Composable chains of `k` non-identity morphisms, for `k` up to
    /// `max_len`; errors if chains of length `max_len + 1` exist.
    pub fn nondegenerate_chains(&self, max_len: usize) -> Result<Vec<Vec<Chain>>, SimplicialError> {
        let mut levels: Vec<Vec<Chain>> = vec![(0..self.objects.len()).map(|x| Chain { start: x, arrows: vec![] }).collect()];
        let proper: Vec<usize> = (0..self.morphisms.len()).filter(|&f| !self.is_identity(f)).collect();
        loop {
            let prev = levels.last().expect("level 0");
            let mut next = Vec::new();
            for c in prev {
                let end = c.end(self);
                for &f in &proper {
                    if self.source(f) == end {
                        let mut arrows = c.arrows.clone();
                        arrows.push(f);
                        next.push(Chain { start: c.start, arrows });
                    }
                }
            }
            if next.is_empty() {
                return Ok(levels);
            }
            if levels.len() > max_len {
                return Err(SimplicialError::CapExceeded { cap: max_len });
            }
            levels.push(next);
        }
    }
}

/// A chain `x₀ → x₁ → … → x_k` of composable morphisms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chain {
    pub start: usize,
    pub arrows: Vec<usize>,
}

impl Chain {
    pub fn end(&self, c: &FiniteCategory) -> usize {
        self.arrows.last().map_or(self.start, |&f| c.target(f))
    }

    /// The objects `x₀, …, x_k`.
    pub fn vertices(&self, c: &FiniteCategory) -> Vec<usize> {
        let mut v = vec![self.start];
        v.extend(self.arrows.iter().map(|&f| c.target(f)));
        v
    }

    /// The simplicial face `dᵢ`.
    pub fn face(&self, c: &FiniteCategory, i: usize) -> Chain {
        let k = self.arrows.len();
        let mut arrows = self.arrows.clone();
        if i == 0 {
            let f = arrows.remove(0);
            Chain { start: c.target(f), arrows }
        } else if i == k {
            arrows.pop();
            Chain { start: self.start, arrows }
        } else {
            let f = arrows.remove(i - 1);
            arrows[i - 1] = c.compose(arrows[i - 1], f).expect("composable chain");
            Chain { start: self.start, arrows }
        }
    }

    /// The simplicial degeneracy `sᵢ`: an identity inserted at `xᵢ`.
    pub fn degeneracy(&self, c: &FiniteCategory, i: usize) -> Chain {
        let x = self.vertices(c)[i];
        let mut arrows = self.arrows.clone();
        arrows.insert(i, c.identity(x));
        Chain { start: self.start, arrows }
    }

    fn name(&self, c: &FiniteCategory) -> String {
        if self.arrows.is_empty() {
            return c.objects[self.start].clone();
        }
        let names: Vec<&str> = self.arrows.iter().map(|&f| c.morphisms[f].name.as_str()).collect();
        format!("({})", names.join(","))
    }
}

/// All composable chains of `k ≤ cap` morphisms, identities included.
pub(crate) fn chains(c: &FiniteCategory, cap: usize) -> Vec<Vec<Chain>> {
    let mut levels: Vec<Vec<Chain>> = vec![(0..c.objects.len()).map(|x| Chain { start: x, arrows: vec![] }).collect()];
    for _ in 0..cap {
        let prev = levels.last().expect("level 0");
        let mut next = Vec::new();
        for ch in prev {
            let end = ch.end(c);
            for f in 0..c.morphisms.len() {
                if c.source(f) == end {
                    let mut arrows = ch.arrows.clone();
                    arrows.push(f);
                    next.push(Chain { start: ch.start, arrows });
                }
            }
        }
        levels.push(next);
    }
    levels
}

/// The nerve up to level `cap`: composable `k`-chains.
pub fn nerve(c: &FiniteCategory, cap: usize) -> FiniteSimplicialSet {
    let levels = chains(c, cap);
    FiniteSimplicialSet::from_model(
        cap,
        |n| levels[n].clone(),
        |_, i, ch: &Chain| ch.face(c, i),
        |_, i, ch: &Chain| ch.degeneracy(c, i),
        |ch| ch.name(c),
    )
    .expect("nerve tables")
    .with_provenance(Provenance::new("nerve", &[&format!("{} objects, {} morphisms", c.objects.len(), c.morphisms.len())]))
}

/// A functor given on objects and morphisms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Functor {
    pub objects: Vec<usize>,
    pub morphisms: Vec<usize>,
}

impl Functor {
    pub fn check(&self, source: &FiniteCategory, target: &FiniteCategory) -> Result<(), SimplicialError> {
        let bad = |m: String| Err(SimplicialError::MapMismatch(m));
        if self.objects.len() != source.objects.len() || self.morphisms.len() != source.morphisms.len() {
            return bad("functor table sizes".into());
        }
        for (f, &ff) in self.morphisms.iter().enumerate() {
            if ff >= target.morphisms.len()
                || target.source(ff) != self.objects[source.source(f)]
                || target.target(ff) != self.objects[source.target(f)]
            {
                return bad(format!("endpoints of {}", source.morphisms[f].name));
            }
        }
        for (x, &fx) in self.objects.iter().enumerate() {
            if self.morphisms[source.identity(x)] != target.identity(fx) {
                return bad(format!("identity of {}", source.objects[x]));
            }
        }
        for g in 0..source.morphisms.len() {
            for f in 0..source.morphisms.len() {
                if let Some(gf) = source.compose(g, f) {
                    if target.compose(self.morphisms[g], self.morphisms[f]) != Some(self.morphisms[gf]) {
                        return bad(format!("composite {} ∘ {}", source.morphisms[g].name, source.morphisms[f].name));
                    }
                }
            }
        }
        Ok(())
    }
}

/// The subdivision `C′`: nondegenerate chains ordered by taking faces, with
/// the last-vertex functor `C′ → C`. Chains longer than `max_len` are
/// refused.
pub fn category_subdivision(c: &FiniteCategory, max_len: usize) -> Result<(FiniteCategory, Functor), SimplicialError> {
    let chains: Vec<Chain> = c.nondegenerate_chains(max_len)?.into_iter().flatten().collect();
    let index: BTreeMap<&Chain, usize> = chains.iter().enumerate().map(|(i, ch)| (ch, i)).collect();
    // below[x] = all chains reachable from x by nondegenerate faces, with the
    // vertex of x each one ends at
    let mut below: Vec<BTreeMap<usize, usize>> = Vec::with_capacity(chains.len());
    for ch in &chains {
        let mut found = BTreeMap::from([(index[ch], ch.arrows.len())]);
        let mut stack = vec![(ch.clone(), (0..=ch.arrows.len()).collect::<Vec<usize>>())];
        while let Some((cur, verts)) = stack.pop() {
            for i in 0..=cur.arrows.len() {
                if cur.arrows.is_empty() {
                    break;
                }
                let face = cur.face(c, i);
                if face.arrows.iter().any(|&f| c.is_identity(f)) {
                    continue;
                }
                let mut v = verts.clone();
                v.remove(i);
                let id = index[&face];
                let last = *v.last().expect("nonempty");
                if let Some(&prev) = found.get(&id) {
                    if prev != last {
                        return Err(SimplicialError::NotACategory(format!(
                            "{} is a face of {} in two ways",
                            face.name(c),
                            ch.name(c)
                        )));
                    }
                    continue;
                }
                found.insert(id, last);
                stack.push((face, v));
            }
        }
        below.push(found);
    }
    let names: Vec<String> = chains.iter().map(|ch| ch.name(c)).collect();
    let sub = FiniteCategory::poset(&names, |i, j| below[j].contains_key(&i))?;
    let objects: Vec<usize> = chains.iter().map(|ch| ch.end(c)).collect();
    let morphisms = sub
        .morphisms
        .iter()
        .map(|m| {
            let top = &chains[m.target];
            let from = below[m.target][&m.source];
            let verts = top.vertices(c);
            let mut f = c.identity(verts[from]);
            for &a in &top.arrows[from..] {
                f = c.compose(a, f).expect("chain composes");
            }
            f
        })
        .collect();
    Ok((sub, Functor { objects, morphisms }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn terminal_nerve_is_a_point() {
        let pt = FiniteCategory::discrete(&["*"]);
        let n = nerve(&pt, 3);
        assert_eq!(n.sizes(), vec![1, 1, 1, 1]);
        assert_eq!(n.nondegenerate_counts(), vec![1, 0, 0, 0]);
    }

    #[test]
    fn arrow_nerve_is_interval() {
        let n = nerve(&FiniteCategory::arrow(), 4);
        assert_eq!(n.nondegenerate_counts(), vec![2, 1, 0, 0, 0]);
        assert_eq!(n.sizes(), FiniteSimplicialSet::simplex(1, 4).sizes());
        assert!(n.check_identities().passed());
    }

    #[test]
    fn iso_pair_chain_counts() {
        let n = nerve(&FiniteCategory::iso_pair(), 4);
        assert_eq!(n.nondegenerate_counts(), vec![2, 2, 2, 2, 2]);
        assert_eq!(n.sizes(), vec![2, 4, 8, 16, 32]);
        assert_eq!(n.pi0().len(), 1);
        assert!(n.check_identities().passed());
    }

    #[test]
    fn axioms_are_enforced() {
        assert!(FiniteCategory::from_monoid(&[vec![0, 1], vec![1, 1]]).is_ok());
        assert!(FiniteCategory::from_monoid(&[vec![0, 1], vec![1, 0]]).is_ok());
        assert!(matches!(
            FiniteCategory::from_monoid(&[vec![1, 1], vec![1, 1]]),
            Err(SimplicialError::NotACategory(_))
        ));
        assert!(matches!(
            FiniteCategory::from_monoid(&[vec![0, 1, 2], vec![1, 2, 2], vec![2, 1, 2]]),
            Err(SimplicialError::NotACategory(_))
        ));
    }

    #[test]
    fn subdivision_of_arrow() {
        let (sub, psi) = category_subdivision(&FiniteCategory::arrow(), 8).unwrap();
        assert_eq!(sub.objects().len(), 3);
        assert_eq!(sub.morphisms().len(), 5);
        psi.check(&sub, &FiniteCategory::arrow()).unwrap();
        let before = nerve(&FiniteCategory::arrow(), 3);
        let after = nerve(&sub, 3);
        assert_eq!(before.pi0().len(), after.pi0().len());
    }

    #[test]
    fn subdivision_refuses_cycles() {
        assert!(matches!(
            category_subdivision(&FiniteCategory::iso_pair(), 6),
            Err(SimplicialError::CapExceeded { .. })
        ));
    }

    #[test]
    fn serde_roundtrip() {
        let c = FiniteCategory::arrow().product(&FiniteCategory::iso_pair());
        let text = serde_json::to_string(&c).unwrap();
        let back: FiniteCategory = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
    }
}
