use std::collections::{BTreeSet, HashMap};
use std::hash::Hash;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use super::SimplicialError;

/// One level `Sₙ`: element names with `faces[i][x] = dᵢx` (empty at level 0)
/// and `degeneracies[i][x] = sᵢx` (empty at the top level).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Level {
    pub elements: Vec<String>,
    pub faces: Vec<Vec<usize>>,
    pub degeneracies: Vec<Vec<usize>>,
}

/// Which construction produced a simplicial set, and from what.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub construction: String,
    pub inputs: Vec<String>,
}

impl Provenance {
    pub fn new(construction: &str, inputs: &[&str]) -> Self {
        Provenance {
            construction: construction.to_string(),
            inputs: inputs.iter().map(|s| s.to_string()).collect(),
        }
    }
}

/// A simplicial set tabulated in levels `0..=cap`, degenerate elements
/// included.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSset")]
pub struct FiniteSimplicialSet {
    levels: Vec<Level>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<Provenance>,
}

#[derive(Deserialize)]
struct RawSset {
    levels: Vec<Level>,
    #[serde(default)]
    provenance: Option<Provenance>,
}

impl TryFrom<RawSset> for FiniteSimplicialSet {
    type Error = SimplicialError;

    fn try_from(raw: RawSset) -> Result<Self, Self::Error> {
        FiniteSimplicialSet::from_levels(raw.levels, raw.provenance)
    }
}

/// Outcome of [`FiniteSimplicialSet::check_identities`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub checked: u64,
    pub failures: Vec<IdentityFailure>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityFailure {
    pub identity: String,
    pub level: usize,
    pub element: usize,
    pub lhs: usize,
    pub rhs: usize,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, identity: impl FnOnce() -> String, level: usize, element: usize, lhs: usize, rhs: usize) {
        self.checked += 1;
        if lhs != rhs && self.failures.len() < 16 {
            self.failures.push(IdentityFailure {
                identity: identity(),
                level,
                element,
                lhs,
                rhs,
            });
        }
    }
}

impl FiniteSimplicialSet {
    /// Checks table shapes and index ranges; identities are checked
    /// separately.
    pub fn from_levels(levels: Vec<Level>, provenance: Option<Provenance>) -> Result<Self, SimplicialError> {
        if levels.is_empty() {
            return Err(SimplicialError::InvalidTable("no levels".into()));
        }
        let cap = levels.len() - 1;
        for (n, level) in levels.iter().enumerate() {
            let size = level.elements.len();
            let want_faces = if n == 0 { 0 } else { n + 1 };
            let want_degens = if n == cap { 0 } else { n + 1 };
            if level.faces.len() != want_faces || level.degeneracies.len() != want_degens {
                return Err(SimplicialError::InvalidTable(format!(
                    "level {n} needs {want_faces} faces and {want_degens} degeneracies"
                )));
            }
            for (maps, target) in [(&level.faces, n.wrapping_sub(1)), (&level.degeneracies, n + 1)] {
                for m in maps {
                    let bound = levels[target].elements.len();
                    if m.len() != size || m.iter().any(|&y| y >= bound) {
                        return Err(SimplicialError::InvalidTable(format!(
                            "a map on level {n} has the wrong length or leaves level {target}"
                        )));
                    }
                }
            }
        }
        Ok(FiniteSimplicialSet { levels, provenance })
    }

    /// Tabulates a simplicial set given by enumerations and operator
    /// formulas on keys.
    pub fn from_model<K, L, F, D, N>(
        cap: usize,
        level: L,
        face: F,
        degeneracy: D,
        name: N,
    ) -> Result<Self, SimplicialError>
    where
        K: Clone + Eq + Hash,
        L: Fn(usize) -> Vec<K>,
        F: Fn(usize, usize, &K) -> K,
        D: Fn(usize, usize, &K) -> K,
        N: Fn(&K) -> String,
    {
        let keys: Vec<Vec<K>> = (0..=cap).map(&level).collect();
        let index: Vec<HashMap<&K, usize>> = keys
            .iter()
            .map(|ks| ks.iter().enumerate().map(|(i, k)| (k, i)).collect())
            .collect();
        let lookup = |n: usize, k: &K| {
            index[n]
                .get(k)
                .copied()
                .ok_or_else(|| SimplicialError::InvalidTable(format!("operator leaves level {n}: {}", name(k))))
        };
        let mut levels = Vec::with_capacity(cap + 1);
        for n in 0..=cap {
            let faces = if n == 0 {
                Vec::new()
            } else {
                (0..=n)
                    .map(|i| keys[n].iter().map(|k| lookup(n - 1, &face(n, i, k))).collect())
                    .collect::<Result<Vec<Vec<usize>>, _>>()?
            };
            let degeneracies = if n == cap {
                Vec::new()
            } else {
                (0..=n)
                    .map(|i| keys[n].iter().map(|k| lookup(n + 1, &degeneracy(n, i, k))).collect())
                    .collect::<Result<Vec<Vec<usize>>, _>>()?
            };
            levels.push(Level {
                elements: keys[n].iter().map(&name).collect(),
                faces,
                degeneracies,
            });
        }
        Ok(FiniteSimplicialSet {
            levels,
            provenance: None,
        })
    }

    pub fn with_provenance(mut self, p: Provenance) -> Self {
        self.provenance = Some(p);
        self
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    pub fn cap(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn size(&self, n: usize) -> usize {
        self.levels[n].elements.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.elements.len()).collect()
    }

    pub fn name(&self, n: usize, x: usize) -> &str {
        &self.levels[n].elements[x]
    }

    pub fn find(&self, n: usize, name: &str) -> Option<usize> {
        self.levels.get(n)?.elements.iter().position(|e| e == name)
    }

    pub fn face(&self, n: usize, i: usize, x: usize) -> usize {
        self.levels[n].faces[i][x]
    }

    pub fn degeneracy(&self, n: usize, i: usize, x: usize) -> usize {
        self.levels[n].degeneracies[i][x]
    }

    /// Elements of `Sₙ` outside the images of the degeneracies.
    pub fn nondegenerate(&self, n: usize) -> Vec<usize> {
        if n == 0 {
            return (0..self.size(0)).collect();
        }
        let hit: BTreeSet<usize> = self.levels[n - 1]
            .degeneracies
            .iter()
            .flatten()
            .copied()
            .collect();
        (0..self.size(n)).filter(|x| !hit.contains(x)).collect()
    }

    pub fn is_degenerate(&self, n: usize, x: usize) -> bool {
        n > 0
            && self.levels[n - 1]
                .degeneracies
                .iter()
                .any(|s| s.contains(&x))
    }

    pub fn nondegenerate_counts(&self) -> Vec<usize> {
        (0..=self.cap()).map(|n| self.nondegenerate(n).len()).collect()
    }

    /// Highest level holding a nondegenerate element.
    pub fn dimension(&self) -> Option<usize> {
        (0..=self.cap()).rev().find(|&n| !self.nondegenerate(n).is_empty())
    }

    /// `θ*x` for a monotone `θ: [k] → [n]` given by its values.
    pub fn apply_operator(&self, theta: &[usize], n: usize, x: usize) -> Result<usize, SimplicialError> {
        let k = theta
            .len()
            .checked_sub(1)
            .ok_or_else(|| SimplicialError::InvalidOperator("empty operator".into()))?;
        if theta.windows(2).any(|w| w[0] > w[1]) || theta.iter().any(|&t| t > n) {
            return Err(SimplicialError::InvalidOperator(format!("{theta:?} into [{n}]")));
        }
        if k > self.cap() || n > self.cap() {
            return Err(SimplicialError::CapExceeded { cap: self.cap() });
        }
        let image: Vec<usize> = theta.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        let mut cur = x;
        let mut level = n;
        for j in (0..=n).rev() {
            if !image.contains(&j) {
                cur = self.face(level, j, cur);
                level -= 1;
            }
        }
        let ranks: Vec<usize> = theta
            .iter()
            .map(|t| image.binary_search(t).expect("in image"))
            .collect();
        for j in 0..k {
            if ranks[j] == ranks[j + 1] {
                cur = self.degeneracy(level, j, cur);
                level += 1;
            }
        }
        Ok(cur)
    }

    /// The vertices `x(0), …, x(n)` of an n-simplex.
    pub fn vertices(&self, n: usize, x: usize) -> Vec<usize> {
        (0..=n)
            .map(|v| self.apply_operator(&[v], n, x).expect("vertex operator"))
            .collect()
    }

    /// Exhaustive check of the simplicial identities on the tabulated range.
    pub fn check_identities(&self) -> IdentityReport {
        let mut r = IdentityReport::default();
        let cap = self.cap();
        for n in 0..=cap {
            for x in 0..self.size(n) {
                if n >= 2 {
                    for j in 0..=n {
                        for i in 0..j {
                            let lhs = self.face(n - 1, i, self.face(n, j, x));
                            let rhs = self.face(n - 1, j - 1, self.face(n, i, x));
                            r.record(|| format!("d{i}d{j} = d{}d{i}", j - 1), n, x, lhs, rhs);
                        }
                    }
                }
                if n < cap {
                    for j in 0..=n {
                        let y = self.degeneracy(n, j, x);
                        for i in 0..=n + 1 {
                            let lhs = self.face(n + 1, i, y);
                            let (rhs, name) = if i == j || i == j + 1 {
                                (x, format!("d{i}s{j} = id"))
                            } else if i < j {
                                (self.degeneracy(n - 1, j - 1, self.face(n, i, x)), format!("d{i}s{j} = s{}d{i}", j - 1))
                            } else {
                                (self.degeneracy(n - 1, j, self.face(n, i - 1, x)), format!("d{i}s{j} = s{j}d{}", i - 1))
                            };
                            r.record(|| name, n, x, lhs, rhs);
                        }
                    }
                }
                if n + 2 <= cap {
                    for j in 0..=n {
                        for i in 0..=j {
                            let lhs = self.degeneracy(n + 1, i, self.degeneracy(n, j, x));
                            let rhs = self.degeneracy(n + 1, j + 1, self.degeneracy(n, i, x));
                            r.record(|| format!("s{i}s{j} = s{}s{i}", j + 1), n, x, lhs, rhs);
                        }
                    }
                }
            }
        }
        r
    }

    /// Union-find labels of `S₀` under `d₀x ~ d₁x`.
    fn component_labels(&self) -> Vec<usize> {
        let mut uf = UnionFind::new(self.size(0));
        if self.cap() >= 1 {
            for e in 0..self.size(1) {
                uf.union(self.face(1, 0, e), self.face(1, 1, e));
            }
        }
        uf.into_labeling()
    }

    /// Connected components as sorted vertex lists, ordered by least vertex.
    pub fn pi0(&self) -> Vec<Vec<usize>> {
        let labels = self.component_labels();
        let mut classes: HashMap<usize, Vec<usize>> = HashMap::new();
        for (v, &l) in labels.iter().enumerate() {
            classes.entry(l).or_default().push(v);
        }
        let mut out: Vec<Vec<usize>> = classes.into_values().collect();
        out.sort();
        out
    }

    /// Index of the component of each vertex, numbered as in [`Self::pi0`].
    pub fn component_of(&self) -> Vec<usize> {
        let mut out = vec![0; self.size(0)];
        for (c, class) in self.pi0().iter().enumerate() {
            for &v in class {
                out[v] = c;
            }
        }
        out
    }

    /// Alternating count of nondegenerate simplices; refused when the top
    /// tabulated level still has nondegenerate elements.
    pub fn euler_char(&self) -> Result<i64, SimplicialError> {
        let counts = self.nondegenerate_counts();
        let top = counts[self.cap()];
        if top > 0 {
            return Err(SimplicialError::TruncationInconclusive {
                level: self.cap(),
                count: top,
            });
        }
        Ok(counts
            .iter()
            .enumerate()
            .map(|(n, &c)| if n % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum())
    }

    /// Levels truncated to `0..=cap`.
    pub fn truncate(&self, cap: usize) -> Result<Self, SimplicialError> {
        if cap > self.cap() {
            return Err(SimplicialError::CapExceeded { cap: self.cap() });
        }
        let mut levels = self.levels[..=cap].to_vec();
        levels[cap].degeneracies.clear();
        Ok(FiniteSimplicialSet {
            levels,
            provenance: self.provenance.clone(),
        })
    }

    /// A set viewed as a constant simplicial set.
    pub fn discrete(names: &[String], cap: usize) -> Self {
        let n = names.len();
        FiniteSimplicialSet::from_model(cap, |_| (0..n).collect(), |_, _, &x| x, |_, _, &x| x, |&x| names[x].clone())
            .expect("constant tables")
            .with_provenance(Provenance::new("discrete", &[]))
    }

    /// The simplicial set of an ordered simplicial complex: n-simplices are
    /// weakly increasing vertex sequences whose support is a face.
    pub fn from_complex(vertices: usize, facets: &[Vec<usize>], cap: usize) -> Result<Self, SimplicialError> {
        let mut faces: BTreeSet<Vec<usize>> = (0..vertices).map(|v| vec![v]).collect();
        for f in facets {
            let mut f = f.clone();
            f.sort_unstable();
            f.dedup();
            if f.iter().any(|&v| v >= vertices) {
                return Err(SimplicialError::InvalidTable(format!("facet {f:?} uses a missing vertex")));
            }
            for mask in 1..(1u32 << f.len()) {
                faces.insert(f.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect());
            }
        }
        let level = |n: usize| {
            let mut out = Vec::new();
            for face in &faces {
                if face.len() <= n + 1 {
                    surjective_sequences(face, n + 1, &mut out);
                }
            }
            out.sort();
            out
        };
        let set = FiniteSimplicialSet::from_model(
            cap,
            level,
            |_, i, s: &Vec<usize>| {
                let mut t = s.clone();
                t.remove(i);
                t
            },
            |_, i, s: &Vec<usize>| {
                let mut t = s.clone();
                t.insert(i, s[i]);
                t
            },
            |s| format!("{s:?}").replace(' ', ""),
        )?;
        Ok(set.with_provenance(Provenance::new("complex", &[&format!("{facets:?}")])))
    }

    /// The standard simplex `Δⁿ`.
    pub fn simplex(n: usize, cap: usize) -> Self {
        FiniteSimplicialSet::from_complex(n + 1, &[(0..=n).collect()], cap).expect("valid facet")
    }

    /// Freely adds degeneracies to a semi-simplicial set given by
    /// `faces[n][i][x] = dᵢx` on `counts[n]` elements per level.
    pub fn from_delta_set(counts: &[usize], faces: &[Vec<Vec<usize>>], cap: usize) -> Result<Self, SimplicialError> {
        let top = counts.len();
        let delta_face = |m: usize, j: usize, x: usize| faces[m][j][x];
        for m in 1..top {
            if faces.get(m).map(|f| f.len()) != Some(m + 1)
                || faces[m].iter().any(|f| f.len() != counts[m] || f.iter().any(|&y| y >= counts[m - 1]))
            {
                return Err(SimplicialError::InvalidTable(format!("delta-set faces at level {m}")));
            }
            if m >= 2 {
                for x in 0..counts[m] {
                    for j in 0..=m {
                        for i in 0..j {
                            if delta_face(m - 1, i, delta_face(m, j, x)) != delta_face(m - 1, j - 1, delta_face(m, i, x)) {
                                return Err(SimplicialError::InvalidTable(format!(
                                    "delta-set identity d{i}d{j} fails at level {m}, element {x}"
                                )));
                            }
                        }
                    }
                }
            }
        }
        // an n-simplex is (m, x, σ) with σ: [n] → [m] a monotone surjection
        type Key = (usize, usize, Vec<usize>);
        let level = |n: usize| {
            let mut out: Vec<Key> = Vec::new();
            for (m, &c) in counts.iter().enumerate().take(n + 1) {
                let mut sigmas = Vec::new();
                surjective_sequences(&(0..=m).collect::<Vec<_>>(), n + 1, &mut sigmas);
                for x in 0..c {
                    out.extend(sigmas.iter().map(|s| (m, x, s.clone())));
                }
            }
            out
        };
        let face = |_: usize, i: usize, (m, x, sigma): &Key| {
            let mut theta = sigma.clone();
            theta.remove(i);
            let image: BTreeSet<usize> = theta.iter().copied().collect();
            let mut cur = *x;
            let mut level = *m;
            for j in (0..=*m).rev() {
                if !image.contains(&j) {
                    cur = delta_face(level, j, cur);
                    level -= 1;
                }
            }
            let ranks: Vec<usize> = image.iter().copied().collect();
            let sigma = theta.iter().map(|t| ranks.binary_search(t).expect("in image")).collect();
            (level, cur, sigma)
        };
        let degeneracy = |_: usize, i: usize, (m, x, sigma): &Key| {
            let mut s = sigma.clone();
            s.insert(i, sigma[i]);
            (*m, *x, s)
        };
        let name = |(m, x, sigma): &Key| {
            if sigma.len() == m + 1 {
                format!("x{m}_{x}")
            } else {
                format!("x{m}_{x}{sigma:?}").replace(' ', "")
            }
        };
        Ok(FiniteSimplicialSet::from_model(cap, level, face, degeneracy, name)?
            .with_provenance(Provenance::new("delta-set", &[&format!("{counts:?}")])))
    }

    /// Levelwise cartesian product, tabulated to the smaller cap.
    pub fn product(&self, other: &Self) -> Self {
        let cap = self.cap().min(other.cap());
        let b = |n: usize| other.size(n);
        FiniteSimplicialSet::from_model(
            cap,
            |n| (0..self.size(n) * b(n)).collect(),
            |n, i, &p| self.face(n, i, p / b(n)) * b(n - 1) + other.face(n, i, p % b(n)),
            |n, i, &p| self.degeneracy(n, i, p / b(n)) * b(n + 1) + other.degeneracy(n, i, p % b(n)),
            |&p| p.to_string(),
        )
        .map(|s| {
            let mut s = s;
            for (n, level) in s.levels.iter_mut().enumerate() {
                for (p, e) in level.elements.iter_mut().enumerate() {
                    *e = format!("({},{})", self.name(n, p / b(n)), other.name(n, p % b(n)));
                }
            }
            s
        })
        .expect("product tables")
        .with_provenance(Provenance::new("product", &[]))
    }

    /// Disjoint union, tabulated to the smaller cap.
    pub fn disjoint_union(&self, other: &Self) -> Self {
        let cap = self.cap().min(other.cap());
        let a = |n: usize| self.size(n);
        let pick = |n: usize, p: usize, f: &dyn Fn(&Self, usize) -> usize, shift: usize| {
            if p < a(n) {
                f(self, p)
            } else {
                f(other, p - a(n)) + shift
            }
        };
        let mut s = FiniteSimplicialSet::from_model(
            cap,
            |n| (0..a(n) + other.size(n)).collect(),
            |n, i, &p| pick(n, p, &|s, x| s.face(n, i, x), a(n - 1)),
            |n, i, &p| pick(n, p, &|s, x| s.degeneracy(n, i, x), a(n + 1)),
            |&p| p.to_string(),
        )
        .expect("union tables");
        for (n, level) in s.levels.iter_mut().enumerate() {
            for (p, e) in level.elements.iter_mut().enumerate() {
                *e = if p < a(n) {
                    format!("0:{}", self.name(n, p))
                } else {
                    format!("1:{}", other.name(n, p - a(n)))
                };
            }
        }
        s.with_provenance(Provenance::new("disjoint-union", &[]))
    }
}

/// Appends the weakly increasing sequences of length `len` over `support`
/// that use every element of it.
fn surjective_sequences(support: &[usize], len: usize, out: &mut Vec<Vec<usize>>) {
    fn go(support: &[usize], len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let remaining = len - cur.len();
        let last = cur.last().map(|v| support.iter().position(|s| s == v).expect("member"));
        let next_needed = last.map_or(0, |p| p + 1);
        let missing = support.len() - next_needed;
        if remaining == 0 {
            if missing == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if remaining < missing {
            return;
        }
        if let Some(p) = last {
            cur.push(support[p]);
            go(support, len, cur, out);
            cur.pop();
        }
        if next_needed < support.len() {
            cur.push(support[next_needed]);
            go(support, len, cur, out);
            cur.pop();
        }
    }
    if support.is_empty() || len < support.len() {
        return;
    }
    go(support, len, &mut Vec::new(), out);
}

/// A levelwise map of simplicial sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicialMap {
    pub levels: Vec<Vec<usize>>,
}

impl SimplicialMap {
    pub fn identity(s: &FiniteSimplicialSet) -> Self {
        SimplicialMap {
            levels: (0..=s.cap()).map(|n| (0..s.size(n)).collect()).collect(),
        }
    }

    pub fn compose(&self, after: &SimplicialMap) -> SimplicialMap {
        SimplicialMap {
            levels: self
                .levels
                .iter()
                .zip(&after.levels)
                .map(|(f, g)| f.iter().map(|&x| g[x]).collect())
                .collect(),
        }
    }

    /// Checks ranges and commutation with every tabulated face and
    /// degeneracy.
    pub fn check(&self, source: &FiniteSimplicialSet, target: &FiniteSimplicialSet) -> Result<(), SimplicialError> {
        let cap = source.cap();
        if self.levels.len() != cap + 1 || target.cap() < cap {
            return Err(SimplicialError::MapMismatch("levels".into()));
        }
        for n in 0..=cap {
            let f = &self.levels[n];
            if f.len() != source.size(n) || f.iter().any(|&y| y >= target.size(n)) {
                return Err(SimplicialError::MapMismatch(format!("level {n} out of range")));
            }
            for x in 0..source.size(n) {
                if n > 0 {
                    for i in 0..=n {
                        if self.levels[n - 1][source.face(n, i, x)] != target.face(n, i, f[x]) {
                            return Err(SimplicialError::MapMismatch(format!(
                                "d{i} at level {n}, element {}",
                                source.name(n, x)
                            )));
                        }
                    }
                }
                if n < cap {
                    for i in 0..=n {
                        if self.levels[n + 1][source.degeneracy(n, i, x)] != target.degeneracy(n, i, f[x]) {
                            return Err(SimplicialError::MapMismatch(format!(
                                "s{i} at level {n}, element {}",
                                source.name(n, x)
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The induced map on components, as indices into `pi0`.
    pub fn on_pi0(&self, source: &FiniteSimplicialSet, target: &FiniteSimplicialSet) -> Vec<usize> {
        let tc = target.component_of();
        source
            .pi0()
            .iter()
            .map(|class| tc[self.levels[0][class[0]]])
            .collect()
    }
}
