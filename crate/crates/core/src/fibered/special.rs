use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::hash::Hash;

use petgraph::unionfind::UnionFind;
use serde::Serialize;

use crate::operad::{cartesian, Op, OperadError};
use crate::simplicial::{FiniteSimplicialSet, Level, Provenance, SimplicialMap};

use super::operad::FiberedOperadData;
use super::orbit::{Orbit, Weighted};
use super::{FiberedError, FiberedSetObject};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Bijective,
    NonBijective,
    TruncationInconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentReport {
    /// A vertex of the base component.
    pub base: String,
    /// `π₀` classes over this component with a computed image.
    pub classes: usize,
    /// Classes whose image leaves the truncation.
    pub undetermined: usize,
    pub targets: usize,
    pub verdict: Verdict,
    /// What the truncated data shows when the verdict is inconclusive.
    pub observed: Verdict,
    pub witnesses: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpecialnessReport {
    pub operad: String,
    pub generators: Vec<String>,
    pub ell: usize,
    pub weight_cap: usize,
    pub dim_cap: usize,
    pub unit_fiber: bool,
    /// Whether the finite data is closed under every face, so that `π₀`
    /// below the weight cap is computed exactly.
    pub exact: bool,
    pub base_sizes: Vec<usize>,
    pub bar_sizes: Vec<usize>,
    /// Simplicial identities and map conditions verified on the built levels.
    pub identities_checked: u64,
    pub components: Vec<ComponentReport>,
    /// Reserved for fiberwise invariants beyond `π₀`; not computed.
    pub fiberwise_euler: Option<Vec<i64>>,
    pub note: String,
}

impl SpecialnessReport {
    /// True when every base component is `π₀`-bijective. This is a
    /// necessary condition only.
    pub fn pi0_bijective(&self) -> bool {
        self.exact && self.components.iter().all(|c| c.verdict == Verdict::Bijective)
    }
}

type Step<T> = Result<Option<T>, FiberedError>;

fn soft<T>(r: Result<T, OperadError>) -> Step<T> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(OperadError::Overflow { .. } | OperadError::Truncated(_)) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

/// `B(X, M, Y)` on finite carriers with partially defined operations;
/// level `p` holds the `(x, m₁…mₚ, y)` of total weight at most the cap.
struct PartialBar<A, M, Y> {
    levels: Vec<Vec<(A, Vec<M>, Y)>>,
    faces: Vec<Vec<Vec<Option<usize>>>>,
    degeneracies: Vec<Vec<Vec<Option<usize>>>>,
}

struct BarInput<'a, A, M, Y> {
    right: &'a [A],
    monoid: &'a [M],
    left: &'a [Y],
    unit: M,
    weight: (&'a dyn Fn(&A) -> usize, &'a dyn Fn(&M) -> usize, &'a dyn Fn(&Y) -> usize),
    cap: usize,
    act: &'a dyn Fn(&A, &M) -> Step<A>,
    mul: &'a dyn Fn(&M, &M) -> Step<M>,
    lact: &'a dyn Fn(&M, &Y) -> Step<Y>,
}

impl<A: Clone + Eq + Hash, M: Clone + Eq + Hash, Y: Clone + Eq + Hash> PartialBar<A, M, Y> {
    fn build(input: &BarInput<A, M, Y>, top: usize) -> Result<Self, FiberedError> {
        let (wa, wm, wy) = input.weight;
        let mut levels = Vec::with_capacity(top + 1);
        for p in 0..=top {
            let mut out = Vec::new();
            for a in input.right {
                let w = wa(a);
                if w > input.cap {
                    continue;
                }
                let mut words = vec![(Vec::new(), w)];
                for _ in 0..p {
                    let mut next = Vec::new();
                    for (word, used) in &words {
                        for m in input.monoid {
                            let u = used + wm(m);
                            if u <= input.cap {
                                let mut longer: Vec<M> = word.clone();
                                longer.push(m.clone());
                                next.push((longer, u));
                            }
                        }
                    }
                    words = next;
                }
                for (word, used) in words {
                    for y in input.left {
                        if used + wy(y) <= input.cap {
                            out.push((a.clone(), word.clone(), y.clone()));
                        }
                    }
                }
            }
            levels.push(out);
        }
        let index: Vec<HashMap<&(A, Vec<M>, Y), usize>> = levels
            .iter()
            .map(|l| l.iter().enumerate().map(|(i, k)| (k, i)).collect())
            .collect();
        let mut faces = vec![Vec::new(); top + 1];
        let mut degeneracies = vec![Vec::new(); top + 1];
        for p in 0..=top {
            if p > 0 {
                for i in 0..=p {
                    let mut table = Vec::with_capacity(levels[p].len());
                    for (a, word, y) in &levels[p] {
                        let key = if i == 0 {
                            (input.act)(a, &word[0])?.map(|a2| (a2, word[1..].to_vec(), y.clone()))
                        } else if i == p {
                            (input.lact)(&word[p - 1], y)?.map(|y2| (a.clone(), word[..p - 1].to_vec(), y2))
                        } else {
                            (input.mul)(&word[i - 1], &word[i])?.map(|m| {
                                let mut w2 = word[..i - 1].to_vec();
                                w2.push(m);
                                w2.extend_from_slice(&word[i + 1..]);
                                (a.clone(), w2, y.clone())
                            })
                        };
                        table.push(key.and_then(|k| index[p - 1].get(&k).copied()));
                    }
                    faces[p].push(table);
                }
            }
            if p < top {
                for i in 0..=p {
                    let table = levels[p]
                        .iter()
                        .map(|(a, word, y)| {
                            let mut w2 = word.clone();
                            w2.insert(i, input.unit.clone());
                            index[p + 1].get(&(a.clone(), w2, y.clone())).copied()
                        })
                        .collect();
                    degeneracies[p].push(table);
                }
            }
        }
        Ok(PartialBar {
            levels,
            faces,
            degeneracies,
        })
    }

    fn closed(&self) -> bool {
        self.faces.iter().chain(&self.degeneracies).flatten().flatten().all(Option::is_some)
    }

    fn sizes(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    /// Components of level 0 from the edges whose faces are both defined,
    /// and the vertices touched by an edge with a missing face.
    fn components(&self) -> (Vec<usize>, BTreeSet<usize>) {
        let n0 = self.levels[0].len();
        let mut uf = UnionFind::<usize>::new(n0);
        let mut leaky = BTreeSet::new();
        if self.levels.len() > 1 {
            for e in 0..self.levels[1].len() {
                match (self.faces[1][0][e], self.faces[1][1][e]) {
                    (Some(u), Some(v)) => {
                        uf.union(u, v);
                    }
                    (Some(u), None) | (None, Some(u)) => {
                        leaky.insert(u);
                    }
                    (None, None) => {}
                }
            }
        }
        (uf.into_labeling(), leaky)
    }

    fn to_sset(&self, name: &dyn Fn(&(A, Vec<M>, Y)) -> String, construction: &str) -> Result<FiniteSimplicialSet, FiberedError> {
        let levels = self
            .levels
            .iter()
            .enumerate()
            .map(|(p, l)| Level {
                elements: l.iter().map(name).collect(),
                faces: self.faces[p].iter().map(|t| t.iter().map(|x| x.expect("closed")).collect()).collect(),
                degeneracies: self.degeneracies[p].iter().map(|t| t.iter().map(|x| x.expect("closed")).collect()).collect(),
            })
            .collect();
        Ok(FiniteSimplicialSet::from_levels(levels, None)?.with_provenance(Provenance::new(construction, &[])))
    }
}

type BarElem = (Orbit<usize>, Vec<Vec<Orbit<usize>>>, Vec<Orbit<usize>>);

/// Builds both sides of the comparison `B(Q(ℓ), Q(1)^ℓ, Q(0)^ℓ) → h_Z* Q(0)`
/// over `Z = B(C(ℓ), C(1)^ℓ, C(0)^ℓ)` for `Q = A` and compares `π₀` over
/// each component of `Z`, below the weight cap of `A`.
///
/// With `unit_fiber`, `Q(1)` is replaced by its fiber over the unit and
/// `C(1)` by the unit alone.
pub fn specialness_diagnostic(
    a: &FiberedOperadData,
    ell: usize,
    dim_cap: usize,
    unit_fiber: bool,
) -> Result<SpecialnessReport, FiberedError> {
    let c = a.operad();
    let cap = a.cap();
    if ell > cap {
        return Err(FiberedError::CapExceeded { needed: ell, cap });
    }
    if dim_cap == 0 {
        return Err(FiberedError::InvalidAction("π₀ needs level 1".into()));
    }
    let complete = c.carriers_complete();
    let top = if complete { dim_cap } else { 1 };

    // the base Z
    let c_ell = c.elements(ell);
    let c_one: Vec<Op> = if unit_fiber { vec![c.unit()] } else { c.elements(1) };
    let z_monoid: Vec<Vec<Op>> = cartesian(&vec![c_one; ell]);
    let z_act = |x: &Op, m: &Vec<Op>| soft(c.compose(*x, m));
    let z_mul = |m: &Vec<Op>, n: &Vec<Op>| -> Step<Vec<Op>> {
        let mut out = Vec::with_capacity(m.len());
        for (p, q) in m.iter().zip(n) {
            match soft(c.partial_compose(*p, 0, *q))? {
                Some(r) => out.push(r),
                None => return Ok(None),
            }
        }
        Ok(Some(out))
    };
    let z_lact = |_: &Vec<Op>, _: &()| Ok(Some(()));
    let zero_a = |_: &Op| 0;
    let zero_m = |_: &Vec<Op>| 0;
    let zero_y = |_: &()| 0;
    let z = PartialBar::build(
        &BarInput {
            right: &c_ell,
            monoid: &z_monoid,
            left: &[()],
            unit: vec![c.unit(); ell],
            weight: (&zero_a, &zero_m, &zero_y),
            cap: 0,
            act: &z_act,
            mul: &z_mul,
            lact: &z_lact,
        },
        top,
    )?;

    // the total space
    let q_ell = a.elements(ell).to_vec();
    let q_one: Vec<Orbit<usize>> = a
        .elements(1)
        .iter()
        .enumerate()
        .filter(|(i, _)| !unit_fiber || a.projection(1, *i) == c.unit())
        .map(|(_, e)| e.clone())
        .collect();
    let q_zero = a.elements(0).to_vec();
    let b_monoid: Vec<Vec<Orbit<usize>>> = cartesian(&vec![q_one; ell])
        .into_iter()
        .filter(|t| t.iter().map(Weighted::weight).sum::<usize>() <= cap)
        .collect();
    let b_left: Vec<Vec<Orbit<usize>>> = cartesian(&vec![q_zero.clone(); ell])
        .into_iter()
        .filter(|t| t.iter().map(Weighted::weight).sum::<usize>() <= cap)
        .collect();
    let b_act = |x: &Orbit<usize>, m: &Vec<Orbit<usize>>| soft(a.compose(x, m));
    let pairwise = |m: &Vec<Orbit<usize>>, n: &Vec<Orbit<usize>>| -> Step<Vec<Orbit<usize>>> {
        let mut out = Vec::with_capacity(m.len());
        for (p, q) in m.iter().zip(n) {
            match soft(a.compose(p, std::slice::from_ref(q)))? {
                Some(r) => out.push(r),
                None => return Ok(None),
            }
        }
        Ok(Some(out))
    };
    let wa = |x: &Orbit<usize>| x.weight();
    let wt = |t: &Vec<Orbit<usize>>| t.iter().map(Weighted::weight).sum();
    let b = PartialBar::build(
        &BarInput {
            right: &q_ell,
            monoid: &b_monoid,
            left: &b_left,
            unit: vec![a.unit(); ell],
            weight: (&wa, &wt, &wt),
            cap,
            act: &b_act,
            mul: &pairwise,
            lact: &pairwise,
        },
        top,
    )?;

    // projection and comparison on vertices
    let proj = |x: &Orbit<usize>| -> Op {
        let k = a.position(x).expect("enumerated element");
        a.projection(x.free(), k)
    };
    let z_index: HashMap<&(Op, Vec<Vec<Op>>, ()), usize> = z.levels[0].iter().enumerate().map(|(i, k)| (k, i)).collect();
    let zero_index: HashMap<&Orbit<usize>, usize> = q_zero.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let mut compare = Vec::with_capacity(b.levels[0].len());
    let mut over = Vec::with_capacity(b.levels[0].len());
    for (x, _, r) in &b.levels[0] {
        compare.push(soft(a.compose(x, r))?.and_then(|t| zero_index.get(&t).copied()));
        over.push(z_index[&(proj(x), Vec::new(), ())]);
    }

    let (z_labels, z_leaky) = z.components();
    let (b_labels, mut b_leaky) = b.components();
    for (v, t) in compare.iter().enumerate() {
        if t.is_none() {
            b_leaky.insert(v);
        }
    }
    let exact = complete && z.closed() && b.closed() && b_leaky.is_empty() && z_leaky.is_empty();

    let z_dense = dense(&z_labels);
    let b_dense = dense(&b_labels);
    let b_name = |e: &BarElem| bar_label(a, e);
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..b.levels[0].len() {
        classes.entry(b_dense[v]).or_default().push(v);
    }
    let z_count = z_dense.iter().max().map_or(0, |m| m + 1);
    let mut per_base: Vec<Vec<(usize, Option<usize>, bool)>> = vec![Vec::new(); z_count];
    let mut mixed = BTreeSet::new();
    for members in classes.values() {
        let bases: BTreeSet<usize> = members.iter().map(|&v| z_dense[over[v]]).collect();
        let targets: BTreeSet<Option<usize>> = members.iter().map(|&v| compare[v]).collect();
        let leaky = members.iter().any(|v| b_leaky.contains(v)) || targets.len() != 1;
        if bases.len() > 1 {
            mixed.extend(bases.iter().copied());
        }
        let target = if targets.len() == 1 { *targets.iter().next().expect("one") } else { None };
        per_base[*bases.iter().next().expect("non-empty class")].push((members[0], target, leaky));
    }

    let mut components = Vec::with_capacity(z_count);
    for (zc, entries) in per_base.iter().enumerate() {
        let vertex = z_dense.iter().position(|&d| d == zc).expect("component has a vertex");
        let mut witnesses = Vec::new();
        let mut hit: BTreeMap<usize, usize> = BTreeMap::new();
        let undetermined = entries.iter().filter(|e| e.1.is_none()).count();
        let mut injective = true;
        let mut dirty = mixed.contains(&zc) || z_leaky.iter().any(|&v| z_dense[v] == zc);
        for &(rep, target, leaky) in entries {
            dirty |= leaky;
            if let Some(t) = target {
                if let Some(&other) = hit.get(&t) {
                    injective = false;
                    if witnesses.len() < 4 {
                        witnesses.push(format!(
                            "{} and {} both give {}",
                            b_name(&b.levels[0][other]),
                            b_name(&b.levels[0][rep]),
                            a.label(&q_zero[t])
                        ));
                    }
                } else {
                    hit.insert(t, rep);
                }
            }
        }
        let missing: Vec<usize> = (0..q_zero.len()).filter(|t| !hit.contains_key(t)).collect();
        for &t in missing.iter().take(4) {
            witnesses.push(format!("{} is not reached", a.label(&q_zero[t])));
        }
        let observed = if injective && missing.is_empty() {
            Verdict::Bijective
        } else {
            Verdict::NonBijective
        };
        let (zx, _, _) = &z.levels[0][vertex];
        components.push(ComponentReport {
            base: c.label(*zx),
            classes: entries.len() - undetermined,
            undetermined,
            targets: q_zero.len(),
            verdict: if exact && !dirty { observed } else { Verdict::TruncationInconclusive },
            observed,
            witnesses,
        });
    }

    let mut identities_checked = 0;
    if exact {
        let z_set = z.to_sset(&|(x, m, _)| format!("{}|{}", c.label(*x), m.iter().map(|t| t.iter().map(|o| c.label(*o)).collect::<Vec<_>>().join(",")).collect::<Vec<_>>().join("|")), "base-bar")?;
        let b_set = b.to_sset(&b_name, "operad-bar")?;
        for s in [&z_set, &b_set] {
            let r = s.check_identities();
            if let Some(f) = r.failures.first() {
                return Err(FiberedError::NotFunctorial(format!("{} at level {}", f.identity, f.level)));
            }
            identities_checked += r.checked;
        }
        let z_map = SimplicialMap {
            levels: b
                .levels
                .iter()
                .enumerate()
                .map(|(p, l)| {
                    let idx: HashMap<&(Op, Vec<Vec<Op>>, ()), usize> = z.levels[p].iter().enumerate().map(|(i, k)| (k, i)).collect();
                    l.iter()
                        .map(|(x, m, _)| {
                            let key = (proj(x), m.iter().map(|t| t.iter().map(proj).collect()).collect(), ());
                            idx[&key]
                        })
                        .collect()
                })
                .collect(),
        };
        let lhs = FiberedSetObject::new(z_set.clone(), b_set, z_map.clone())?;
        let zero_names: Vec<String> = q_zero.iter().map(|t| a.label(t)).collect();
        let point = FiberedSetObject::over_discrete(&["*".to_string()], &[zero_names], top)?;
        let collapse = SimplicialMap {
            levels: z.levels.iter().map(|l| vec![0; l.len()]).collect(),
        };
        let rhs = point.pullback(&collapse, &z_set)?;
        let mut cmp_levels = Vec::with_capacity(top + 1);
        for (p, l) in b.levels.iter().enumerate() {
            let mut row = Vec::with_capacity(l.len());
            for (k, (x, m, r)) in l.iter().enumerate() {
                let mut acted = r.clone();
                for t in m.iter().rev() {
                    acted = pairwise(t, &acted)?.expect("closed");
                }
                let e = zero_index[&a.compose(x, &acted)?];
                row.push(z_map.levels[p][k] * q_zero.len() + e);
            }
            cmp_levels.push(row);
        }
        let cmp = SimplicialMap { levels: cmp_levels };
        cmp.check(lhs.total(), rhs.total())?;
        if cmp.compose(rhs.projection()) != *lhs.projection() {
            return Err(FiberedError::NotFunctorial("comparison does not lie over the base".into()));
        }
        identities_checked += 1;
    }

    Ok(SpecialnessReport {
        operad: c.name(),
        generators: a.generators().to_vec(),
        ell,
        weight_cap: cap,
        dim_cap,
        unit_fiber,
        exact,
        base_sizes: z.sizes(),
        bar_sizes: b.sizes(),
        identities_checked,
        components,
        fiberwise_euler: None,
        note: "a bijective verdict is a necessary condition for specialness, not a proof".into(),
    })
}

fn dense(labels: &[usize]) -> Vec<usize> {
    let mut map = HashMap::new();
    labels
        .iter()
        .map(|l| {
            let next = map.len();
            *map.entry(*l).or_insert(next)
        })
        .collect()
}

fn bar_label(a: &FiberedOperadData, (x, m, r): &BarElem) -> String {
    let tuple = |t: &Vec<Orbit<usize>>| format!("({})", t.iter().map(|o| a.label(o)).collect::<Vec<_>>().join(", "));
    let mut parts = vec![a.label(x)];
    parts.extend(m.iter().map(tuple));
    parts.push(tuple(r));
    parts.join(" ⊗ ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fibered::build_fibered_a;
    use crate::operad::{Assoc, Comm, FreeBinary};

    fn x() -> Vec<String> {
        vec!["x".to_string()]
    }

    #[test]
    fn comm_is_pi0_bijective() {
        let c = Comm::new(6);
        let a = build_fibered_a(&c, &x(), 3).unwrap();
        for ell in 0..=2 {
            let r = specialness_diagnostic(&a, ell, 3, false).unwrap();
            assert!(r.exact);
            assert!(r.pi0_bijective(), "{r:?}");
            assert_eq!(r.components.len(), 1);
            assert!(r.identities_checked > 0);
        }
    }

    #[test]
    fn ell_zero_is_the_identity() {
        let c = Assoc::new(4);
        let a = build_fibered_a(&c, &["x".into(), "y".into()], 2).unwrap();
        let r = specialness_diagnostic(&a, 0, 2, false).unwrap();
        assert!(r.pi0_bijective());
        assert_eq!(r.bar_sizes, vec![a.elements(0).len(); 3]);
    }

    #[test]
    fn free_binary_is_deterministic() {
        let c = FreeBinary::new(4, 2);
        let a = build_fibered_a(&c, &x(), 2).unwrap();
        let r1 = specialness_diagnostic(&a, 2, 2, false).unwrap();
        let r2 = specialness_diagnostic(&a, 2, 2, false).unwrap();
        assert_eq!(r1, r2);
        assert!(!r1.exact);
        assert!(r1.components.iter().all(|c| c.verdict == Verdict::TruncationInconclusive));
    }

    #[test]
    fn dimension_cap_must_reach_edges() {
        let c = Comm::new(2);
        let a = build_fibered_a(&c, &x(), 1).unwrap();
        assert!(specialness_diagnostic(&a, 1, 0, false).is_err());
        assert!(specialness_diagnostic(&a, 2, 1, false).is_err());
    }
}
