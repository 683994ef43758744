use std::collections::HashMap;

use petgraph::unionfind::UnionFind;
use serde::Serialize;

use crate::operad::{cartesian, Op, Permutation, SetOperad};
use crate::simplicial::{MSet, Monoid, Side};

use super::operad::fibered_arity;
use super::orbit::Orbit;
use super::FiberedError;

/// `(y, x⃗, m)` with `y ∈ C(n + 1)`, before the `Σₙ` quotient.
type Raw = (Op, Vec<usize>, usize);

/// `∐ C(n+1) ×_{Σₙ} (Xⁿ × M)` built directly as classes of raw tuples under
/// the generated equivalence, without canonical forms.
struct FreeModule {
    raws: Vec<Raw>,
    class_of: Vec<usize>,
    classes: usize,
    index: HashMap<Raw, usize>,
}

impl FreeModule {
    fn build(c: &dyn SetOperad, generators: usize, module: usize, cap: usize) -> Result<Self, FiberedError> {
        let mut raws = Vec::new();
        for n in 0..=cap {
            let tuples = cartesian(&vec![(0..generators).collect::<Vec<_>>(); n]);
            for y in c.elements(n + 1) {
                for xs in &tuples {
                    for m in 0..module {
                        raws.push((y, xs.clone(), m));
                    }
                }
            }
        }
        let index: HashMap<Raw, usize> = raws.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
        let mut uf = UnionFind::<usize>::new(raws.len());
        for (i, (y, xs, m)) in raws.iter().enumerate() {
            let n = xs.len();
            for sigma in Permutation::all(n) {
                let full = Permutation::block_sum(&[Permutation::identity(1), sigma.clone()]);
                let moved = (c.act(*y, &full)?, (0..n).map(|k| xs[sigma.apply0(k)]).collect(), *m);
                uf.union(i, index[&moved]);
            }
        }
        let labels = uf.into_labeling();
        let mut dense = HashMap::new();
        let class_of: Vec<usize> = labels
            .iter()
            .map(|l| {
                let next = dense.len();
                *dense.entry(*l).or_insert(next)
            })
            .collect();
        Ok(FreeModule {
            raws,
            class_of,
            classes: dense.len(),
            index,
        })
    }
}

/// Outcome of [`lemma_pred_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaPredReport {
    pub free_module_size: usize,
    pub product_size: usize,
    pub well_defined: bool,
    pub bijective: bool,
    pub natural: bool,
    /// Free-module class (as a representative) and its image in `h♯A(1) × M`.
    pub bijection: Vec<(String, String)>,
}

impl LemmaPredReport {
    pub fn passed(&self) -> bool {
        self.well_defined && self.bijective && self.natural
    }
}

/// Compares the free `(C, CX)`-module on `M` with `h♯A(1) × M` and checks
/// that the identification commutes with `f: M → M′` (`f[i]` indexes into
/// `target`).
pub fn lemma_pred_check(
    c: &dyn SetOperad,
    generators: &[String],
    module: &[String],
    cap: usize,
    f: &[usize],
    target: &[String],
) -> Result<LemmaPredReport, FiberedError> {
    if f.len() != module.len() || f.iter().any(|&y| y >= target.len()) {
        return Err(FiberedError::InvalidAction("test function is not a map M → M′".into()));
    }
    let (a1, _, object) = fibered_arity(c, 1, generators, cap)?;
    let collapse = object.collapse();
    let mut class_of_vertex = vec![0; a1.len()];
    for (k, class) in collapse.iter().enumerate() {
        for &v in class {
            class_of_vertex[v] = k;
        }
    }
    let position: HashMap<&Orbit<usize>, usize> = a1.iter().enumerate().map(|(i, a)| (a, i)).collect();
    let phi_of = |raw: &Raw, size: usize| -> Result<usize, FiberedError> {
        let (y, xs, m) = raw;
        let orbit = Orbit::canonical(c, *y, 1, xs.clone())?;
        Ok(class_of_vertex[position[&orbit]] * size + m)
    };

    let lhs = FreeModule::build(c, generators.len(), module.len(), cap)?;
    let product = collapse.len() * module.len();
    let mut image = vec![None; lhs.classes];
    let mut well_defined = true;
    for (i, raw) in lhs.raws.iter().enumerate() {
        let v = phi_of(raw, module.len())?;
        match image[lhs.class_of[i]] {
            None => image[lhs.class_of[i]] = Some(v),
            Some(w) if w != v => well_defined = false,
            _ => {}
        }
    }
    let image: Vec<usize> = image.into_iter().map(|v| v.expect("every class has a member")).collect();
    let mut hit = vec![false; product];
    for &v in &image {
        hit[v] = true;
    }
    let bijective = image.len() == product && hit.iter().all(|&h| h);

    let lhs2 = FreeModule::build(c, generators.len(), target.len(), cap)?;
    let mut natural = true;
    for (i, (y, xs, m)) in lhs.raws.iter().enumerate() {
        let pushed = lhs2.index[&(*y, xs.clone(), f[*m])];
        let around = phi_of(&lhs2.raws[pushed], target.len())?;
        let v = image[lhs.class_of[i]];
        let (k, mm) = (v / module.len(), v % module.len());
        if around != k * target.len() + f[mm] {
            natural = false;
        }
    }

    let mut bijection = Vec::with_capacity(lhs.classes);
    let mut seen = vec![false; lhs.classes];
    for (i, (y, xs, m)) in lhs.raws.iter().enumerate() {
        let k = lhs.class_of[i];
        if std::mem::replace(&mut seen[k], true) {
            continue;
        }
        let xs_names: Vec<&str> = xs.iter().map(|&x| generators[x].as_str()).collect();
        let left = format!("{}|{}|{}", c.label(*y), xs_names.join(","), module[*m]);
        let v = image[k];
        let a = &a1[collapse[v / module.len()][0]];
        bijection.push((left, format!("({}, {})", a.label(c, generators), module[v % module.len()])));
    }
    Ok(LemmaPredReport {
        free_module_size: lhs.classes,
        product_size: product,
        well_defined,
        bijective,
        natural,
        bijection,
    })
}

/// `Hom_R(M, N)` as the equalizer of `f ↦ f∘μ_M` and `f ↦ μ_N∘(R × f)`
/// from `Hom(M, N)` to `Hom(R × M, N)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomEqualizer {
    pub maps: Vec<Vec<usize>>,
    pub candidates: usize,
    /// Agreement with filtering functions by `f(r·m) = r·f(m)`.
    pub cross_checked: bool,
}

pub fn hom_equalizer(r: &Monoid, m: &MSet, n: &MSet) -> Result<HomEqualizer, FiberedError> {
    for s in [m, n] {
        if s.side != Side::Left {
            return Err(FiberedError::InvalidAction("modules must be left actions".into()));
        }
        s.validate(r)?;
    }
    let functions = cartesian(&vec![(0..n.size).collect::<Vec<_>>(); m.size]);
    let along_m = |f: &[usize]| -> Vec<usize> {
        (0..r.order())
            .flat_map(|g| (0..m.size).map(move |x| (g, x)))
            .map(|(g, x)| f[m.apply(g, x)])
            .collect()
    };
    let along_n = |f: &[usize]| -> Vec<usize> {
        (0..r.order())
            .flat_map(|g| (0..m.size).map(move |x| (g, x)))
            .map(|(g, x)| n.apply(g, f[x]))
            .collect()
    };
    let maps: Vec<Vec<usize>> = functions.iter().filter(|f| along_m(f) == along_n(f)).cloned().collect();
    let filtered: Vec<&Vec<usize>> = functions
        .iter()
        .filter(|f| (0..r.order()).all(|g| (0..m.size).all(|x| f[m.apply(g, x)] == n.apply(g, f[x]))))
        .collect();
    let cross_checked = filtered.len() == maps.len() && filtered.iter().zip(&maps).all(|(a, b)| *a == b);
    Ok(HomEqualizer {
        maps,
        candidates: functions.len(),
        cross_checked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operad::{Assoc, Comm};

    fn names(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn comm_single_generator() {
        let r = lemma_pred_check(&Comm::new(4), &names(&["x"]), &names(&["m"]), 3, &[0], &names(&["m"])).unwrap();
        assert_eq!((r.free_module_size, r.product_size), (4, 4));
        assert!(r.passed());
    }

    #[test]
    fn empty_module() {
        let r = lemma_pred_check(&Comm::new(4), &names(&["x"]), &[], 3, &[], &names(&["m"])).unwrap();
        assert_eq!((r.free_module_size, r.product_size), (0, 0));
        assert!(r.passed());
    }

    #[test]
    fn assoc_two_points() {
        let r = lemma_pred_check(&Assoc::new(3), &names(&["x"]), &names(&["a", "b"]), 2, &[1, 1], &names(&["p", "q"])).unwrap();
        assert_eq!(r.free_module_size, 12);
        assert!(r.passed());
    }

    #[test]
    fn bad_test_function() {
        assert!(lemma_pred_check(&Comm::new(3), &names(&["x"]), &names(&["m"]), 2, &[3], &names(&["m"])).is_err());
    }

    #[test]
    fn trivial_monoid_gives_all_maps() {
        let r = Monoid::trivial();
        let m = MSet::trivial(&r, Side::Left, 2);
        let n = MSet::trivial(&r, Side::Left, 3);
        let h = hom_equalizer(&r, &m, &n).unwrap();
        assert_eq!(h.maps.len(), 9);
        assert!(h.cross_checked);
    }

    #[test]
    fn group_on_itself() {
        let r = Monoid::cyclic(2);
        let reg = MSet::regular(&r, Side::Left);
        assert_eq!(hom_equalizer(&r, &reg, &reg).unwrap().maps.len(), 2);
    }

    #[test]
    fn fixed_point_has_nowhere_to_go() {
        let r = Monoid::cyclic(2);
        let fixed = MSet::trivial(&r, Side::Left, 1);
        let free = MSet::regular(&r, Side::Left);
        let h = hom_equalizer(&r, &fixed, &free).unwrap();
        assert!(h.maps.is_empty());
        assert_eq!(h.candidates, 2);
    }

    #[test]
    fn right_modules_refused() {
        let r = Monoid::cyclic(2);
        let m = MSet::regular(&r, Side::Right);
        assert!(hom_equalizer(&r, &m, &m).is_err());
    }
}
