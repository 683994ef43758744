use std::collections::HashMap;

use super::category::{chains, Chain};
use super::{nerve, FiniteCategory, FiniteSimplicialSet, Morphism, Provenance, SimplicialError, SimplicialMap};

/// Nondegenerate simplices of `S` with face operators between them.
#[derive(Clone, Debug)]
pub struct FaceCategory {
    pub category: FiniteCategory,
    /// `(level, element)` per object.
    pub objects: Vec<(usize, usize)>,
    /// Per morphism, the injective `δ: [m] → [n]` with `source = δ*target`.
    pub operators: Vec<Vec<usize>>,
}

/// Builds the face category. Faces of nondegenerate simplices must be
/// nondegenerate, and the top tabulated level must hold none.
pub fn face_category(s: &FiniteSimplicialSet) -> Result<FaceCategory, SimplicialError> {
    let cap = s.cap();
    if !s.nondegenerate(cap).is_empty() {
        return Err(SimplicialError::TruncationInconclusive {
            level: cap,
            count: s.nondegenerate(cap).len(),
        });
    }
    let mut objects = Vec::new();
    let mut object_index = HashMap::new();
    for n in 0..=cap {
        for x in s.nondegenerate(n) {
            object_index.insert((n, x), objects.len());
            objects.push((n, x));
        }
    }
    let mut morphisms = Vec::new();
    let mut operators = Vec::new();
    let mut arrow_index: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
    let mut identities = vec![0; objects.len()];
    for (t, &(n, x)) in objects.iter().enumerate() {
        for mask in 1u32..(1 << (n + 1)) {
            let delta: Vec<usize> = (0..=n).filter(|&i| mask >> i & 1 == 1).collect();
            let m = delta.len() - 1;
            let y = s.apply_operator(&delta, n, x)?;
            let src = *object_index.get(&(m, y)).ok_or_else(|| {
                SimplicialError::DegenerateFace(format!("{} of {} is degenerate", s.name(m, y), s.name(n, x)))
            })?;
            if m == n {
                identities[t] = morphisms.len();
            }
            arrow_index.insert((t, delta.clone()), morphisms.len());
            morphisms.push(Morphism {
                name: format!("{}{delta:?}", s.name(n, x)).replace(' ', ""),
                source: src,
                target: t,
            });
            operators.push(delta);
        }
    }
    let names = objects.iter().map(|&(n, x)| s.name(n, x).to_string()).collect();
    let targets: Vec<usize> = morphisms.iter().map(|m| m.target).collect();
    let category = FiniteCategory::new(names, morphisms, identities, |g, f| {
        let composite: Vec<usize> = operators[f].iter().map(|&i| operators[g][i]).collect();
        arrow_index.get(&(targets[g], composite)).copied()
    })?;
    Ok(FaceCategory {
        category,
        objects,
        operators,
    })
}

/// Barycentric subdivision: the nerve of the face category, tabulated to
/// the same cap.
pub fn subdivide(s: &FiniteSimplicialSet) -> Result<FiniteSimplicialSet, SimplicialError> {
    let fc = face_category(s)?;
    Ok(nerve(&fc.category, s.cap()).with_provenance(Provenance::new("subdivide", &[])))
}

/// The last-vertex map `Sd S → S`: a chain `y₀ → … → y_k` goes to the
/// k-simplex of `y_k` spanned by the last vertices of the `yᵢ`.
pub fn last_vertex_map(s: &FiniteSimplicialSet) -> Result<(FiniteSimplicialSet, SimplicialMap), SimplicialError> {
    let fc = face_category(s)?;
    let c = &fc.category;
    let sd = nerve(c, s.cap()).with_provenance(Provenance::new("subdivide", &[]));
    let levels = chains(c, s.cap())
        .iter()
        .map(|level| level.iter().map(|ch| last_vertex(s, &fc, ch)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok((sd, SimplicialMap { levels }))
}

fn last_vertex(s: &FiniteSimplicialSet, fc: &FaceCategory, ch: &Chain) -> Result<usize, SimplicialError> {
    let c = &fc.category;
    let verts = ch.vertices(c);
    let (top_level, top) = fc.objects[*verts.last().expect("nonempty")];
    let k = ch.arrows.len();
    let mut theta = vec![0; k + 1];
    for (i, &obj) in verts.iter().enumerate() {
        let mut v = fc.objects[obj].0;
        for &f in &ch.arrows[i..] {
            v = fc.operators[f][v];
        }
        theta[i] = v;
    }
    debug_assert_eq!(theta[k], top_level);
    s.apply_operator(&theta, top_level, top)
}
