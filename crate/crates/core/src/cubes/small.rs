use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{scale_config, CubeConfig, CubeConfigFile, CubeError, ExactRational, LittleCube};

/// A pair `(f, g)` of configurations in `C_k` and `C_ℓ` with an assignment
/// of each cube of `e` to a cell `f_h × g_j` (1-indexed).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridWitness {
    pub f: CubeConfig,
    pub g: CubeConfig,
    pub assignment: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct GridWitnessFile {
    f: CubeConfigFile,
    g: CubeConfigFile,
    assignment: Vec<(usize, usize)>,
}

impl Serialize for GridWitness {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GridWitnessFile {
            f: (&self.f).into(),
            g: (&self.g).into(),
            assignment: self.assignment.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GridWitness {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let file = GridWitnessFile::deserialize(d)?;
        Ok(GridWitness {
            f: file.f.try_into().map_err(serde::de::Error::custom)?,
            g: file.g.try_into().map_err(serde::de::Error::custom)?,
            assignment: file.assignment,
        })
    }
}

impl GridWitness {
    pub fn k(&self) -> usize {
        self.f.dim()
    }

    pub fn l(&self) -> usize {
        self.g.dim()
    }

    /// The cell `f_h × g_j` for a 1-indexed pair.
    pub fn cell(&self, (h, j): (usize, usize)) -> LittleCube {
        self.f.cubes()[h - 1].product(&self.g.cubes()[j - 1])
    }
}

/// Whether every `eᵢ` lies in the open interior of its assigned cell, with
/// at most one cube per cell.
pub fn is_small(e: &CubeConfig, w: &GridWitness) -> Result<bool, CubeError> {
    if w.k() + w.l() != e.dim() {
        return Err(CubeError::DimensionMismatch {
            expected: e.dim(),
            found: w.k() + w.l(),
        });
    }
    if w.assignment.len() != e.len() {
        return Ok(false);
    }
    let mut used = BTreeSet::new();
    for (cube, &(h, j)) in e.cubes().iter().zip(&w.assignment) {
        if h == 0 || j == 0 || h > w.f.len() || j > w.g.len() || !used.insert((h, j)) {
            return Ok(false);
        }
        if !cube.inside_interior_of(&w.cell((h, j))) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_split(e: &CubeConfig, k: usize) -> Result<usize, CubeError> {
    if k == 0 || k >= e.dim() {
        return Err(CubeError::InvalidSplit { k, dim: e.dim() });
    }
    Ok(e.dim() - k)
}

/// Cells forced on one factor: boxes whose closures meet must share a
/// cell, so groups are merged until their closed bounding boxes are
/// pairwise disjoint. Each group gets a cell reaching halfway to the
/// nearest projected coordinate (or boundary) on every side.
fn factor_cells(boxes: &[LittleCube]) -> Option<(Vec<LittleCube>, Vec<usize>)> {
    let dim = boxes.first().map_or(0, |b| b.dim());
    let mut groups: Vec<(Vec<usize>, LittleCube)> = boxes
        .iter()
        .enumerate()
        .map(|(i, b)| (vec![i], b.clone()))
        .collect();
    'merge: loop {
        for x in 0..groups.len() {
            for y in x + 1..groups.len() {
                if groups[x].1.closures_meet(&groups[y].1) {
                    let (members, bbox) = groups.remove(y);
                    groups[x].0.extend(members);
                    groups[x].1 = hull(&groups[x].1, &bbox);
                    continue 'merge;
                }
            }
        }
        break;
    }
    groups.sort_by_key(|(m, _)| *m.iter().min().expect("non-empty group"));
    if groups.iter().any(|(_, b)| !b.in_open_unit_cube()) {
        return None;
    }
    let coords: Vec<BTreeSet<ExactRational>> = (0..dim)
        .map(|t| {
            let mut s = BTreeSet::from([ExactRational::zero(), ExactRational::one()]);
            for b in boxes {
                let (a, c) = b.interval(t);
                s.insert(a.clone());
                s.insert(c.clone());
            }
            s
        })
        .collect();
    let mut membership = vec![0; boxes.len()];
    let mut cells = Vec::with_capacity(groups.len());
    for (gi, (members, bbox)) in groups.iter().enumerate() {
        for &m in members {
            membership[m] = gi;
        }
        let intervals = (0..dim)
            .map(|t| {
                let (a, b) = bbox.interval(t);
                let below = coords[t].range(..a.clone()).next_back().expect("0 < a");
                let above = coords[t]
                    .range((std::ops::Bound::Excluded(b.clone()), std::ops::Bound::Unbounded))
                    .next()
                    .expect("b < 1");
                (below.midpoint(a), b.midpoint(above))
            })
            .collect();
        cells.push(LittleCube::new(intervals).expect("cell inside the unit cube"));
    }
    Some((cells, membership))
}

fn hull(a: &LittleCube, b: &LittleCube) -> LittleCube {
    let intervals = a
        .intervals()
        .iter()
        .zip(b.intervals())
        .map(|((p, q), (r, s))| (p.min(r).clone(), q.max(s).clone()))
        .collect();
    LittleCube::new(intervals).expect("hull of valid cubes")
}

/// Searches for a grid witness splitting the axes as `k + ℓ`.
///
/// The grouping in each factor is the finest one any witness can have, so
/// `None` means no witness exists at all.
pub fn find_witness(e: &CubeConfig, k: usize) -> Result<Option<GridWitness>, CubeError> {
    let w = find_witness_in(e.cubes(), e.dim(), k)?;
    if let Some(w) = &w {
        debug_assert!(is_small(e, w)?);
    }
    Ok(w)
}

/// [`find_witness`] on a bare list of cubes, which need not form a
/// configuration.
pub fn find_witness_in(
    cubes: &[LittleCube],
    dim: usize,
    k: usize,
) -> Result<Option<GridWitness>, CubeError> {
    if k == 0 || k >= dim {
        return Err(CubeError::InvalidSplit { k, dim });
    }
    if let Some(c) = cubes.iter().find(|c| c.dim() != dim) {
        return Err(CubeError::DimensionMismatch {
            expected: dim,
            found: c.dim(),
        });
    }
    let l = dim - k;
    let firsts: Vec<LittleCube> = cubes.iter().map(|c| c.project(0..k)).collect();
    let lasts: Vec<LittleCube> = cubes.iter().map(|c| c.project(k..dim)).collect();
    let (Some((fcells, fm)), Some((gcells, gm))) = (factor_cells(&firsts), factor_cells(&lasts)) else {
        return Ok(None);
    };
    let assignment: Vec<(usize, usize)> = fm.iter().zip(&gm).map(|(&h, &j)| (h + 1, j + 1)).collect();
    let distinct: BTreeSet<_> = assignment.iter().collect();
    if distinct.len() != assignment.len() {
        return Ok(None);
    }
    let w = GridWitness {
        f: CubeConfig::plain(k, fcells)?,
        g: CubeConfig::plain(l, gcells)?,
        assignment,
    };
    Ok(Some(w))
}

/// Result of [`shrink_to_small`].
#[derive(Clone, Debug)]
pub struct Shrunk {
    pub lambda: ExactRational,
    pub witness: GridWitness,
    pub scaled: CubeConfig,
    pub depth: u32,
}

/// Tries `λ = 1, 1/2, 1/4, …` down to `2^-max_depth` until `λe` is small.
pub fn shrink_to_small(e: &CubeConfig, k: usize, max_depth: u32) -> Result<Shrunk, CubeError> {
    check_split(e, k)?;
    let mut lambda = ExactRational::one();
    for depth in 0..=max_depth {
        let scaled = scale_config(e, &lambda)?;
        if let Some(witness) = find_witness(&scaled, k)? {
            return Ok(Shrunk {
                lambda,
                witness,
                scaled,
                depth,
            });
        }
        lambda = lambda * ExactRational::half();
    }
    Err(CubeError::SearchExhausted { depth: max_depth })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq(a: (i64, i64), b: (i64, i64)) -> LittleCube {
        LittleCube::from_fractions(&[(a, b), (a, b)])
    }

    fn diagonal_pair() -> CubeConfig {
        CubeConfig::plain(2, vec![sq((1, 20), (9, 20)), sq((11, 20), (19, 20))]).unwrap()
    }

    fn diagonal_witness(assignment: Vec<(usize, usize)>) -> GridWitness {
        let halves = vec![
            LittleCube::from_fractions(&[((1, 40), (19, 40))]),
            LittleCube::from_fractions(&[((21, 40), (39, 40))]),
        ];
        GridWitness {
            f: CubeConfig::plain(1, halves.clone()).unwrap(),
            g: CubeConfig::plain(1, halves).unwrap(),
            assignment,
        }
    }

    #[test]
    fn diagonal_example_is_small() {
        let e = diagonal_pair();
        assert!(is_small(&e, &diagonal_witness(vec![(1, 1), (2, 2)])).unwrap());
        assert!(!is_small(&e, &diagonal_witness(vec![(2, 2), (1, 1)])).unwrap());
        assert!(!is_small(&e, &diagonal_witness(vec![(1, 1), (1, 1)])).unwrap());
    }

    #[test]
    fn empty_is_small() {
        let e = CubeConfig::empty(2);
        let w = GridWitness {
            f: CubeConfig::empty(1),
            g: CubeConfig::empty(1),
            assignment: vec![],
        };
        assert!(is_small(&e, &w).unwrap());
    }

    #[test]
    fn witness_found_for_diagonal() {
        let e = diagonal_pair();
        let w = find_witness(&e, 1).unwrap().unwrap();
        assert!(is_small(&e, &w).unwrap());
        assert_eq!(w.assignment, vec![(1, 1), (2, 2)]);
    }

    #[test]
    fn overlapping_pair_not_small() {
        let raw = vec![sq((1, 10), (5, 10)), sq((4, 10), (9, 10))];
        // the squares share interior points, so they do not form a configuration
        assert!(CubeConfig::plain(2, raw.clone()).is_err());
        assert!(find_witness_in(&raw, 2, 1).unwrap().is_none());
        let touching = CubeConfig::plain(
            2,
            vec![
                sq((1, 10), (5, 10)),
                LittleCube::from_fractions(&[((4, 10), (9, 10)), ((5, 10), (9, 10))]),
            ],
        )
        .unwrap();
        assert!(find_witness(&touching, 1).unwrap().is_none());
        let s = shrink_to_small(&touching, 1, 12).unwrap();
        assert_eq!(s.lambda, ExactRational::half());
        assert_eq!((s.witness.f.len(), s.witness.g.len()), (2, 2));
    }

    #[test]
    fn boundary_cube_needs_shrinking() {
        let e = CubeConfig::plain(2, vec![sq((0, 1), (1, 2))]).unwrap();
        assert!(find_witness(&e, 1).unwrap().is_none());
        let s = shrink_to_small(&e, 1, 12).unwrap();
        assert!(s.lambda < ExactRational::one());
        assert!(is_small(&s.scaled, &s.witness).unwrap());
    }

    #[test]
    fn split_must_be_proper() {
        let e = diagonal_pair();
        assert!(matches!(find_witness(&e, 0), Err(CubeError::InvalidSplit { .. })));
        assert!(matches!(find_witness(&e, 2), Err(CubeError::InvalidSplit { .. })));
    }
}
