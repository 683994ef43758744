use std::collections::HashMap;

use crate::boxprod::{BoxWord, EquivalenceStrategy, RewriteStep, Rewriter};
use crate::operad::{Color, OperadTree, Permutation};

use super::{is_small, phi_eval, CubeColours, CubeConfig, CubeError, CubeGen, GridWitness, LittleCube};

/// `ψ(e, w)`: `f` grafted with `p` copies of `g`, each occupied cell carrying
/// the adjusters `α(β(i))` and each empty cell a left nullary.
pub fn psi_decompose(e: &CubeConfig, w: &GridWitness) -> Result<BoxWord<CubeGen>, CubeError> {
    psi_decompose_with(e, w, Color::Left)
}

/// [`psi_decompose`] with empty cells filled by the nullary of `empty`.
pub fn psi_decompose_with(
    e: &CubeConfig,
    w: &GridWitness,
    empty: Color,
) -> Result<BoxWord<CubeGen>, CubeError> {
    if !is_small(e, w)? {
        return Err(CubeError::InvalidWitness(format!(
            "{e} is not small for f = {}, g = {}",
            w.f, w.g
        )));
    }
    let (k, l) = (w.k(), w.l());
    let filler = match empty {
        Color::Left => CubeGen::left(CubeConfig::empty(k)),
        Color::Right => CubeGen::right(CubeConfig::empty(l)),
        Color::Single => return Err(CubeError::MalformedWord("uncoloured nullary".into())),
    };
    let occupant: HashMap<(usize, usize), usize> = w
        .assignment
        .iter()
        .enumerate()
        .map(|(i, &cell)| (cell, i))
        .collect();
    let g = CubeGen::right(w.g.to_plain());
    let rows = (1..=w.f.len())
        .map(|h| {
            let cells = (1..=w.g.len())
                .map(|j| match occupant.get(&(h, j)) {
                    Some(&i) => cell_word(
                        &w.f.cubes()[h - 1],
                        &w.g.cubes()[j - 1],
                        &e.cubes()[i],
                        k,
                        i + 1,
                    ),
                    None => Ok(OperadTree::Node {
                        op: filler.clone(),
                        children: Vec::new(),
                    }),
                })
                .collect::<Result<Vec<_>, CubeError>>()?;
            Ok(OperadTree::Node {
                op: g.clone(),
                children: cells,
            })
        })
        .collect::<Result<Vec<_>, CubeError>>()?;
    let tree = OperadTree::Node {
        op: CubeGen::left(w.f.to_plain()),
        children: rows,
    };
    Ok(BoxWord::new(tree)?)
}

fn single(c: LittleCube) -> CubeConfig {
    let dim = c.dim();
    CubeConfig::plain(dim, vec![c]).expect("one cube")
}

fn cell_word(
    fh: &LittleCube,
    gj: &LittleCube,
    cube: &LittleCube,
    k: usize,
    leaf: usize,
) -> Result<OperadTree<CubeGen>, CubeError> {
    let dim = cube.dim();
    let alpha = fh.solve(&cube.project(0..k))?;
    let beta = gj.solve(&cube.project(k..dim))?;
    Ok(OperadTree::Node {
        op: CubeGen::left(single(alpha)),
        children: vec![OperadTree::Node {
            op: CubeGen::right(single(beta)),
            children: vec![OperadTree::Leaf(leaf)],
        }],
    })
}

/// A word recognised as `ψ(e, w)` for some witness.
struct PsiShape {
    f: CubeConfig,
    g: CubeConfig,
    /// Leaf label per cell, `None` for nullaries; `right_nullary` marks
    /// empty cells of the right colour.
    cells: Vec<Vec<Option<usize>>>,
    right_nullary: Vec<Vec<bool>>,
}

fn recognise(w: &BoxWord<CubeGen>, k: usize, l: usize) -> Option<PsiShape> {
    let OperadTree::Node { op: f, children: rows } = w.tree() else {
        return None;
    };
    if f.color != Color::Left || f.config.dim() != k {
        return None;
    }
    let g = rows.first()?.generator()?.clone();
    if g.color != Color::Right || g.config.dim() != l {
        return None;
    }
    let mut cells = Vec::with_capacity(rows.len());
    let mut right_nullary = Vec::with_capacity(rows.len());
    for row in rows {
        if row.generator() != Some(&g) {
            return None;
        }
        let mut labels = Vec::new();
        let mut marks = Vec::new();
        for cell in row.children() {
            let op = cell.generator()?;
            if op.config.is_empty() {
                labels.push(None);
                marks.push(op.color == Color::Right);
                continue;
            }
            let [inner] = cell.children() else { return None };
            let beta = inner.generator()?;
            let [OperadTree::Leaf(i)] = inner.children() else {
                return None;
            };
            if op.color != Color::Left || op.config.len() != 1 || beta.color != Color::Right || beta.config.len() != 1 {
                return None;
            }
            labels.push(Some(*i));
            marks.push(false);
        }
        cells.push(labels);
        right_nullary.push(marks);
    }
    Some(PsiShape {
        f: f.config.clone(),
        g: g.config.clone(),
        cells,
        right_nullary,
    })
}

/// Subcells `a ∩ b` of each `a`, grouped by `a`.
fn refine(a: &CubeConfig, b: &CubeConfig) -> Vec<Vec<LittleCube>> {
    a.cubes()
        .iter()
        .map(|x| b.cubes().iter().filter_map(|y| x.intersection(y)).collect())
        .collect()
}

fn relative(outer: &LittleCube, subs: &[LittleCube]) -> Option<CubeConfig> {
    let cubes = subs.iter().map(|s| outer.solve(s)).collect::<Result<Vec<_>, _>>().ok()?;
    CubeConfig::plain(outer.dim(), cubes).ok()
}

fn nullary(color: Color, dim: usize) -> CubeGen {
    CubeGen {
        color,
        config: CubeConfig::empty(dim),
    }
}

/// Rewrites `ψ(e, (f, g))` into `ψ(e, (f', g'))` where `f'`, `g'` refine the
/// given witness by `other_f`, `other_g`, grouped by the cells of `f` and `g`.
fn refine_trace(
    shape: &PsiShape,
    e: &CubeConfig,
    other_f: &CubeConfig,
    other_g: &CubeConfig,
    k: usize,
    l: usize,
) -> Option<(Vec<RewriteStep<CubeGen>>, Vec<LittleCube>, Vec<LittleCube>)> {
    let zl = nullary(Color::Left, k);
    let zr = nullary(Color::Right, l);
    let firsts: Vec<LittleCube> = e.cubes().iter().map(|c| c.project(0..k)).collect();
    let lasts: Vec<LittleCube> = e.cubes().iter().map(|c| c.project(k..k + l)).collect();
    let fsubs = refine(&shape.f, other_f);
    let gsubs = refine(&shape.g, other_g);
    let mut trace = Vec::new();

    for (h, marks) in shape.right_nullary.iter().enumerate() {
        for (j, &m) in marks.iter().enumerate() {
            if m {
                trace.push(RewriteStep::SwapNullary {
                    path: vec![h, j],
                    to: zl.clone(),
                });
            }
        }
    }

    let mut flat_rows: Vec<Vec<Option<usize>>> = Vec::new();
    for (h, row) in shape.cells.iter().enumerate() {
        let subs = &fsubs[h];
        let u = CubeGen::left(relative(&shape.f.cubes()[h], subs)?);
        let mut split_rows = vec![vec![None; row.len()]; subs.len()];
        for (j, cell) in row.iter().enumerate() {
            let path = vec![h, j];
            match cell {
                Some(i) => {
                    let target = &firsts[i - 1];
                    let r = subs.iter().position(|s| target.inside_interior_of(s))?;
                    let alpha = subs[r].solve(target).ok()?;
                    let inners = (0..subs.len())
                        .map(|x| {
                            Some(if x == r {
                                CubeGen::left(single(alpha.clone()))
                            } else {
                                zl.clone()
                            })
                        })
                        .collect();
                    trace.push(RewriteStep::Split {
                        path,
                        outer: u.clone(),
                        inners,
                    });
                    split_rows[r][j] = Some(*i);
                }
                None if !subs.is_empty() => trace.push(RewriteStep::Split {
                    path,
                    outer: u.clone(),
                    inners: vec![Some(zl.clone()); subs.len()],
                }),
                None => {}
            }
        }
        flat_rows.extend(split_rows);
    }
    for (h, subs) in fsubs.iter().enumerate() {
        trace.push(if subs.is_empty() {
            RewriteStep::AbsorbNullary { path: vec![h] }
        } else {
            RewriteStep::Interchange { path: vec![h] }
        });
    }
    trace.push(RewriteStep::Merge {
        path: Vec::new(),
        which: vec![true; shape.f.len()],
    });

    let vs = shape
        .g
        .cubes()
        .iter()
        .zip(&gsubs)
        .map(|(gj, subs)| relative(gj, subs).map(CubeGen::right))
        .collect::<Option<Vec<_>>>()?;
    for (c, row) in flat_rows.iter().enumerate() {
        for (j, cell) in row.iter().enumerate() {
            let subs = &gsubs[j];
            let path = vec![c, j];
            match cell {
                Some(i) => {
                    let target = &lasts[i - 1];
                    let t = subs.iter().position(|s| target.inside_interior_of(s))?;
                    let beta = subs[t].solve(target).ok()?;
                    trace.push(RewriteStep::Interchange { path: path.clone() });
                    let inners = (0..subs.len())
                        .map(|x| {
                            Some(if x == t {
                                CubeGen::right(single(beta.clone()))
                            } else {
                                zr.clone()
                            })
                        })
                        .collect();
                    trace.push(RewriteStep::Split {
                        path: path.clone(),
                        outer: vs[j].clone(),
                        inners,
                    });
                    for x in 0..subs.len() {
                        let mut p = path.clone();
                        p.push(x);
                        trace.push(if x == t {
                            RewriteStep::Interchange { path: p }
                        } else {
                            RewriteStep::SwapNullary { path: p, to: zl.clone() }
                        });
                    }
                }
                None if !subs.is_empty() => trace.push(RewriteStep::EmitNullary {
                    path,
                    node: vs[j].clone(),
                }),
                None => trace.push(RewriteStep::SwapNullary { path, to: zr.clone() }),
            }
        }
        trace.push(RewriteStep::Merge {
            path: vec![c],
            which: vec![true; shape.g.len()],
        });
    }
    Some((trace, fsubs.concat(), gsubs.concat()))
}

/// Reordering `σ` with `(from·σ)ᵢ = toᵢ`.
fn matching(from: &[LittleCube], to: &[LittleCube]) -> Option<Permutation> {
    let images = to
        .iter()
        .map(|c| from.iter().position(|x| x == c))
        .collect::<Option<Vec<_>>>()?;
    Permutation::from_zero_based(images).ok()
}

/// Connects two ψ-words of the same configuration through the word of the
/// common subdivision of their witnesses.
#[derive(Clone, Copy, Debug)]
pub struct WitnessIndependence {
    pub k: usize,
    pub l: usize,
}

impl WitnessIndependence {
    pub fn new(k: usize, l: usize) -> Self {
        WitnessIndependence { k, l }
    }
}

impl EquivalenceStrategy<CubeGen> for WitnessIndependence {
    fn name(&self) -> &str {
        "common-subdivision"
    }

    fn propose(
        &self,
        w1: &BoxWord<CubeGen>,
        w2: &BoxWord<CubeGen>,
    ) -> Option<Vec<RewriteStep<CubeGen>>> {
        let (k, l) = (self.k, self.l);
        let s1 = recognise(w1, k, l)?;
        let s2 = recognise(w2, k, l)?;
        let e = phi_eval(w1, k, l).ok()?;
        if e.is_empty() || phi_eval(w2, k, l).ok()? != e {
            return None;
        }
        let (t1, f1, g1) = refine_trace(&s1, &e, &s2.f, &s2.g, k, l)?;
        let (mut t2, f2, g2) = refine_trace(&s2, &e, &s1.f, &s1.g, k, l)?;
        t2.push(RewriteStep::Permute {
            path: Vec::new(),
            perm: matching(&f2, &f1)?,
        });
        let sigma = matching(&g2, &g1)?;
        t2.extend((0..f1.len()).map(|c| RewriteStep::Permute {
            path: vec![c],
            perm: sigma.clone(),
        }));
        let colours = CubeColours::new(k, l);
        let rewriter = Rewriter::new(&colours);
        let (back, end) = rewriter.invert_trace(w2, &t2).ok()?;
        if rewriter.replay(w1, &t1).ok()? != end {
            return None;
        }
        let mut trace = t1;
        trace.extend(back);
        Some(trace)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxprod::EquivalenceVerdict;
    use crate::cubes::find_witness;

    fn sq(a: (i64, i64), b: (i64, i64)) -> LittleCube {
        LittleCube::from_fractions(&[(a, b), (a, b)])
    }

    fn line(cells: &[((i64, i64), (i64, i64))]) -> CubeConfig {
        CubeConfig::plain(
            1,
            cells.iter().map(|&c| LittleCube::from_fractions(&[c])).collect(),
        )
        .unwrap()
    }

    fn diagonal() -> CubeConfig {
        CubeConfig::plain(2, vec![sq((1, 20), (9, 20)), sq((11, 20), (19, 20))]).unwrap()
    }

    #[test]
    fn diagonal_roundtrip() {
        let e = diagonal();
        let w = find_witness(&e, 1).unwrap().unwrap();
        let word = psi_decompose(&e, &w).unwrap();
        assert_eq!(phi_eval(&word, 1, 1).unwrap(), e);
        assert_eq!(word.node_count(), 1 + 2 + 2 * 2 + 2);
    }

    #[test]
    fn single_cube_one_adjuster_pair() {
        let e = CubeConfig::plain(2, vec![sq((1, 4), (3, 4))]).unwrap();
        let w = find_witness(&e, 1).unwrap().unwrap();
        assert_eq!((w.f.len(), w.g.len()), (1, 1));
        let word = psi_decompose(&e, &w).unwrap();
        assert_eq!(word.node_count(), 4);
        assert_eq!(phi_eval(&word, 1, 1).unwrap(), e);
    }

    #[test]
    fn invalid_witness_rejected() {
        let e = diagonal();
        let mut w = find_witness(&e, 1).unwrap().unwrap();
        w.assignment.swap(0, 1);
        assert!(matches!(psi_decompose(&e, &w), Err(CubeError::InvalidWitness(_))));
    }

    #[test]
    fn right_nullaries_evaluate_the_same() {
        let e = diagonal();
        let w = find_witness(&e, 1).unwrap().unwrap();
        let word = psi_decompose_with(&e, &w, Color::Right).unwrap();
        assert_eq!(phi_eval(&word, 1, 1).unwrap(), e);
    }

    #[test]
    fn two_witnesses_are_equivalent() {
        let e = diagonal();
        let w1 = find_witness(&e, 1).unwrap().unwrap();
        let w2 = GridWitness {
            f: line(&[((0, 1), (1, 2)), ((1, 2), (1, 1))]),
            g: line(&[((0, 1), (1, 2)), ((1, 2), (1, 1))]),
            assignment: vec![(1, 1), (2, 2)],
        };
        assert!(is_small(&e, &w2).unwrap());
        let a = psi_decompose(&e, &w1).unwrap();
        let b = psi_decompose_with(&e, &w2, Color::Right).unwrap();
        let colours = CubeColours::new(1, 1);
        let r = Rewriter::new(&colours);
        let strategy = WitnessIndependence::new(1, 1);
        match r.equivalent_with(&a, &b, 10_000, &[&strategy]).unwrap() {
            EquivalenceVerdict::Equal { trace } => assert_eq!(r.replay(&a, &trace).unwrap(), b),
            v => panic!("expected equal, got {}", v.label()),
        }
    }
}
