use std::collections::HashMap;
use std::hash::Hash;

use super::{FiniteSimplicialSet, IdentityReport, Level, Provenance, SimplicialError};

/// One bidegree `B_{p,q}` with its horizontal and vertical operators.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Cell {
    elements: Vec<String>,
    hfaces: Vec<Vec<usize>>,
    hdegs: Vec<Vec<usize>>,
    vfaces: Vec<Vec<usize>>,
    vdegs: Vec<Vec<usize>>,
}

/// A bisimplicial set tabulated for `p, q ≤ cap`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BisimplicialSet {
    grid: Vec<Vec<Cell>>,
}

type Op<'a, K> = &'a dyn Fn(usize, usize, usize, &K) -> K;

impl BisimplicialSet {
    /// Tabulates from key enumerations and operators `op(p, q, i, key)`.
    pub fn from_model<K: Clone + Eq + Hash>(
        cap: usize,
        cell: &dyn Fn(usize, usize) -> Vec<K>,
        hface: Op<K>,
        hdeg: Op<K>,
        vface: Op<K>,
        vdeg: Op<K>,
        name: &dyn Fn(&K) -> String,
    ) -> Result<Self, SimplicialError> {
        let keys: Vec<Vec<Vec<K>>> = (0..=cap).map(|p| (0..=cap).map(|q| cell(p, q)).collect()).collect();
        let index: Vec<Vec<HashMap<&K, usize>>> = keys
            .iter()
            .map(|row| row.iter().map(|ks| ks.iter().enumerate().map(|(i, k)| (k, i)).collect()).collect())
            .collect();
        let table = |p: usize, q: usize, count: usize, tp: usize, tq: usize, op: Op<K>| {
            (0..count)
                .map(|i| {
                    keys[p][q]
                        .iter()
                        .map(|k| {
                            let image = op(p, q, i, k);
                            index[tp][tq].get(&image).copied().ok_or_else(|| {
                                SimplicialError::InvalidTable(format!("operator leaves B({tp},{tq}): {}", name(&image)))
                            })
                        })
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()
        };
        let mut grid = Vec::with_capacity(cap + 1);
        for p in 0..=cap {
            let mut row = Vec::with_capacity(cap + 1);
            for q in 0..=cap {
                row.push(Cell {
                    elements: keys[p][q].iter().map(name).collect(),
                    hfaces: if p > 0 { table(p, q, p + 1, p - 1, q, hface)? } else { Vec::new() },
                    hdegs: if p < cap { table(p, q, p + 1, p + 1, q, hdeg)? } else { Vec::new() },
                    vfaces: if q > 0 { table(p, q, q + 1, p, q - 1, vface)? } else { Vec::new() },
                    vdegs: if q < cap { table(p, q, q + 1, p, q + 1, vdeg)? } else { Vec::new() },
                });
            }
            grid.push(row);
        }
        Ok(BisimplicialSet { grid })
    }

    /// `(X ⊠ Y)_{p,q} = X_p × Y_q`.
    pub fn external_product(x: &FiniteSimplicialSet, y: &FiniteSimplicialSet) -> Self {
        let cap = x.cap().min(y.cap());
        BisimplicialSet::from_model(
            cap,
            &|p, q| (0..x.size(p)).flat_map(|a| (0..y.size(q)).map(move |b| (a, b))).collect(),
            &|p, _, i, &(a, b)| (x.face(p, i, a), b),
            &|p, _, i, &(a, b)| (x.degeneracy(p, i, a), b),
            &|_, q, j, &(a, b)| (a, y.face(q, j, b)),
            &|_, q, j, &(a, b)| (a, y.degeneracy(q, j, b)),
            &|&(a, b)| format!("{a}.{b}"),
        )
        .expect("external product tables")
    }

    /// Every bidegree equal to `names`, all operators identities.
    pub fn constant(names: &[String], cap: usize) -> Self {
        let n = names.len();
        let id = |_: usize, _: usize, _: usize, x: &usize| *x;
        BisimplicialSet::from_model(cap, &|_, _| (0..n).collect(), &id, &id, &id, &id, &|&x| names[x].clone())
            .expect("constant tables")
    }

    pub fn cap(&self) -> usize {
        self.grid.len() - 1
    }

    pub fn size(&self, p: usize, q: usize) -> usize {
        self.grid[p][q].elements.len()
    }

    /// The horizontal simplicial set at vertical degree `q`.
    pub fn row(&self, q: usize) -> FiniteSimplicialSet {
        let levels = self
            .grid
            .iter()
            .map(|r| Level {
                elements: r[q].elements.clone(),
                faces: r[q].hfaces.clone(),
                degeneracies: r[q].hdegs.clone(),
            })
            .collect();
        FiniteSimplicialSet::from_levels(levels, None).expect("row tables")
    }

    /// The vertical simplicial set at horizontal degree `p`.
    pub fn column(&self, p: usize) -> FiniteSimplicialSet {
        let levels = self.grid[p]
            .iter()
            .map(|c| Level {
                elements: c.elements.clone(),
                faces: c.vfaces.clone(),
                degeneracies: c.vdegs.clone(),
            })
            .collect();
        FiniteSimplicialSet::from_levels(levels, None).expect("column tables")
    }

    /// Identities in every row and column, and commutation of horizontal
    /// with vertical operators.
    pub fn check_identities(&self) -> IdentityReport {
        let cap = self.cap();
        let mut report = IdentityReport::default();
        for d in 0..=cap {
            for r in [self.row(d).check_identities(), self.column(d).check_identities()] {
                report.checked += r.checked;
                report.failures.extend(r.failures);
            }
        }
        let g = &self.grid;
        for p in 0..=cap {
            for q in 0..=cap {
                for x in 0..self.size(p, q) {
                    let hs: Vec<(&Vec<Vec<usize>>, usize, &str)> = [
                        (&g[p][q].hfaces, p.wrapping_sub(1), "d"),
                        (&g[p][q].hdegs, p + 1, "s"),
                    ]
                    .into_iter()
                    .filter(|(t, _, _)| !t.is_empty())
                    .collect();
                    let vs: Vec<(&Vec<Vec<usize>>, usize, &str)> = [
                        (&g[p][q].vfaces, q.wrapping_sub(1), "d"),
                        (&g[p][q].vdegs, q + 1, "s"),
                    ]
                    .into_iter()
                    .filter(|(t, _, _)| !t.is_empty())
                    .collect();
                    for (ht, p2, hn) in &hs {
                        for (vt, q2, vn) in &vs {
                            for i in 0..ht.len() {
                                for j in 0..vt.len() {
                                    // horizontal then vertical against vertical then horizontal
                                    let hv = vertical(&g[*p2][q], vn, j)[ht[i][x]];
                                    let vh = horizontal(&g[p][*q2], hn, i)[vt[j][x]];
                                    report.checked += 1;
                                    if hv != vh && report.failures.len() < 16 {
                                        report.failures.push(super::IdentityFailure {
                                            identity: format!("{hn}h{i} {vn}v{j} commute at ({p},{q})"),
                                            level: p + q,
                                            element: x,
                                            lhs: hv,
                                            rhs: vh,
                                        });
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        report
    }

    /// `diag(B)_n = B_{n,n}` with `dᵢ = dʰᵢdᵛᵢ` and `sᵢ = sʰᵢsᵛᵢ`.
    pub fn diag(&self) -> FiniteSimplicialSet {
        let cap = self.cap();
        let g = &self.grid;
        let levels = (0..=cap)
            .map(|n| {
                let cell = &g[n][n];
                let faces = if n == 0 {
                    Vec::new()
                } else {
                    (0..=n)
                        .map(|i| (0..cell.elements.len()).map(|x| g[n][n - 1].hfaces[i][cell.vfaces[i][x]]).collect())
                        .collect()
                };
                let degeneracies = if n == cap {
                    Vec::new()
                } else {
                    (0..=n)
                        .map(|i| (0..cell.elements.len()).map(|x| g[n][n + 1].hdegs[i][cell.vdegs[i][x]]).collect())
                        .collect()
                };
                Level {
                    elements: cell.elements.clone(),
                    faces,
                    degeneracies,
                }
            })
            .collect();
        FiniteSimplicialSet::from_levels(levels, None)
            .expect("diagonal tables")
            .with_provenance(Provenance::new("diag", &[]))
    }
}

fn vertical<'a>(cell: &'a Cell, kind: &str, j: usize) -> &'a [usize] {
    if kind == "d" {
        &cell.vfaces[j]
    } else {
        &cell.vdegs[j]
    }
}

fn horizontal<'a>(cell: &'a Cell, kind: &str, i: usize) -> &'a [usize] {
    if kind == "d" {
        &cell.hfaces[i]
    } else {
        &cell.hdegs[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::{nerve, FiniteCategory};

    #[test]
    fn constant_diagonal() {
        let names = vec!["a".to_string(), "b".to_string()];
        let b = BisimplicialSet::constant(&names, 3);
        assert!(b.check_identities().passed());
        assert_eq!(b.diag(), FiniteSimplicialSet::discrete(&names, 3).with_provenance(Provenance::new("diag", &[])));
    }

    #[test]
    fn diagonal_of_external_product_is_product() {
        let x = FiniteSimplicialSet::simplex(1, 3);
        let y = FiniteSimplicialSet::simplex(2, 3);
        let b = BisimplicialSet::external_product(&x, &y);
        assert!(b.check_identities().passed());
        let d = b.diag();
        let p = x.product(&y);
        assert_eq!(d.sizes(), p.sizes());
        for n in 0..=3 {
            for i in 0..=n {
                if n > 0 {
                    assert_eq!(d.levels()[n].faces[i], p.levels()[n].faces[i]);
                }
            }
        }
    }

    #[test]
    fn nerve_of_product_category() {
        let c = FiniteCategory::arrow();
        let d = FiniteCategory::iso_pair();
        let b = BisimplicialSet::external_product(&nerve(&c, 3), &nerve(&d, 3));
        assert_eq!(b.diag().sizes(), nerve(&c.product(&d), 3).sizes());
    }

    #[test]
    fn broken_commutation_detected() {
        let x = FiniteSimplicialSet::simplex(1, 2);
        let mut b = BisimplicialSet::external_product(&x, &x);
        b.grid[1][1].vfaces[0].swap(0, 1);
        assert!(!b.check_identities().passed());
    }
}
