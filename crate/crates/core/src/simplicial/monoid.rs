use serde::{Deserialize, Serialize};

use super::{FiniteSimplicialSet, Provenance, SimplicialError};

/// A finite monoid on `0..order` with `table[a][b] = a·b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MonoidFile", into = "MonoidFile")]
pub struct Monoid {
    unit: usize,
    table: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MonoidFile {
    pub unit: usize,
    pub table: Vec<Vec<usize>>,
}

impl From<Monoid> for MonoidFile {
    fn from(m: Monoid) -> Self {
        MonoidFile {
            unit: m.unit,
            table: m.table,
        }
    }
}

impl TryFrom<MonoidFile> for Monoid {
    type Error = SimplicialError;

    fn try_from(f: MonoidFile) -> Result<Self, Self::Error> {
        Monoid::new(f.unit, f.table)
    }
}

impl Monoid {
    pub fn new(unit: usize, table: Vec<Vec<usize>>) -> Result<Self, SimplicialError> {
        let n = table.len();
        let bad = |m: &str| Err(SimplicialError::InvalidAction(m.to_string()));
        if unit >= n {
            return bad("unit out of range");
        }
        if table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return bad("table is not square over the carrier");
        }
        if (0..n).any(|a| table[unit][a] != a || table[a][unit] != a) {
            return bad("unit law fails");
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return bad("multiplication is not associative");
                    }
                }
            }
        }
        Ok(Monoid { unit, table })
    }

    pub fn trivial() -> Self {
        Monoid::new(0, vec![vec![0]]).expect("trivial monoid")
    }

    /// `{1, s}` with `s² = s`.
    pub fn idempotent() -> Self {
        Monoid::new(0, vec![vec![0, 1], vec![1, 1]]).expect("idempotent monoid")
    }

    /// The cyclic group of order `n`.
    pub fn cyclic(n: usize) -> Self {
        Monoid::new(0, (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()).expect("cyclic group")
    }

    /// Every monoid structure on `0..order` with unit `0`.
    pub fn all(order: usize) -> Vec<Monoid> {
        if order == 0 {
            return Vec::new();
        }
        let free: Vec<(usize, usize)> = (1..order).flat_map(|a| (1..order).map(move |b| (a, b))).collect();
        let mut out = Vec::new();
        let total = order.pow(free.len() as u32);
        for code in 0..total {
            let mut table: Vec<Vec<usize>> = (0..order)
                .map(|a| (0..order).map(|b| if a == 0 { b } else if b == 0 { a } else { 0 }).collect())
                .collect();
            let mut c = code;
            for &(a, b) in &free {
                table[a][b] = c % order;
                c /= order;
            }
            if let Ok(m) = Monoid::new(0, table) {
                out.push(m);
            }
        }
        out
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// A finite set with a monoid action `act[r][x]`, read as `r·x` on the left
/// or `x·r` on the right.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MSet {
    pub side: Side,
    pub size: usize,
    pub act: Vec<Vec<usize>>,
}

impl MSet {
    pub fn new(monoid: &Monoid, side: Side, size: usize, act: Vec<Vec<usize>>) -> Result<Self, SimplicialError> {
        let s = MSet { side, size, act };
        s.validate(monoid)?;
        Ok(s)
    }

    /// `M` acting on itself by multiplication.
    pub fn regular(monoid: &Monoid, side: Side) -> Self {
        let n = monoid.order();
        let act = (0..n)
            .map(|r| {
                (0..n)
                    .map(|x| match side {
                        Side::Left => monoid.mul(r, x),
                        Side::Right => monoid.mul(x, r),
                    })
                    .collect()
            })
            .collect();
        MSet { side, size: n, act }
    }

    /// A set on which every element acts as the identity.
    pub fn trivial(monoid: &Monoid, side: Side, size: usize) -> Self {
        MSet {
            side,
            size,
            act: vec![(0..size).collect(); monoid.order()],
        }
    }

    pub fn validate(&self, monoid: &Monoid) -> Result<(), SimplicialError> {
        let bad = |m: &str| Err(SimplicialError::InvalidAction(m.to_string()));
        if self.act.len() != monoid.order() || self.act.iter().any(|row| row.len() != self.size || row.iter().any(|&x| x >= self.size)) {
            return bad("action table shape");
        }
        for x in 0..self.size {
            if self.act[monoid.unit()][x] != x {
                return bad("unit does not act trivially");
            }
            for a in 0..monoid.order() {
                for b in 0..monoid.order() {
                    let (lhs, rhs) = match self.side {
                        Side::Left => (self.act[a][self.act[b][x]], self.act[monoid.mul(a, b)][x]),
                        Side::Right => (self.act[b][self.act[a][x]], self.act[monoid.mul(a, b)][x]),
                    };
                    if lhs != rhs {
                        return bad("action is not associative");
                    }
                }
            }
        }
        Ok(())
    }

    pub fn apply(&self, r: usize, x: usize) -> usize {
        self.act[r][x]
    }

    /// Every action of `monoid` on a set of `size` elements on the given side.
    pub fn all(monoid: &Monoid, side: Side, size: usize) -> Vec<MSet> {
        let n = monoid.order();
        let rows: Vec<Vec<usize>> = if size == 0 {
            vec![Vec::new()]
        } else {
            (0..size.pow(size as u32))
                .map(|mut c| {
                    (0..size)
                        .map(|_| {
                            let d = c % size;
                            c /= size;
                            d
                        })
                        .collect()
                })
                .collect()
        };
        let others: Vec<usize> = (0..n).filter(|&r| r != monoid.unit()).collect();
        let total = rows.len().pow(others.len() as u32);
        let mut out = Vec::new();
        for mut code in 0..total {
            let mut act = vec![(0..size).collect::<Vec<usize>>(); n];
            for &r in &others {
                act[r] = rows[code % rows.len()].clone();
                code /= rows.len();
            }
            if let Ok(s) = MSet::new(monoid, side, size, act) {
                out.push(s);
            }
        }
        out
    }
}

/// `B(X, M, Y)`: level `k` is `X × M^k × Y`.
pub fn two_sided_bar(x: &MSet, m: &Monoid, y: &MSet, cap: usize) -> Result<FiniteSimplicialSet, SimplicialError> {
    if x.side != Side::Right || y.side != Side::Left {
        return Err(SimplicialError::InvalidAction("bar needs a right and a left action".into()));
    }
    x.validate(m)?;
    y.validate(m)?;
    type Key = (usize, Vec<usize>, usize);
    let level = |k: usize| {
        let mut out: Vec<Key> = Vec::new();
        let words = m.order().pow(k as u32);
        for a in 0..x.size {
            for mut w in 0..words {
                let mut word = Vec::with_capacity(k);
                for _ in 0..k {
                    word.push(w % m.order());
                    w /= m.order();
                }
                word.reverse();
                for b in 0..y.size {
                    out.push((a, word.clone(), b));
                }
            }
        }
        out
    };
    let face = |k: usize, i: usize, (a, w, b): &Key| {
        let mut w = w.clone();
        if i == 0 {
            let r = w.remove(0);
            (x.apply(r, *a), w, *b)
        } else if i == k {
            let r = w.pop().expect("k ≥ 1");
            (*a, w, y.apply(r, *b))
        } else {
            let r = w.remove(i);
            w[i - 1] = m.mul(w[i - 1], r);
            (*a, w, *b)
        }
    };
    let degeneracy = |_: usize, i: usize, (a, w, b): &Key| {
        let mut w = w.clone();
        w.insert(i, m.unit());
        (*a, w, *b)
    };
    let name = |(a, w, b): &Key| format!("x{a}{w:?}y{b}").replace(' ', "");
    Ok(FiniteSimplicialSet::from_model(cap, level, face, degeneracy, name)?.with_provenance(Provenance::new(
        "two-sided-bar",
        &[
            &format!("|X| = {}", x.size),
            &format!("|M| = {}", m.order()),
            &format!("|Y| = {}", y.size),
        ],
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monoid_counts() {
        assert_eq!(Monoid::all(1).len(), 1);
        assert_eq!(Monoid::all(2).len(), 2);
        // labelled monoids of order 3 with unit 0
        assert_eq!(Monoid::all(3).len(), 11);
    }

    #[test]
    fn trivial_monoid_bar() {
        let m = Monoid::trivial();
        let x = MSet::trivial(&m, Side::Right, 2);
        let y = MSet::trivial(&m, Side::Left, 3);
        let b = two_sided_bar(&x, &m, &y, 3).unwrap();
        assert_eq!(b.sizes(), vec![6, 6, 6, 6]);
        assert_eq!(b.pi0().len(), 6);
    }

    #[test]
    fn idempotent_bar_levels() {
        let m = Monoid::idempotent();
        let pt_r = MSet::trivial(&m, Side::Right, 1);
        let pt_l = MSet::trivial(&m, Side::Left, 1);
        let b = two_sided_bar(&pt_r, &m, &pt_l, 4).unwrap();
        assert_eq!(b.sizes(), vec![1, 2, 4, 8, 16]);
        assert!(b.check_identities().passed());
    }

    #[test]
    fn regular_bar_components_are_the_monoid() {
        let m = Monoid::cyclic(3);
        let b = two_sided_bar(&MSet::regular(&m, Side::Right), &m, &MSet::regular(&m, Side::Left), 2).unwrap();
        assert_eq!(b.pi0().len(), m.order());
    }

    #[test]
    fn invalid_action_rejected() {
        let m = Monoid::cyclic(2);
        assert!(MSet::new(&m, Side::Left, 2, vec![vec![0, 1], vec![0, 0]]).is_err());
        assert!(Monoid::new(0, vec![vec![0, 1], vec![0, 1]]).is_err());
    }
}
