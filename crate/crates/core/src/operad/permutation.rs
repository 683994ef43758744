use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::OperadError;

/// A bijection of `{1, …, n}`.
///
/// Images are exposed 1-indexed; storage is 0-indexed. Permutations act on
/// operad elements from the right, so `x·σ·τ = x·(σ∘τ)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            map: (0..n).collect(),
        }
    }

    /// Builds a permutation from its 1-indexed image list.
    pub fn from_images(images: Vec<usize>) -> Result<Self, OperadError> {
        let n = images.len();
        let mut zero = Vec::with_capacity(n);
        for &v in &images {
            if v == 0 || v > n {
                return Err(OperadError::NotAPermutation(images));
            }
            zero.push(v - 1);
        }
        Self::from_zero_based(zero).map_err(|_| OperadError::NotAPermutation(images))
    }

    pub fn from_zero_based(map: Vec<usize>) -> Result<Self, OperadError> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &v in &map {
            if v >= n || seen[v] {
                return Err(OperadError::NotAPermutation(
                    map.iter().map(|x| x + 1).collect(),
                ));
            }
            seen[v] = true;
        }
        Ok(Permutation { map })
    }

    /// The transposition exchanging the 1-indexed points `i` and `j`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Result<Self, OperadError> {
        if i == 0 || j == 0 || i > n || j > n {
            return Err(OperadError::SizeMismatch {
                expected: n,
                found: i.max(j),
            });
        }
        let mut map: Vec<usize> = (0..n).collect();
        map.swap(i - 1, j - 1);
        Ok(Permutation { map })
    }

    pub fn size(&self) -> usize {
        self.map.len()
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// Image of the 1-indexed point `i`.
    pub fn image(&self, i: usize) -> usize {
        self.map[i - 1] + 1
    }

    /// Image of the 0-indexed point `i`, 0-indexed.
    #[inline]
    pub fn apply0(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn images(&self) -> Vec<usize> {
        self.map.iter().map(|v| v + 1).collect()
    }

    pub fn zero_based(&self) -> &[usize] {
        &self.map
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation, OperadError> {
        if self.size() != other.size() {
            return Err(OperadError::SizeMismatch {
                expected: self.size(),
                found: other.size(),
            });
        }
        Ok(Permutation {
            map: other.map.iter().map(|&i| self.map[i]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.size()];
        for (i, &v) in self.map.iter().enumerate() {
            inv[v] = i;
        }
        Permutation { map: inv }
    }

    /// Block sum `σ₁ ⊕ … ⊕ σₖ`, each acting on its own consecutive block.
    pub fn block_sum(parts: &[Permutation]) -> Permutation {
        let mut map = Vec::new();
        let mut offset = 0;
        for p in parts {
            map.extend(p.map.iter().map(|v| v + offset));
            offset += p.size();
        }
        Permutation { map }
    }

    /// Lexicographic rank among all permutations of the same size.
    pub fn rank(&self) -> usize {
        let n = self.size();
        let mut rank = 0;
        let mut used = vec![false; n];
        for (pos, &v) in self.map.iter().enumerate() {
            let smaller = (0..v).filter(|&u| !used[u]).count();
            rank += smaller * factorial(n - pos - 1);
            used[v] = true;
        }
        rank
    }

    pub fn unrank(n: usize, mut rank: usize) -> Permutation {
        let mut pool: Vec<usize> = (0..n).collect();
        let mut map = Vec::with_capacity(n);
        for pos in 0..n {
            let f = factorial(n - pos - 1);
            let idx = rank / f;
            rank %= f;
            map.push(pool.remove(idx));
        }
        Permutation { map }
    }

    /// All permutations of size `n` in lexicographic order.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        (0..factorial(n)).map(move |r| Permutation::unrank(n, r))
    }
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// The block permutation `λ≀(κ₁,…,κₙ)` on `{1,…,Σkᵢ}`:
///
/// `(λ≀κ)(Σ_{i<j} k_{λ(i)} + p) = Σ_{i<λ(j)} kᵢ + κ_{λ(j)}(p)`
/// for `j = 1..n`, `p = 1..k_{λ(j)}`.
pub fn block_wreath(
    lambda: &Permutation,
    kappas: &[Permutation],
    ks: &[usize],
) -> Result<Permutation, OperadError> {
    let n = lambda.size();
    if kappas.len() != n || ks.len() != n {
        return Err(OperadError::SizeMismatch {
            expected: n,
            found: if kappas.len() != n { kappas.len() } else { ks.len() },
        });
    }
    for (kappa, &k) in kappas.iter().zip(ks) {
        if kappa.size() != k {
            return Err(OperadError::SizeMismatch {
                expected: k,
                found: kappa.size(),
            });
        }
    }
    let mut natural_offset = vec![0; n + 1];
    for i in 0..n {
        natural_offset[i + 1] = natural_offset[i] + ks[i];
    }
    let mut map = vec![0; natural_offset[n]];
    let mut source = 0;
    for j in 0..n {
        let block = lambda.apply0(j);
        for p in 0..ks[block] {
            map[source + p] = natural_offset[block] + kappas[block].apply0(p);
        }
        source += ks[block];
    }
    Permutation::from_zero_based(map)
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.map.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", v + 1)?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Permutation {
    type Err = OperadError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| OperadError::Parse(format!("expected [..], got {s:?}")))?;
        if body.trim().is_empty() {
            return Ok(Permutation::identity(0));
        }
        let images = body
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|e| OperadError::Parse(format!("bad image {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Permutation::from_images(images)
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = OperadError;

    fn try_from(images: Vec<usize>) -> Result<Self, Self::Error> {
        Permutation::from_images(images)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.images()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(images: &[usize]) -> Permutation {
        Permutation::from_images(images.to_vec()).unwrap()
    }

    /// Oracle: lay out the blocks in the source order given by λ, then
    /// permute entries inside each block by κ, reading off target positions.
    fn wreath_by_blocks(lambda: &Permutation, kappas: &[Permutation], ks: &[usize]) -> Vec<usize> {
        let n = ks.len();
        let target_blocks: Vec<Vec<usize>> = {
            let mut start = 1;
            ks.iter()
                .map(|&k| {
                    let b: Vec<usize> = (start..start + k).collect();
                    start += k;
                    b
                })
                .collect()
        };
        let mut images = Vec::new();
        for j in 1..=n {
            let block = lambda.image(j);
            for p in 1..=ks[block - 1] {
                images.push(target_blocks[block - 1][kappas[block - 1].image(p) - 1]);
            }
        }
        images
    }

    #[test]
    fn wreath_identity_case() {
        let w = block_wreath(
            &Permutation::identity(2),
            &[Permutation::identity(1), Permutation::identity(1)],
            &[1, 1],
        )
        .unwrap();
        assert!(w.is_identity());
    }

    #[test]
    fn wreath_single_block_is_inner_permutation() {
        let w = block_wreath(&Permutation::identity(1), &[perm(&[2, 1])], &[2]).unwrap();
        assert_eq!(w, perm(&[2, 1]));
    }

    #[test]
    fn wreath_swapped_blocks() {
        let lambda = perm(&[2, 1]);
        let kappas = [Permutation::identity(1), Permutation::identity(2)];
        let expected = wreath_by_blocks(&lambda, &kappas, &[1, 2]);
        assert_eq!(expected, vec![2, 3, 1]);
        let w = block_wreath(&lambda, &kappas, &[1, 2]).unwrap();
        assert_eq!(w.images(), expected);
    }

    #[test]
    fn wreath_size_mismatch() {
        let err = block_wreath(&Permutation::identity(2), &[Permutation::identity(1)], &[1]);
        assert!(matches!(err, Err(OperadError::SizeMismatch { .. })));
        let err = block_wreath(&Permutation::identity(1), &[Permutation::identity(2)], &[3]);
        assert!(err.is_err());
    }

    #[test]
    fn rank_roundtrip_and_order() {
        let all: Vec<_> = Permutation::all(4).collect();
        assert_eq!(all.len(), 24);
        for (r, p) in all.iter().enumerate() {
            assert_eq!(p.rank(), r);
        }
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn parse_and_print() {
        let p: Permutation = "[2,3,1]".parse().unwrap();
        assert_eq!(p.to_string(), "[2,3,1]");
        assert_eq!(p.image(1), 2);
        assert!("[1,1]".parse::<Permutation>().is_err());
        assert!("1,2".parse::<Permutation>().is_err());
        assert_eq!("[]".parse::<Permutation>().unwrap().size(), 0);
    }

    #[test]
    fn compose_and_inverse() {
        let s = perm(&[2, 3, 1]);
        let t = perm(&[1, 3, 2]);
        let st = s.compose(&t).unwrap();
        // (s∘t)(2) = s(3) = 1
        assert_eq!(st.image(2), 1);
        assert!(s.compose(&s.inverse()).unwrap().is_identity());
        assert!(s.compose(&Permutation::identity(2)).is_err());
    }
}
