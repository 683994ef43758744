use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::operad::Permutation;

use super::{CubeError, ExactRational};

type Q = ExactRational;

/// An axis-aligned little cube: the product of increasing affine maps
/// `x ↦ aᵢ + (bᵢ − aᵢ)x`, stored as its image intervals.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LittleCube {
    intervals: Vec<(Q, Q)>,
}

impl LittleCube {
    pub fn new(intervals: Vec<(Q, Q)>) -> Result<Self, CubeError> {
        let zero = Q::zero();
        let one = Q::one();
        for (a, b) in &intervals {
            if !(zero <= *a && a < b && *b <= one) {
                return Err(CubeError::InvalidInterval(format!("[{a}, {b}]")));
            }
        }
        Ok(LittleCube { intervals })
    }

    /// Builds a cube from `(num, den)` endpoint pairs; panics on invalid input.
    pub fn from_fractions(axes: &[((i64, i64), (i64, i64))]) -> Self {
        let intervals = axes
            .iter()
            .map(|&((an, ad), (bn, bd))| (Q::new(an, ad), Q::new(bn, bd)))
            .collect();
        LittleCube::new(intervals).expect("valid little cube")
    }

    pub fn unit(dim: usize) -> Self {
        LittleCube {
            intervals: vec![(Q::zero(), Q::one()); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.intervals.len()
    }

    pub fn intervals(&self) -> &[(Q, Q)] {
        &self.intervals
    }

    pub fn interval(&self, axis: usize) -> &(Q, Q) {
        &self.intervals[axis]
    }

    pub fn is_unit(&self) -> bool {
        self.intervals
            .iter()
            .all(|(a, b)| a.is_zero() && *b == Q::one())
    }

    /// `self ∘ inner`: the image of `inner` under the affine map of `self`.
    pub fn compose(&self, inner: &LittleCube) -> LittleCube {
        let intervals = self
            .intervals
            .iter()
            .zip(&inner.intervals)
            .map(|((a, b), (c, d))| {
                let w = b - a;
                (a + &(&w * c), a + &(&w * d))
            })
            .collect();
        LittleCube { intervals }
    }

    /// The cube `α` with `self ∘ α = target`, if `target ⊆ self`.
    pub fn solve(&self, target: &LittleCube) -> Result<LittleCube, CubeError> {
        let intervals = self
            .intervals
            .iter()
            .zip(&target.intervals)
            .map(|((a, b), (c, d))| {
                let w = b - a;
                ((c - a) / &w, (d - a) / &w)
            })
            .collect();
        LittleCube::new(intervals)
    }

    /// Product cube `self × other` on concatenated axes.
    pub fn product(&self, other: &LittleCube) -> LittleCube {
        let mut intervals = self.intervals.clone();
        intervals.extend(other.intervals.iter().cloned());
        LittleCube { intervals }
    }

    /// Restriction to the axes `range`.
    pub fn project(&self, range: std::ops::Range<usize>) -> LittleCube {
        LittleCube {
            intervals: self.intervals[range].to_vec(),
        }
    }

    pub fn interiors_meet(&self, other: &LittleCube) -> bool {
        self.intervals
            .iter()
            .zip(&other.intervals)
            .all(|((a, b), (c, d))| a < d && c < b)
    }

    pub fn closures_meet(&self, other: &LittleCube) -> bool {
        self.intervals
            .iter()
            .zip(&other.intervals)
            .all(|((a, b), (c, d))| a <= d && c <= b)
    }

    /// Closed `self` inside the open interior of `outer`.
    pub fn inside_interior_of(&self, outer: &LittleCube) -> bool {
        self.intervals
            .iter()
            .zip(&outer.intervals)
            .all(|((a, b), (c, d))| c < a && b < d)
    }

    pub fn in_open_unit_cube(&self) -> bool {
        let one = Q::one();
        self.intervals
            .iter()
            .all(|(a, b)| a.is_positive() && *b < one)
    }

    /// `self ∩ other` when it has nonempty interior.
    pub fn intersection(&self, other: &LittleCube) -> Option<LittleCube> {
        if !self.interiors_meet(other) {
            return None;
        }
        let intervals = self
            .intervals
            .iter()
            .zip(&other.intervals)
            .map(|((a, b), (c, d))| (a.max(c).clone(), b.min(d).clone()))
            .collect();
        Some(LittleCube { intervals })
    }

    /// The cube scaled by `λ` about its centre.
    pub fn scale(&self, lambda: &Q) -> LittleCube {
        let intervals = self
            .intervals
            .iter()
            .map(|(a, b)| {
                let mid = a.midpoint(b);
                let half = (b - a) * lambda * &Q::half();
                (&mid - &half, &mid + &half)
            })
            .collect();
        LittleCube { intervals }
    }

    pub fn center(&self) -> Vec<Q> {
        self.intervals.iter().map(|(a, b)| a.midpoint(b)).collect()
    }
}

impl fmt::Display for LittleCube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (a, b)) in self.intervals.iter().enumerate() {
            if i > 0 {
                write!(f, "x")?;
            }
            write!(f, "[{},{}]", short(a), short(b))?;
        }
        Ok(())
    }
}

impl fmt::Debug for LittleCube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn short(q: &Q) -> String {
    if *q.denom() == 1.into() {
        q.numer().to_string()
    } else {
        q.to_string()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strictness {
    /// Pairwise disjoint interiors.
    Plain,
    /// Pairwise disjoint closed images inside the open unit cube.
    Prime,
}

/// A configuration of little cubes, an element of the little-cubes operad.
///
/// Equality and hashing ignore the strictness flag; it records which
/// condition was verified, not a different element.
#[derive(Clone)]
pub struct CubeConfig {
    dim: usize,
    cubes: Vec<LittleCube>,
    strict: Strictness,
}

impl PartialEq for CubeConfig {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.cubes == other.cubes
    }
}

impl Eq for CubeConfig {}

impl Hash for CubeConfig {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.dim.hash(state);
        self.cubes.hash(state);
    }
}

impl CubeConfig {
    pub fn new(dim: usize, cubes: Vec<LittleCube>, strict: Strictness) -> Result<Self, CubeError> {
        let c = CubeConfig { dim, cubes, strict };
        c.validate()?;
        Ok(c)
    }

    pub fn plain(dim: usize, cubes: Vec<LittleCube>) -> Result<Self, CubeError> {
        Self::new(dim, cubes, Strictness::Plain)
    }

    pub fn prime(dim: usize, cubes: Vec<LittleCube>) -> Result<Self, CubeError> {
        Self::new(dim, cubes, Strictness::Prime)
    }

    /// The operad unit: one cube equal to the whole unit cube.
    pub fn unit(dim: usize) -> Self {
        CubeConfig {
            dim,
            cubes: vec![LittleCube::unit(dim)],
            strict: Strictness::Plain,
        }
    }

    pub fn empty(dim: usize) -> Self {
        CubeConfig {
            dim,
            cubes: Vec::new(),
            strict: Strictness::Prime,
        }
    }

    pub fn validate(&self) -> Result<(), CubeError> {
        for c in &self.cubes {
            if c.dim() != self.dim {
                return Err(CubeError::DimensionMismatch {
                    expected: self.dim,
                    found: c.dim(),
                });
            }
            LittleCube::new(c.intervals.clone())?;
            if self.strict == Strictness::Prime && !c.in_open_unit_cube() {
                return Err(CubeError::NotPrime(format!("{c} touches the boundary")));
            }
        }
        for i in 0..self.cubes.len() {
            for j in i + 1..self.cubes.len() {
                let (a, b) = (&self.cubes[i], &self.cubes[j]);
                let clash = match self.strict {
                    Strictness::Plain => a.interiors_meet(b),
                    Strictness::Prime => a.closures_meet(b),
                };
                if clash {
                    return Err(CubeError::Overlap { i: i + 1, j: j + 1 });
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.cubes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cubes.is_empty()
    }

    pub fn cubes(&self) -> &[LittleCube] {
        &self.cubes
    }

    pub fn strictness(&self) -> Strictness {
        self.strict
    }

    pub fn is_unit(&self) -> bool {
        self.cubes.len() == 1 && self.cubes[0].is_unit()
    }

    /// The same cubes, checked against the prime condition.
    pub fn to_prime(&self) -> Result<CubeConfig, CubeError> {
        CubeConfig::prime(self.dim, self.cubes.clone())
    }

    pub fn to_plain(&self) -> CubeConfig {
        CubeConfig {
            dim: self.dim,
            cubes: self.cubes.clone(),
            strict: Strictness::Plain,
        }
    }

    pub fn is_prime(&self) -> bool {
        self.to_prime().is_ok()
    }
}

impl fmt::Display for CubeConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.cubes.iter().enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            write!(f, "{c}")?;
        }
        if self.cubes.is_empty() {
            write!(f, "d{}", self.dim)?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for CubeConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Operad composition: cube `i` of `outer` receives `inners[i]`; the result
/// lists blocks in order.
pub fn cube_compose(outer: &CubeConfig, inners: &[CubeConfig]) -> Result<CubeConfig, CubeError> {
    if inners.len() != outer.len() {
        return Err(CubeError::SizeMismatch {
            expected: outer.len(),
            found: inners.len(),
        });
    }
    let mut cubes = Vec::new();
    for (o, inner) in outer.cubes.iter().zip(inners) {
        if inner.dim != outer.dim {
            return Err(CubeError::DimensionMismatch {
                expected: outer.dim,
                found: inner.dim,
            });
        }
        cubes.extend(inner.cubes.iter().map(|c| o.compose(c)));
    }
    let all_prime = outer.strict == Strictness::Prime && inners.iter().all(|c| c.strict == Strictness::Prime);
    let strict = if all_prime { Strictness::Prime } else { Strictness::Plain };
    CubeConfig::new(outer.dim, cubes, strict)
}

/// Right action: `(e·σ)ᵢ = e_{σ(i)}`.
pub fn cube_act(e: &CubeConfig, sigma: &Permutation) -> Result<CubeConfig, CubeError> {
    if sigma.size() != e.len() {
        return Err(CubeError::SizeMismatch {
            expected: e.len(),
            found: sigma.size(),
        });
    }
    Ok(CubeConfig {
        dim: e.dim,
        cubes: (0..e.len()).map(|i| e.cubes[sigma.apply0(i)].clone()).collect(),
        strict: e.strict,
    })
}

/// Scales every cube by `λ ∈ (0, 1]` about its centre.
pub fn scale_config(e: &CubeConfig, lambda: &Q) -> Result<CubeConfig, CubeError> {
    if !lambda.is_positive() || *lambda > Q::one() {
        return Err(CubeError::LambdaOutOfRange(lambda.to_string()));
    }
    CubeConfig::new(
        e.dim,
        e.cubes.iter().map(|c| c.scale(lambda)).collect(),
        e.strict,
    )
}

/// All intersections `a ∩ b` with nonempty interior, row-major over `(a, b)`.
pub fn common_subdivision(a: &[LittleCube], b: &[LittleCube]) -> Vec<LittleCube> {
    let mut out = Vec::new();
    for x in a {
        for y in b {
            if let Some(z) = x.intersection(y) {
                out.push(z);
            }
        }
    }
    out
}

/// Wire format: `k`, `strict`, and per-cube lists of `["num/den", "num/den"]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CubeConfigFile {
    pub k: usize,
    pub strict: bool,
    pub cubes: Vec<LittleCube>,
}

impl From<&CubeConfig> for CubeConfigFile {
    fn from(c: &CubeConfig) -> Self {
        CubeConfigFile {
            k: c.dim,
            strict: c.strict == Strictness::Prime,
            cubes: c.cubes.clone(),
        }
    }
}

impl TryFrom<CubeConfigFile> for CubeConfig {
    type Error = CubeError;

    fn try_from(f: CubeConfigFile) -> Result<Self, Self::Error> {
        let strict = if f.strict { Strictness::Prime } else { Strictness::Plain };
        CubeConfig::new(f.k, f.cubes, strict)
    }
}
