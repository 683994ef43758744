use std::collections::HashMap;

use serde::Serialize;

use crate::operad::{Op, OperadError, Permutation, SetOperad};

use super::orbit::{orbits_upto, require_cap, Orbit};
use super::{FiberedError, FiberedSetObject};

/// `A(n) = D_n X` for `n ≤ cap`, each truncated to at most `cap`
/// generators and fibered over `C(n)`.
pub struct FiberedOperadData<'a> {
    operad: &'a dyn SetOperad,
    generators: Vec<String>,
    cap: usize,
    arities: Vec<Vec<Orbit<usize>>>,
    index: Vec<HashMap<Orbit<usize>, usize>>,
    projections: Vec<Vec<Op>>,
    objects: Vec<FiberedSetObject>,
}

/// Partial compositions `a ∘ᵢ b` that stay inside the truncation.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CompositionTable {
    /// `(n, a, i, m, b, result)` with `a ∈ A(n)`, `b ∈ A(m)`, result in `A(n+m-1)`.
    pub entries: Vec<(usize, usize, usize, usize, usize, usize)>,
    pub beyond_cap: usize,
}

/// Outcome of [`FiberedOperadData::check`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FiberedOperadReport {
    pub compositions: usize,
    pub equivariance: usize,
    pub units: usize,
    pub failures: Vec<String>,
}

impl FiberedOperadReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn star(c: &dyn SetOperad) -> Result<Op, FiberedError> {
    if c.carrier_size(0) != 1 {
        return Err(FiberedError::NotReduced(format!(
            "{} has {} nullary operations",
            c.name(),
            c.carrier_size(0)
        )));
    }
    Ok(Op::new(0, 0))
}

/// `A(n) = D_n X` with at most `cap` generators, its projection to `C(n)`
/// and the resulting family of fibers.
pub fn fibered_arity(
    c: &dyn SetOperad,
    n: usize,
    generators: &[String],
    cap: usize,
) -> Result<(Vec<Orbit<usize>>, Vec<Op>, FiberedSetObject), FiberedError> {
    let star = star(c)?;
    require_cap(c, n + cap)?;
    let xs: Vec<usize> = (0..generators.len()).collect();
    let elems = orbits_upto(c, n, &xs, cap)?;
    let proj = elems
        .iter()
        .map(|a| {
            let mut inners = vec![c.unit(); n];
            inners.extend(std::iter::repeat_n(star, a.inputs().len()));
            c.compose(a.op(), &inners)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let base: Vec<String> = c.elements(n).into_iter().map(|x| c.label(x)).collect();
    let mut fibers = vec![Vec::new(); base.len()];
    for (a, p) in elems.iter().zip(&proj) {
        fibers[p.index].push(a.label(c, generators));
    }
    let object = FiberedSetObject::over_discrete(&base, &fibers, 0)?;
    Ok((elems, proj, object))
}

/// Builds `A(n) = D_n ⊗_C CX = D_n X` with its fibers over `C(n)`.
pub fn build_fibered_a<'a>(
    c: &'a dyn SetOperad,
    generators: &[String],
    cap: usize,
) -> Result<FiberedOperadData<'a>, FiberedError> {
    require_cap(c, 2 * cap)?;
    let mut arities = Vec::with_capacity(cap + 1);
    let mut projections = Vec::with_capacity(cap + 1);
    let mut objects = Vec::with_capacity(cap + 1);
    for n in 0..=cap {
        let (elems, proj, object) = fibered_arity(c, n, generators, cap)?;
        arities.push(elems);
        projections.push(proj);
        objects.push(object);
    }
    let index = arities
        .iter()
        .map(|es| es.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect())
        .collect();
    Ok(FiberedOperadData {
        operad: c,
        generators: generators.to_vec(),
        cap,
        arities,
        index,
        projections,
        objects,
    })
}

impl<'a> FiberedOperadData<'a> {
    pub fn operad(&self) -> &'a dyn SetOperad {
        self.operad
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn elements(&self, n: usize) -> &[Orbit<usize>] {
        &self.arities[n]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.arities.iter().map(Vec::len).collect()
    }

    pub fn object(&self, n: usize) -> &FiberedSetObject {
        &self.objects[n]
    }

    pub fn label(&self, a: &Orbit<usize>) -> String {
        a.label(self.operad, &self.generators)
    }

    pub fn position(&self, a: &Orbit<usize>) -> Option<usize> {
        self.index.get(a.free())?.get(a).copied()
    }

    /// `γ(y, 1,…,1, *,…,*)` for `a = (y, x⃗)`.
    pub fn projection(&self, n: usize, a: usize) -> Op {
        self.projections[n][a]
    }

    /// Elements of `A(n)` over `x ∈ C(n)`.
    pub fn fiber(&self, n: usize, x: usize) -> Vec<usize> {
        (0..self.arities[n].len())
            .filter(|&a| self.projections[n][a].index == x)
            .collect()
    }

    pub fn unit(&self) -> Orbit<usize> {
        Orbit::canonical(self.operad, self.operad.unit(), 1, Vec::new()).expect("unit orbit")
    }

    /// `γ(a; a₁…aₖ)`: compose in `C` and move every free slot in front of
    /// the generator slots, keeping blocks in order.
    pub fn compose(&self, a: &Orbit<usize>, inners: &[Orbit<usize>]) -> Result<Orbit<usize>, OperadError> {
        let c = self.operad;
        if inners.len() != a.free() {
            return Err(OperadError::ArityMismatch {
                expected: a.free(),
                found: inners.len(),
            });
        }
        let m = a.inputs().len();
        let mut ops: Vec<Op> = inners.iter().map(Orbit::op).collect();
        ops.extend(std::iter::repeat_n(c.unit(), m));
        let z = c.compose(a.op(), &ops)?;
        let mut free_slots = Vec::new();
        let mut gen_slots = Vec::new();
        let mut inputs = Vec::new();
        let mut offset = 0;
        for b in inners {
            free_slots.extend(offset..offset + b.free());
            gen_slots.extend(offset + b.free()..offset + b.op().arity);
            inputs.extend_from_slice(b.inputs());
            offset += b.op().arity;
        }
        gen_slots.extend(offset..offset + m);
        inputs.extend_from_slice(a.inputs());
        let free = free_slots.len();
        free_slots.extend(gen_slots);
        let sigma = Permutation::from_zero_based(free_slots)?;
        Orbit::canonical(c, c.act(z, &sigma)?, free, inputs)
    }

    /// `a ∘ᵢ b` (0-indexed slot).
    pub fn partial_compose(&self, a: &Orbit<usize>, i: usize, b: &Orbit<usize>) -> Result<Orbit<usize>, OperadError> {
        let mut inners = vec![self.unit(); a.free()];
        inners[i] = b.clone();
        self.compose(a, &inners)
    }

    /// `a·τ` for `τ ∈ Σₙ`, acting on the free slots.
    pub fn act(&self, a: &Orbit<usize>, tau: &Permutation) -> Result<Orbit<usize>, OperadError> {
        let full = Permutation::block_sum(&[tau.clone(), Permutation::identity(a.inputs().len())]);
        Orbit::canonical(self.operad, self.operad.act(a.op(), &full)?, a.free(), a.inputs().to_vec())
    }

    fn inside(&self, r: &Orbit<usize>) -> Option<usize> {
        if r.free() <= self.cap && r.inputs().len() <= self.cap {
            self.position(r)
        } else {
            None
        }
    }

    /// Every partial composition whose result stays within the truncation.
    pub fn composition_table(&self) -> Result<CompositionTable, FiberedError> {
        let mut table = CompositionTable::default();
        for n in 1..=self.cap {
            for (ai, a) in self.arities[n].iter().enumerate() {
                for i in 0..n {
                    for m in 0..=self.cap + 1 - n {
                        for (bi, b) in self.arities[m].iter().enumerate() {
                            if a.inputs().len() + b.inputs().len() > self.cap {
                                table.beyond_cap += 1;
                                continue;
                            }
                            let r = self.partial_compose(a, i, b)?;
                            let ri = self.inside(&r).ok_or_else(|| {
                                FiberedError::Operad(OperadError::UnknownElement(self.label(&r)))
                            })?;
                            table.entries.push((n, ai, i, m, bi, ri));
                        }
                    }
                }
            }
        }
        Ok(table)
    }

    /// The projection to `C` against partial composition, the `Σₙ`-actions
    /// and the unit; then the unit and associativity laws of `A` itself on
    /// every triple inside the truncation.
    pub fn check(&self) -> Result<FiberedOperadReport, FiberedError> {
        let c = self.operad;
        let mut report = FiberedOperadReport::default();
        let fail = |r: &mut FiberedOperadReport, msg: String| {
            if r.failures.len() < 16 {
                r.failures.push(msg);
            }
        };
        let table = self.composition_table()?;
        for &(n, ai, i, m, bi, ri) in &table.entries {
            report.compositions += 1;
            let lhs = self.projections[n + m - 1][ri];
            let rhs = c.partial_compose(self.projections[n][ai], i, self.projections[m][bi])?;
            if lhs != rhs {
                fail(&mut report, format!("projection of {} ∘{i} {}", self.label(&self.arities[n][ai]), self.label(&self.arities[m][bi])));
            }
        }
        let unit = self.unit();
        if self.projection(1, self.position(&unit).expect("unit present")) != c.unit() {
            fail(&mut report, "unit does not lie over the unit".into());
        }
        for n in 0..=self.cap {
            for (ai, a) in self.arities[n].iter().enumerate() {
                report.units += 1;
                let inners = vec![unit.clone(); n];
                if self.compose(a, &inners)? != *a || (n == 1 && self.compose(&unit, &[a.clone()])? != *a) {
                    fail(&mut report, format!("unit law on {}", self.label(a)));
                }
                for tau in Permutation::all(n) {
                    report.equivariance += 1;
                    let moved = self.act(a, &tau)?;
                    let p = self.position(&moved).map(|k| self.projections[n][k]);
                    if p != Some(c.act(self.projections[n][ai], &tau)?) {
                        fail(&mut report, format!("equivariance of {} under {tau}", self.label(a)));
                    }
                }
            }
        }
        Ok(report)
    }
}
