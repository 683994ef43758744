use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::set_operad::weak_compositions;
use super::{block_wreath, factorial, Op, OperadError, Permutation, SetOperad};

const SAMPLE_SEED: u64 = 0x0b0c_5eed;
const MAX_WITNESSES: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    Associativity,
    LeftUnit,
    RightUnit,
    ActionFunctoriality,
    Equivariance,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::Associativity => "associativity",
            Axiom::LeftUnit => "left-unit",
            Axiom::RightUnit => "right-unit",
            Axiom::ActionFunctoriality => "action-functoriality",
            Axiom::Equivariance => "equivariance",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    /// Number of instances in the tabulated range.
    pub total: u128,
    pub checked: u128,
    pub exhaustive: bool,
    pub failures: u64,
    /// Instances where some composite was not tabulated.
    pub undefined: u64,
    pub witnesses: Vec<String>,
}

impl AxiomCheck {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub operad: String,
    pub budget: u64,
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed())
    }

    pub fn check(&self, axiom: Axiom) -> &AxiomCheck {
        self.checks
            .iter()
            .find(|c| c.axiom == axiom)
            .expect("every axiom is reported")
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "operad {}", self.operad)?;
        for c in &self.checks {
            let mode = if c.exhaustive { "exhaustive" } else { "sampled" };
            let verdict = if c.passed() { "pass" } else { "FAIL" };
            write!(
                f,
                "  {}: {} ({}/{} {}",
                c.axiom, verdict, c.checked, c.total, mode
            )?;
            if c.undefined > 0 {
                write!(f, ", {} undefined", c.undefined)?;
            }
            writeln!(f, ", {} failures)", c.failures)?;
            for w in &c.witnesses {
                writeln!(f, "    witness: {w}")?;
            }
        }
        Ok(())
    }
}

enum Outcome {
    Pass,
    Fail(String),
    Undefined,
}

/// A family of instances sharing arities: one digit per radix.
struct Shape {
    arities: Vec<usize>,
    radices: Vec<usize>,
}

impl Shape {
    fn count(&self) -> u128 {
        self.radices.iter().map(|&r| r as u128).product()
    }

    fn decode(&self, mut index: u128) -> Vec<usize> {
        let mut digits = vec![0; self.radices.len()];
        for (d, &r) in digits.iter_mut().zip(&self.radices).rev() {
            *d = (index % r as u128) as usize;
            index /= r as u128;
        }
        digits
    }
}

fn shapes(c: &dyn SetOperad, axiom: Axiom) -> Vec<Shape> {
    let cap = c.arity_cap();
    let size = |n: usize| c.carrier_size(n);
    let mut out = Vec::new();
    match axiom {
        Axiom::LeftUnit | Axiom::RightUnit => {
            for n in 0..=cap {
                out.push(Shape {
                    arities: vec![n],
                    radices: vec![size(n)],
                });
            }
        }
        Axiom::ActionFunctoriality => {
            for n in 0..=cap {
                out.push(Shape {
                    arities: vec![n],
                    radices: vec![size(n), factorial(n), factorial(n)],
                });
            }
        }
        Axiom::Associativity => {
            for m in 0..=cap {
                for ns in weak_compositions(m, cap) {
                    let n: usize = ns.iter().sum();
                    for rs in weak_compositions(n, cap) {
                        let mut arities = vec![m];
                        arities.extend(&ns);
                        arities.extend(&rs);
                        let radices = arities.iter().map(|&a| size(a)).collect();
                        out.push(Shape { arities, radices });
                    }
                }
            }
        }
        Axiom::Equivariance => {
            for m in 0..=cap {
                for ns in weak_compositions(m, cap) {
                    let mut arities = vec![m];
                    arities.extend(&ns);
                    let mut radices = vec![size(m), factorial(m)];
                    radices.extend(ns.iter().map(|&a| size(a)));
                    radices.extend(ns.iter().map(|&a| factorial(a)));
                    out.push(Shape { arities, radices });
                }
            }
        }
    }
    out.retain(|s| s.count() > 0);
    out
}

fn show(c: &dyn SetOperad, ops: &[Op]) -> String {
    let labels: Vec<String> = ops.iter().map(|&o| c.label(o)).collect();
    format!("({})", labels.join(", "))
}

fn lift(r: Result<Op, OperadError>) -> Result<Op, Outcome> {
    r.map_err(|e| match e {
        OperadError::Untabulated(_) | OperadError::Truncated(_) => Outcome::Undefined,
        other => Outcome::Fail(format!("error: {other}")),
    })
}

fn run_instance(c: &dyn SetOperad, axiom: Axiom, shape: &Shape, digits: &[usize]) -> Outcome {
    match instance(c, axiom, shape, digits) {
        Ok(()) => Outcome::Pass,
        Err(o) => o,
    }
}

fn instance(c: &dyn SetOperad, axiom: Axiom, shape: &Shape, d: &[usize]) -> Result<(), Outcome> {
    let a = &shape.arities;
    match axiom {
        Axiom::LeftUnit => {
            let x = Op::new(a[0], d[0]);
            let r = lift(c.compose(c.unit(), &[x]))?;
            if r != x {
                return Err(Outcome::Fail(format!(
                    "γ(1; {}) = {}",
                    c.label(x),
                    c.label(r)
                )));
            }
        }
        Axiom::RightUnit => {
            let x = Op::new(a[0], d[0]);
            let r = lift(c.compose(x, &vec![c.unit(); x.arity]))?;
            if r != x {
                return Err(Outcome::Fail(format!(
                    "γ({}; 1,…,1) = {}",
                    c.label(x),
                    c.label(r)
                )));
            }
        }
        Axiom::ActionFunctoriality => {
            let n = a[0];
            let x = Op::new(n, d[0]);
            let sigma = Permutation::unrank(n, d[1]);
            let tau = Permutation::unrank(n, d[2]);
            let lhs = lift(c.act(lift(c.act(x, &sigma))?, &tau))?;
            let st = sigma.compose(&tau).expect("same size");
            let rhs = lift(c.act(x, &st))?;
            if lhs != rhs {
                return Err(Outcome::Fail(format!(
                    "x={}, σ={sigma}, τ={tau}: (x·σ)·τ = {} but x·(σ∘τ) = {}",
                    c.label(x),
                    c.label(lhs),
                    c.label(rhs)
                )));
            }
            if sigma.is_identity() {
                let fixed = lift(c.act(x, &sigma))?;
                if fixed != x {
                    return Err(Outcome::Fail(format!(
                        "x={}: x·id = {}",
                        c.label(x),
                        c.label(fixed)
                    )));
                }
            }
        }
        Axiom::Associativity => {
            let m = a[0];
            let x = Op::new(m, d[0]);
            let ys: Vec<Op> = (0..m).map(|i| Op::new(a[1 + i], d[1 + i])).collect();
            let zs: Vec<Op> = (1 + m..a.len()).map(|i| Op::new(a[i], d[i])).collect();
            let lhs = lift(c.compose(lift(c.compose(x, &ys))?, &zs))?;
            let mut inner = Vec::with_capacity(m);
            let mut start = 0;
            for &y in &ys {
                inner.push(lift(c.compose(y, &zs[start..start + y.arity]))?);
                start += y.arity;
            }
            let rhs = lift(c.compose(x, &inner))?;
            if lhs != rhs {
                return Err(Outcome::Fail(format!(
                    "x={}, ys={}, zs={}: γ(γ(x;ys);zs) = {} but γ(x;γ(y;zs)) = {}",
                    c.label(x),
                    show(c, &ys),
                    show(c, &zs),
                    c.label(lhs),
                    c.label(rhs)
                )));
            }
        }
        Axiom::Equivariance => {
            let m = a[0];
            let x = Op::new(m, d[0]);
            let lambda = Permutation::unrank(m, d[1]);
            let ks: Vec<usize> = a[1..].to_vec();
            let ys: Vec<Op> = (0..m).map(|i| Op::new(ks[i], d[2 + i])).collect();
            let kappas: Vec<Permutation> = (0..m)
                .map(|i| Permutation::unrank(ks[i], d[2 + m + i]))
                .collect();
            let acted: Vec<Op> = ys
                .iter()
                .zip(&kappas)
                .map(|(&y, k)| lift(c.act(y, k)))
                .collect::<Result<_, _>>()?;
            let lhs = lift(c.compose(lift(c.act(x, &lambda))?, &acted))?;
            let inv = lambda.inverse();
            let reordered: Vec<Op> = (0..m).map(|j| ys[inv.apply0(j)]).collect();
            let w = block_wreath(
                &lambda,
                &(0..m)
                    .map(|j| kappas[inv.apply0(j)].clone())
                    .collect::<Vec<_>>(),
                &(0..m).map(|j| ks[inv.apply0(j)]).collect::<Vec<_>>(),
            )
            .expect("consistent sizes");
            let rhs = lift(c.act(lift(c.compose(x, &reordered))?, &w))?;
            if lhs != rhs {
                return Err(Outcome::Fail(format!(
                    "x={}, λ={lambda}, ys={}, κ={:?}: γ(x·λ; y·κ) = {} but γ(x; y∘λ⁻¹)·(λ≀κ) = {}",
                    c.label(x),
                    show(c, &ys),
                    kappas,
                    c.label(lhs),
                    c.label(rhs)
                )));
            }
        }
    }
    Ok(())
}

#[derive(Default)]
struct Tally {
    checked: u128,
    failures: u64,
    undefined: u64,
    witnesses: Vec<String>,
}

impl Tally {
    fn record(&mut self, o: Outcome) {
        self.checked += 1;
        match o {
            Outcome::Pass => {}
            Outcome::Undefined => self.undefined += 1,
            Outcome::Fail(w) => {
                self.failures += 1;
                if self.witnesses.len() < MAX_WITNESSES {
                    self.witnesses.push(w);
                }
            }
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.checked += other.checked;
        self.failures += other.failures;
        self.undefined += other.undefined;
        for w in other.witnesses {
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(w);
            }
        }
        self
    }
}

fn check_axiom(c: &dyn SetOperad, axiom: Axiom, budget: u64) -> AxiomCheck {
    let shapes = shapes(c, axiom);
    let total: u128 = shapes.iter().map(|s| s.count()).sum();
    let exhaustive = total <= budget as u128;
    let tally = if exhaustive {
        shapes
            .par_iter()
            .map(|s| {
                let mut t = Tally::default();
                for i in 0..s.count() {
                    t.record(run_instance(c, axiom, s, &s.decode(i)));
                }
                t
            })
            .collect::<Vec<_>>()
            .into_iter()
            .fold(Tally::default(), Tally::merge)
    } else {
        let mut cumulative = Vec::with_capacity(shapes.len());
        let mut acc = 0u128;
        for s in &shapes {
            acc += s.count();
            cumulative.push(acc);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED ^ axiom as u64);
        let picks: Vec<u128> = (0..budget).map(|_| rng.gen_range(0..total)).collect();
        picks
            .par_chunks(4096)
            .map(|chunk| {
                let mut t = Tally::default();
                for &g in chunk {
                    let si = cumulative.partition_point(|&c| c <= g);
                    let before = if si == 0 { 0 } else { cumulative[si - 1] };
                    let s = &shapes[si];
                    t.record(run_instance(c, axiom, s, &s.decode(g - before)));
                }
                t
            })
            .collect::<Vec<_>>()
            .into_iter()
            .fold(Tally::default(), Tally::merge)
    };
    AxiomCheck {
        axiom,
        total,
        checked: tally.checked,
        exhaustive,
        failures: tally.failures,
        undefined: tally.undefined,
        witnesses: tally.witnesses,
    }
}

/// Checks the operad axioms on the tabulated range of `c`.
///
/// Each axiom is checked exhaustively when its instance count is at most
/// `budget`, otherwise on `budget` instances drawn with a fixed seed.
pub fn check_operad_axioms(c: &dyn SetOperad, budget: u64) -> AxiomReport {
    let budget = budget.max(1);
    let checks = [
        Axiom::Associativity,
        Axiom::LeftUnit,
        Axiom::RightUnit,
        Axiom::ActionFunctoriality,
        Axiom::Equivariance,
    ]
    .into_iter()
    .map(|a| check_axiom(c, a, budget))
    .collect();
    AxiomReport {
        operad: c.name(),
        budget,
        checks,
    }
}
