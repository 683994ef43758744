//! End-to-end acceptance checks. Runs without the libtest harness so that
//! every criterion prints one pass/fail line.

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use boxcubes::boxprod::{interchange_perm, EquivalenceVerdict, Rewriter};
use boxcubes::cubes::random::{random_config, random_small_config};
use boxcubes::cubes::{
    cube_act, cube_compose, find_witness, find_witness_in, is_small, phi_eval, psi_decompose, psi_decompose_with,
    scale_config, shrink_to_small, CubeColours, CubeConfig, LittleCube, WitnessIndependence,
};
use boxcubes::fibered::{
    build_fibered_a, check_action_laws, hom_equalizer, lemma_pred_check, specialness_diagnostic, Verdict,
};
use boxcubes::operad::{block_wreath, Assoc, Color, Comm, FreeBinary, Permutation, SetOperad};
use boxcubes::simplicial::{
    nerve, subdivide, two_sided_bar, BisimplicialSet, FiniteCategory, FiniteSimplicialSet, MSet, Monoid, Side,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn names(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn interchange_table() -> Outcome {
    for m in 1..=6 {
        for n in 1..=6 {
            let mut row = HashMap::new();
            let mut col = HashMap::new();
            for i in 1..=m {
                for j in 1..=n {
                    row.insert(row.len() + 1, (i, j));
                }
            }
            for j in 1..=n {
                for i in 1..=m {
                    col.insert((i, j), col.len() + 1);
                }
            }
            let oracle: Vec<usize> = (1..=m * n).map(|r| col[&row[&r]]).collect();
            let sigma = interchange_perm(m, n);
            ensure(sigma.images() == oracle, || format!("σ({m},{n}) = {sigma}, oracle {oracle:?}"))?;
            ensure(sigma.inverse() == interchange_perm(n, m), || format!("σ({m},{n})⁻¹ ≠ σ({n},{m})"))?;
        }
    }
    Ok("36 grids".into())
}

fn random_perm(rng: &mut ChaCha8Rng, n: usize) -> Permutation {
    let count: usize = (1..=n).product();
    Permutation::unrank(n, rng.gen_range(0..count))
}

fn cube_axioms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut checked = 0;
    for k in 1..=3 {
        for _ in 0..200 {
            let n = rng.gen_range(1..=3);
            let e = random_config(&mut rng, k, n);
            let fs: Vec<CubeConfig> = (0..n)
                .map(|_| {
                    let a = rng.gen_range(0..=3);
                    random_config(&mut rng, k, a)
                })
                .collect();
            let gs: Vec<Vec<CubeConfig>> = fs
                .iter()
                .map(|f| {
                    (0..f.len())
                        .map(|_| {
                            let a = rng.gen_range(0..=2);
                            random_config(&mut rng, k, a)
                        })
                        .collect()
                })
                .collect();
            let err = |e: boxcubes::cubes::CubeError| e.to_string();

            let flat: Vec<CubeConfig> = gs.iter().flatten().cloned().collect();
            let left = cube_compose(&cube_compose(&e, &fs).map_err(err)?, &flat).map_err(err)?;
            let inner: Vec<CubeConfig> = fs
                .iter()
                .zip(&gs)
                .map(|(f, g)| cube_compose(f, g))
                .collect::<Result<_, _>>()
                .map_err(err)?;
            let right = cube_compose(&e, &inner).map_err(err)?;
            ensure(left == right, || format!("associativity fails for {e}"))?;

            let unit = CubeConfig::unit(k);
            ensure(cube_compose(&unit, &[e.clone()]).map_err(err)? == e, || format!("left unit fails for {e}"))?;
            ensure(cube_compose(&e, &vec![unit.clone(); n]).map_err(err)? == e, || format!("right unit fails for {e}"))?;

            let sigma = random_perm(&mut rng, n);
            let taus: Vec<Permutation> = fs.iter().map(|f| random_perm(&mut rng, f.len())).collect();
            let ks: Vec<usize> = fs.iter().map(CubeConfig::len).collect();
            let moved: Vec<CubeConfig> = (0..n)
                .map(|j| cube_act(&fs[sigma.apply0(j)], &taus[sigma.apply0(j)]))
                .collect::<Result<_, _>>()
                .map_err(err)?;
            let lhs = cube_compose(&cube_act(&e, &sigma).map_err(err)?, &moved).map_err(err)?;
            let wreath = block_wreath(&sigma, &taus, &ks).map_err(|e| e.to_string())?;
            let rhs = cube_act(&cube_compose(&e, &fs).map_err(err)?, &wreath).map_err(err)?;
            ensure(lhs == rhs, || format!("equivariance fails for {e} with σ = {sigma}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} instances, k = 1, 2, 3"))
}

fn phi_psi() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut count = 0;
    for (k, l) in [(1, 1), (1, 2), (2, 1)] {
        for _ in 0..100 {
            let n = rng.gen_range(0..=4);
            let (e, _) = random_small_config(&mut rng, k, l, n);
            let w = find_witness(&e, k)
                .map_err(|x| x.to_string())?
                .ok_or_else(|| format!("no witness for {e}"))?;
            let word = psi_decompose(&e, &w).map_err(|x| x.to_string())?;
            let back = phi_eval(&word, k, l).map_err(|x| x.to_string())?;
            ensure(back == e, || format!("φψ({e}) = {back}"))?;
            count += 1;
        }
    }
    Ok(format!("{count}/300"))
}

fn witness_independence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut equal = 0;
    let mut attempts = 0;
    let shapes = [(1, 1), (1, 2), (2, 1)];
    while equal < 25 {
        attempts += 1;
        ensure(attempts < 500, || format!("only {equal} configurations with two witnesses"))?;
        let (k, l) = shapes[equal % shapes.len()];
        let n = rng.gen_range(1..=3);
        let (e, w1) = random_small_config(&mut rng, k, l, n);
        let w2 = find_witness(&e, k)
            .map_err(|x| x.to_string())?
            .ok_or_else(|| format!("no witness for {e}"))?;
        if w1 == w2 {
            continue;
        }
        ensure(is_small(&e, &w1).map_err(|x| x.to_string())?, || "generated witness invalid".into())?;
        let a = psi_decompose(&e, &w1).map_err(|x| x.to_string())?;
        let b = psi_decompose_with(&e, &w2, Color::Right).map_err(|x| x.to_string())?;
        let colours = CubeColours::new(k, l);
        let rewriter = Rewriter::new(&colours);
        let strategy = WitnessIndependence::new(k, l);
        match rewriter.equivalent_with(&a, &b, 10_000, &[&strategy]).map_err(|x| x.to_string())? {
            EquivalenceVerdict::Equal { trace } => {
                let end = rewriter.replay(&a, &trace).map_err(|x| x.to_string())?;
                ensure(end == b, || "trace does not replay".into())?;
            }
            v => return Err(format!("{e}: {}", v.label())),
        }
        equal += 1;
    }
    Ok(format!("{equal}/25 equal"))
}

fn shrinking() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut done = 0;
    let mut deepest = 0;
    let mut attempts = 0;
    while done < 100 {
        attempts += 1;
        ensure(attempts < 10_000, || format!("only {done} non-small configurations generated"))?;
        let dim = rng.gen_range(2..=3);
        let k = rng.gen_range(1..dim);
        let n = rng.gen_range(1..=4);
        let e = random_config(&mut rng, dim, n);
        if find_witness(&e, k).map_err(|x| x.to_string())?.is_some() {
            continue;
        }
        let s = shrink_to_small(&e, k, 12).map_err(|x| format!("{e}: {x}"))?;
        let scaled = scale_config(&e, &s.lambda).map_err(|x| x.to_string())?;
        ensure(is_small(&scaled, &s.witness).map_err(|x| x.to_string())?, || format!("{e} not small at λ = {}", s.lambda))?;
        ensure(s.depth <= 12, || format!("depth {}", s.depth))?;
        deepest = deepest.max(s.depth);
        done += 1;
    }
    Ok(format!("{done}/100, deepest schedule {deepest}"))
}

/// Exhaustive search over cells whose endpoints come from the projected
/// corners, their midpoints and the unit interval's ends. Coordinates are in
/// twentieths (forty-ths after midpoints).
fn grid_oracle(cubes: &[[(i64, i64); 2]]) -> bool {
    let candidates = |axis: usize| {
        let mut pts: Vec<i64> = vec![0, 40];
        for c in cubes {
            pts.push(2 * c[axis].0);
            pts.push(2 * c[axis].1);
        }
        pts.sort_unstable();
        pts.dedup();
        let mids: Vec<i64> = pts.windows(2).map(|w| (w[0] + w[1]) / 2).collect();
        pts.extend(mids);
        pts.sort_unstable();
        pts.dedup();
        pts
    };
    let cells_for = |axis: usize, c: &[(i64, i64); 2]| -> Vec<(i64, i64)> {
        let pts = candidates(axis);
        let (lo, hi) = (2 * c[axis].0, 2 * c[axis].1);
        let mut out = Vec::new();
        for &a in pts.iter().filter(|&&a| a < lo) {
            for &b in pts.iter().filter(|&&b| b > hi) {
                out.push((a, b));
            }
        }
        out
    };
    let compatible = |x: (i64, i64), y: (i64, i64)| x == y || x.1 <= y.0 || y.1 <= x.0;
    let options: Vec<(Vec<(i64, i64)>, Vec<(i64, i64)>)> = cubes.iter().map(|c| (cells_for(0, c), cells_for(1, c))).collect();
    fn go(
        i: usize,
        options: &[(Vec<(i64, i64)>, Vec<(i64, i64)>)],
        chosen: &mut Vec<((i64, i64), (i64, i64))>,
        compatible: &dyn Fn((i64, i64), (i64, i64)) -> bool,
    ) -> bool {
        if i == options.len() {
            return true;
        }
        for &f in &options[i].0 {
            for &g in &options[i].1 {
                let ok = chosen.iter().all(|&(f2, g2)| compatible(f, f2) && compatible(g, g2) && (f, g) != (f2, g2));
                if ok {
                    chosen.push((f, g));
                    if go(i + 1, options, chosen, compatible) {
                        return true;
                    }
                    chosen.pop();
                }
            }
        }
        false
    }
    go(0, &options, &mut Vec::new(), &compatible)
}

fn non_smallness() -> Outcome {
    let tenths = |c: [(i64, i64); 2]| {
        LittleCube::from_fractions(&[((c[0].0, 20), (c[0].1, 20)), ((c[1].0, 20), (c[1].1, 20))])
    };
    let overlapping = [[(2, 10), (2, 10)], [(8, 18), (8, 18)]];
    let diagonal = [[(1, 9), (1, 9)], [(11, 19), (11, 19)]];
    let raw: Vec<LittleCube> = overlapping.iter().map(|&c| tenths(c)).collect();
    ensure(CubeConfig::plain(2, raw.clone()).is_err(), || "overlapping pair accepted as a configuration".into())?;
    let found = find_witness_in(&raw, 2, 1).map_err(|x| x.to_string())?;
    ensure(found.is_none(), || "witness found for the overlapping pair".into())?;
    ensure(!grid_oracle(&overlapping), || "oracle found a witness for the overlapping pair".into())?;
    let diag: Vec<LittleCube> = diagonal.iter().map(|&c| tenths(c)).collect();
    ensure(find_witness_in(&diag, 2, 1).map_err(|x| x.to_string())?.is_some(), || "diagonal pair not found".into())?;
    ensure(grid_oracle(&diagonal), || "oracle misses the diagonal pair".into())?;
    Ok("not found, oracle agrees; control pair found by both".into())
}

fn random_sset(rng: &mut ChaCha8Rng, cap: usize) -> FiniteSimplicialSet {
    match rng.gen_range(0..4) {
        0 | 1 => {
            let v = rng.gen_range(1..=5);
            let facets: Vec<Vec<usize>> = (0..rng.gen_range(0..=4))
                .map(|_| {
                    let size = rng.gen_range(1..=4.min(v));
                    let mut f: Vec<usize> = (0..v).collect();
                    for i in 0..size {
                        let j = rng.gen_range(i..v);
                        f.swap(i, j);
                    }
                    f.truncate(size);
                    f
                })
                .collect();
            FiniteSimplicialSet::from_complex(v, &facets, cap).expect("facets on known vertices")
        }
        2 => {
            let v = rng.gen_range(1..=3);
            let e = rng.gen_range(0..=4);
            let ends = |rng: &mut ChaCha8Rng| (0..e).map(|_| rng.gen_range(0..v)).collect::<Vec<_>>();
            let faces = vec![vec![], vec![ends(rng), ends(rng)]];
            FiniteSimplicialSet::from_delta_set(&[v, e], &faces, cap).expect("graphs are delta sets")
        }
        _ => {
            let e = rng.gen_range(1..=3);
            let t = rng.gen_range(0..=2);
            let faces = vec![
                vec![],
                vec![vec![0; e], vec![0; e]],
                (0..3).map(|_| (0..t).map(|_| rng.gen_range(0..e)).collect()).collect(),
            ];
            FiniteSimplicialSet::from_delta_set(&[1, e, t], &faces, cap).expect("one-vertex delta sets")
        }
    }
}

fn simplicial_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let cap = 4;
    let corpus: Vec<FiniteSimplicialSet> = (0..50).map(|_| random_sset(&mut rng, cap)).collect();
    let mut outputs = 0;
    let passes = |s: &FiniteSimplicialSet, what: &str| -> Result<(), String> {
        let r = s.check_identities();
        ensure(r.passed(), || format!("{what} fails {:?}", r.failures.first()))
    };
    for (i, s) in corpus.iter().enumerate() {
        ensure(s.dimension().unwrap_or(0) <= 3, || format!("set {i} has dimension above 3"))?;
        let sd = subdivide(s).map_err(|e| e.to_string())?;
        passes(&sd, "subdivision")?;
        let (a, b) = (s.euler_char().map_err(|e| e.to_string())?, sd.euler_char().map_err(|e| e.to_string())?);
        ensure(a == b, || format!("set {i}: χ = {a}, χ(Sd) = {b}"))?;
        ensure(s.pi0().len() == sd.pi0().len(), || format!("set {i}: π₀ changes under subdivision"))?;
        outputs += 1;
    }
    for i in 0..10 {
        let (x, y) = (&corpus[i], &corpus[i + 10]);
        let small = |s: &FiniteSimplicialSet| s.truncate(2).expect("cap 4");
        let d = BisimplicialSet::external_product(&small(x), &small(y));
        ensure(d.check_identities().passed(), || format!("bisimplicial product {i} fails"))?;
        passes(&d.diag(), "diagonal")?;
        outputs += 1;
    }
    for order in 1..=3 {
        for m in Monoid::all(order) {
            let c = FiniteCategory::from_monoid(m.table()).map_err(|e| e.to_string())?;
            passes(&nerve(&c, 3), "nerve")?;
            let bar = two_sided_bar(&MSet::regular(&m, Side::Right), &m, &MSet::regular(&m, Side::Left), 3)
                .map_err(|e| e.to_string())?;
            passes(&bar, "bar")?;
            outputs += 2;
        }
    }
    Ok(format!("50 sets, {outputs} constructions checked"))
}

fn multichoose(k: usize, n: usize) -> usize {
    (1..=n).fold(1, |acc, i| acc * (k + i - 1) / i)
}

fn monad_and_lemma() -> Outcome {
    let cap = 3;
    let ops: Vec<(Box<dyn SetOperad>, Box<dyn SetOperad>, bool)> = vec![
        (Box::new(Comm::new(cap)), Box::new(Comm::new(cap + 1)), true),
        (Box::new(Assoc::new(cap)), Box::new(Assoc::new(cap + 1)), false),
    ];
    let (mut cases, mut laws_checked) = (0, 0);
    for (monad, c, commutative) in &ops {
        for ngen in 0..=2 {
            let laws = check_action_laws(monad.as_ref(), 0, ngen, cap).map_err(|e| e.to_string())?;
            ensure(laws.passed(), || format!("{} monad laws with |X| = {ngen}: {:?}", c.name(), laws.failures))?;
            laws_checked += laws.well_defined + laws.unit + laws.associativity;
            let gens: Vec<String> = (0..ngen).map(|i| format!("x{i}")).collect();
            for msize in 0..=2 {
                let module: Vec<String> = (0..msize).map(|i| format!("m{i}")).collect();
                for tsize in 1..=2 {
                    let target: Vec<String> = (0..tsize).map(|i| format!("t{i}")).collect();
                    let maps = boxcubes::operad::cartesian(&vec![(0..tsize).collect::<Vec<_>>(); msize]);
                    for f in maps {
                        let r = lemma_pred_check(c.as_ref(), &gens, &module, cap, &f, &target).map_err(|e| e.to_string())?;
                        ensure(r.passed(), || format!("{}: |X| = {ngen}, f = {f:?}: {r:?}", c.name()))?;
                        let per_point: usize = (0..=cap)
                            .map(|n| if *commutative { multichoose(ngen, n) } else { (n + 1) * ngen.pow(n as u32) })
                            .sum();
                        ensure(r.free_module_size == per_point * msize, || {
                            format!("{}: free module has {} classes, expected {}", c.name(), r.free_module_size, per_point * msize)
                        })?;
                        cases += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{laws_checked} law instances, {cases} module maps over Comm and Assoc, N = 3"))
}

fn hom_oracle() -> Outcome {
    let mut pairs = 0;
    for order in 1..=3 {
        for r in Monoid::all(order) {
            let modules: Vec<MSet> = (0..=3).flat_map(|s| MSet::all(&r, Side::Left, s)).collect();
            for m in &modules {
                for n in &modules {
                    let h = hom_equalizer(&r, m, n).map_err(|e| e.to_string())?;
                    let mut brute = Vec::new();
                    let total = n.size.pow(m.size as u32);
                    for mut code in 0..total {
                        let f: Vec<usize> = (0..m.size)
                            .map(|_| {
                                let d = code % n.size;
                                code /= n.size;
                                d
                            })
                            .collect();
                        let equivariant =
                            (0..order).all(|g| (0..m.size).all(|x| f[m.act[g][x]] == n.act[g][f[x]]));
                        if equivariant {
                            brute.push(f);
                        }
                    }
                    let mut got = h.maps.clone();
                    got.sort();
                    brute.sort();
                    ensure(got == brute, || format!("order {order}: {m:?} → {n:?}"))?;
                    pairs += 1;
                }
            }
        }
    }
    Ok(format!("{pairs} module pairs"))
}

fn specialness() -> Outcome {
    let comm = Comm::new(6);
    let a = build_fibered_a(&comm, &names(&["x"]), 3).map_err(|e| e.to_string())?;
    for ell in 0..=2 {
        let r = specialness_diagnostic(&a, ell, 3, false).map_err(|e| e.to_string())?;
        ensure(r.pi0_bijective(), || format!("Comm, ℓ = {ell}: {:?}", r.components))?;
    }
    let free = FreeBinary::new(4, 2);
    let b = build_fibered_a(&free, &names(&["x"]), 2).map_err(|e| e.to_string())?;
    let mut observed = Vec::new();
    for ell in 0..=2 {
        let first = specialness_diagnostic(&b, ell, 3, false).map_err(|e| e.to_string())?;
        let again = specialness_diagnostic(&b, ell, 3, false).map_err(|e| e.to_string())?;
        ensure(first == again, || format!("free-operad run for ℓ = {ell} is not reproducible"))?;
        let json = serde_json::to_string(&first).map_err(|e| e.to_string())?;
        ensure(json == serde_json::to_string(&again).unwrap(), || "report text differs".into())?;
        let verdicts: Vec<&str> = first
            .components
            .iter()
            .map(|c| match (c.verdict, c.observed) {
                (Verdict::TruncationInconclusive, Verdict::Bijective) => "inconclusive(bijective)",
                (Verdict::TruncationInconclusive, Verdict::NonBijective) => "inconclusive(non-bijective)",
                (Verdict::Bijective, _) => "bijective",
                (Verdict::NonBijective, _) => "non-bijective",
                _ => "inconclusive",
            })
            .collect();
        observed.push(format!("ℓ={ell}: {}", verdicts.join(",")));
    }
    Ok(format!("Comm bijective for ℓ = 0, 1, 2; free binary recorded [{}]", observed.join("; ")))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Option<Duration>); 10] = [
        ("interchange table", interchange_table, Some(Duration::from_secs(1))),
        ("little-cubes operad axioms", cube_axioms, Some(Duration::from_secs(10))),
        ("phi-psi identity", phi_psi, None),
        ("witness independence", witness_independence, None),
        ("shrinking", shrinking, None),
        ("non-smallness witness", non_smallness, None),
        ("simplicial suite", simplicial_suite, Some(Duration::from_secs(30))),
        ("monad and module bijection", monad_and_lemma, None),
        ("hom equalizer oracle", hom_oracle, None),
        ("specialness diagnostic", specialness, Some(Duration::from_secs(60))),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let took = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(limit)) if took > *limit => Err(format!("took {took:.2?}, limit {limit:?}")),
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail} ({took:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {why} ({took:.2?})", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
