use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use boxcubes::boxprod::{interchange_perm, BoxWord, EquivalenceVerdict, FreeColours, Rewriter, TableColours};
use boxcubes::cubes::{
    common_subdivision, cube_compose, find_witness, psi_decompose, render_svg, shrink_to_small, CubeConfig,
};
use boxcubes::fibered::{
    build_fibered_a, check_action_laws, d_functor, free_algebra, hom_equalizer, lemma_pred_check,
    specialness_diagnostic, FiberedError, Verdict,
};
use boxcubes::operad::{block_wreath, check_operad_axioms, parse_path, GeneratorSignature, Permutation, SetOperad};
use boxcubes::schema::{Document, SchemaError};
use boxcubes::simplicial::{nerve, subdivide, two_sided_bar, SimplicialError};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "boxcubes", version, about = "Exact little-cubes, box-product and simplicial computations")]
struct Cli {
    /// Worker threads for library-level parallelism.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    jobs: u16,
    /// Write the result here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Set operads and permutations.
    #[command(subcommand)]
    Op(OpCommand),
    /// Box-product words.
    #[command(subcommand)]
    Box(BoxCommand),
    /// Little-cubes configurations.
    #[command(subcommand)]
    Cubes(CubesCommand),
    /// Finite simplicial sets.
    #[command(subcommand)]
    Sset(SsetCommand),
    /// Free algebras, the fibered operad and the specialness check.
    #[command(subcommand)]
    Fib(FibCommand),
}

#[derive(Subcommand, Debug)]
enum OpCommand {
    /// Check the operad axioms on an operad-table document.
    Axioms {
        operad: PathBuf,
        #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
        budget: u64,
    },
    /// The block permutation of an outer permutation and inner ones.
    Wreath {
        #[arg(long)]
        lambda: String,
        /// One per block, in order.
        #[arg(long = "kappa", required = true)]
        kappas: Vec<String>,
    },
}

#[derive(Subcommand, Debug)]
enum BoxCommand {
    /// The interchange permutation of an m×n grid.
    Sigma {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        m: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
    },
    /// Collapse a word to colour-internal normal form, or apply one interchange.
    Rewrite {
        word: PathBuf,
        #[command(flatten)]
        colours: Colours,
        /// Node path such as `.` for the root or `0.1`.
        #[arg(long)]
        interchange: Option<String>,
    },
    /// Decide whether two words are equal in the box product.
    Equiv {
        first: PathBuf,
        second: PathBuf,
        #[command(flatten)]
        colours: Colours,
        #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
        budget: u64,
    },
}

#[derive(Args, Debug)]
struct Colours {
    /// Operad-table documents for the two colours; free colours if omitted.
    #[arg(long, requires = "right")]
    left: Option<PathBuf>,
    #[arg(long, requires = "left")]
    right: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum CubesCommand {
    /// `γ(outer; inners…)`.
    Compose { outer: PathBuf, inners: Vec<PathBuf> },
    /// Search for a grid witness splitting the axes as k + (dim − k).
    Small {
        config: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
    },
    /// The box-product word of a small configuration.
    Psi {
        config: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
    },
    /// Scale by 1, 1/2, 1/4, … until the configuration is small.
    Shrink {
        config: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        #[arg(long, default_value_t = 12)]
        depth: u32,
    },
    /// The common subdivision of two configurations.
    Subdivide { first: PathBuf, second: PathBuf },
    /// Render as SVG.
    Render { config: PathBuf },
}

#[derive(Subcommand, Debug)]
enum SsetCommand {
    /// Nerve of a category document.
    Nerve {
        category: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        cap: u64,
    },
    /// `B(X, M, Y)` from a monoid-module document holding a right module X then a left module Y.
    Bar {
        monoid: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        cap: u64,
    },
    /// Barycentric subdivision.
    Subdivide { sset: PathBuf },
    /// Connected components.
    Pi0 { sset: PathBuf },
    /// Euler characteristic.
    Euler { sset: PathBuf },
}

#[derive(Args, Debug)]
struct Algebra {
    /// Operad-table document.
    operad: PathBuf,
    /// Comma-separated generator names.
    #[arg(long, default_value = "x")]
    generators: String,
    /// Weight cap N.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    cap: u64,
}

#[derive(Subcommand, Debug)]
enum FibCommand {
    /// The free algebra truncated at weight N, with the monad laws checked.
    Free {
        #[command(flatten)]
        algebra: Algebra,
    },
    /// The functor D_ℓ with its right action checked.
    Dfun {
        #[command(flatten)]
        algebra: Algebra,
        #[arg(long)]
        ell: usize,
    },
    /// The fibered operad A(n) for n ≤ N.
    Afib {
        #[command(flatten)]
        algebra: Algebra,
    },
    /// The free module on M against collapse(A(1)) × M, natural in f: M → M′.
    LemmaPred {
        #[command(flatten)]
        algebra: Algebra,
        #[arg(long)]
        module: String,
        #[arg(long)]
        target: String,
        /// Images of f as 1-based indices into the target.
        #[arg(long)]
        map: String,
    },
    /// Module maps between the first two modules of a monoid-module document.
    Hom { monoid: PathBuf },
    /// The π₀ comparison over C(ℓ).
    Special {
        #[command(flatten)]
        algebra: Algebra,
        #[arg(long)]
        ell: usize,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        dim: u64,
        /// Restrict the middle factor to the fiber of A(1) over the unit.
        #[arg(long)]
        unit_fiber: bool,
    },
}

enum Failure {
    Parse(String),
    Domain(String),
    Inconclusive { message: String, report: String },
}

impl Failure {
    fn domain(e: impl std::fmt::Display) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<SchemaError> for Failure {
    fn from(e: SchemaError) -> Self {
        match e {
            SchemaError::Parse(_) | SchemaError::WrongKind { .. } => Failure::Parse(e.to_string()),
            SchemaError::Invalid { .. } => Failure::Domain(e.to_string()),
        }
    }
}

fn from_fibered(e: FiberedError) -> Failure {
    match e {
        FiberedError::Simplicial(SimplicialError::TruncationInconclusive { .. }) => Failure::Inconclusive {
            message: e.to_string(),
            report: String::new(),
        },
        _ => Failure::domain(e),
    }
}

fn from_simplicial(e: SimplicialError) -> Failure {
    match e {
        SimplicialError::TruncationInconclusive { .. } => Failure::Inconclusive {
            message: e.to_string(),
            report: String::new(),
        },
        _ => Failure::domain(e),
    }
}

type Outcome = Result<String, Failure>;

fn load(path: &Path) -> Result<Document, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    Document::parse(&text).map_err(|e| match e {
        SchemaError::Parse(m) => Failure::Parse(format!("{}: {m}", path.display())),
        other => other.into(),
    })
}

fn load_config(path: &Path) -> Result<CubeConfig, Failure> {
    Ok(load(path)?.cube_config()?)
}

fn load_operad(path: &Path) -> Result<Box<dyn SetOperad>, Failure> {
    Ok(load(path)?.operad()?)
}

fn report<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports always serialize");
    s.push('\n');
    s
}

fn names(list: &str) -> Vec<String> {
    list.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect()
}

fn small_arg(v: u64) -> usize {
    usize::try_from(v).unwrap_or(usize::MAX)
}

fn permutation(s: &str) -> Result<Permutation, Failure> {
    s.parse::<Permutation>().map_err(|e| Failure::Parse(format!("{s:?}: {e}")))
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Op(c) => run_op(c),
        Command::Box(c) => run_box(c),
        Command::Cubes(c) => run_cubes(c),
        Command::Sset(c) => run_sset(c),
        Command::Fib(c) => run_fib(c),
    }
}

fn run_op(command: OpCommand) -> Outcome {
    match command {
        OpCommand::Axioms { operad, budget } => {
            let c = load_operad(&operad)?;
            let r = check_operad_axioms(c.as_ref(), budget);
            if r.all_pass() {
                Ok(report(&r))
            } else {
                Err(Failure::Domain(format!("axioms fail\n{}", report(&r))))
            }
        }
        OpCommand::Wreath { lambda, kappas } => {
            let lambda = permutation(&lambda)?;
            let kappas = kappas.iter().map(|k| permutation(k)).collect::<Result<Vec<_>, _>>()?;
            let ks: Vec<usize> = kappas.iter().map(Permutation::size).collect();
            let w = block_wreath(&lambda, &kappas, &ks).map_err(Failure::domain)?;
            Ok(format!("{w}\n"))
        }
    }
}

fn with_colours<T>(
    colours: &Colours,
    body: impl FnOnce(&Rewriter<GeneratorSignature>) -> Result<T, Failure>,
) -> Result<T, Failure> {
    match (&colours.left, &colours.right) {
        (Some(l), Some(r)) => {
            let (l, r) = (load_operad(l)?, load_operad(r)?);
            let algebra = TableColours::new(l.as_ref(), r.as_ref());
            body(&Rewriter::new(&algebra))
        }
        _ => {
            let algebra = FreeColours::default();
            body(&Rewriter::new(&algebra))
        }
    }
}

fn load_word(path: &Path) -> Result<BoxWord<GeneratorSignature>, Failure> {
    Ok(load(path)?.box_word()?)
}

fn run_box(command: BoxCommand) -> Outcome {
    match command {
        BoxCommand::Sigma { m, n } => {
            let (m, n) = (small_arg(m), small_arg(n));
            if m.saturating_mul(n) > 1 << 20 {
                return Err(Failure::Domain(format!("{m}×{n} grid is too large")));
            }
            Ok(format!("{}\n", interchange_perm(m, n)))
        }
        BoxCommand::Rewrite {
            word,
            colours,
            interchange,
        } => {
            let w = load_word(&word)?;
            with_colours(&colours, |rw| {
                let (result, steps) = match &interchange {
                    Some(p) => {
                        let path = parse_path(p).map_err(|e| Failure::Parse(e.to_string()))?;
                        let r = rw.apply_interchange(&w, &path).map_err(Failure::domain)?;
                        (r, vec![format!("interchange @{p}")])
                    }
                    None => {
                        let (r, trace) = rw.collapse_traced(&w).map_err(Failure::domain)?;
                        (r, trace.iter().map(ToString::to_string).collect())
                    }
                };
                Ok(report(&json!({
                    "input": w.to_string(),
                    "result": result.to_string(),
                    "steps": steps,
                })))
            })
        }
        BoxCommand::Equiv {
            first,
            second,
            colours,
            budget,
        } => {
            let (w1, w2) = (load_word(&first)?, load_word(&second)?);
            with_colours(&colours, |rw| {
                let verdict = rw.equivalent(&w1, &w2, small_arg(budget)).map_err(Failure::domain)?;
                let body = match &verdict {
                    EquivalenceVerdict::Equal { trace } => json!({
                        "verdict": verdict.label(),
                        "trace": trace.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    }),
                    EquivalenceVerdict::Distinct {
                        left_closure,
                        right_closure,
                    } => json!({
                        "verdict": verdict.label(),
                        "left_closure": left_closure.len(),
                        "right_closure": right_closure.len(),
                    }),
                    EquivalenceVerdict::Unknown { explored } => json!({
                        "verdict": verdict.label(),
                        "explored": explored,
                    }),
                };
                if let EquivalenceVerdict::Unknown { .. } = verdict {
                    return Err(Failure::Inconclusive {
                        message: "budget exhausted before a decision".into(),
                        report: report(&body),
                    });
                }
                Ok(report(&body))
            })
        }
    }
}

fn split_k(e: &CubeConfig, k: u64) -> Result<usize, Failure> {
    let k = small_arg(k);
    if k >= e.dim() {
        return Err(Failure::Domain(format!("k = {k} must be below the dimension {}", e.dim())));
    }
    Ok(k)
}

fn run_cubes(command: CubesCommand) -> Outcome {
    match command {
        CubesCommand::Compose { outer, inners } => {
            let outer = load_config(&outer)?;
            let inners = inners.iter().map(|p| load_config(p)).collect::<Result<Vec<_>, _>>()?;
            let r = cube_compose(&outer, &inners).map_err(Failure::domain)?;
            Ok(Document::from(&r).to_text())
        }
        CubesCommand::Small { config, k } => {
            let e = load_config(&config)?;
            let k = split_k(&e, k)?;
            let w = find_witness(&e, k).map_err(Failure::domain)?;
            Ok(report(&json!({ "small": w.is_some(), "witness": w })))
        }
        CubesCommand::Psi { config, k } => {
            let e = load_config(&config)?;
            let k = split_k(&e, k)?;
            let w = find_witness(&e, k)
                .map_err(Failure::domain)?
                .ok_or_else(|| Failure::Domain(format!("{e} is not small for k = {k}")))?;
            let word = psi_decompose(&e, &w).map_err(Failure::domain)?;
            Ok(report(&json!({ "word": word.to_string(), "witness": w })))
        }
        CubesCommand::Shrink { config, k, depth } => {
            let e = load_config(&config)?;
            let k = split_k(&e, k)?;
            let s = shrink_to_small(&e, k, depth).map_err(Failure::domain)?;
            Ok(report(&json!({
                "lambda": s.lambda,
                "depth": s.depth,
                "witness": s.witness,
                "scaled": boxcubes::cubes::CubeConfigFile::from(&s.scaled),
            })))
        }
        CubesCommand::Subdivide { first, second } => {
            let (a, b) = (load_config(&first)?, load_config(&second)?);
            if a.dim() != b.dim() {
                return Err(Failure::Domain(format!("dimensions {} and {} differ", a.dim(), b.dim())));
            }
            let cells = common_subdivision(a.cubes(), b.cubes());
            let r = CubeConfig::plain(a.dim(), cells).map_err(Failure::domain)?;
            Ok(Document::from(&r).to_text())
        }
        CubesCommand::Render { config } => {
            let e = load_config(&config)?;
            render_svg(&e).map_err(Failure::domain)
        }
    }
}

fn run_sset(command: SsetCommand) -> Outcome {
    match command {
        SsetCommand::Nerve { category, cap } => {
            let c = load(&category)?.category()?;
            Ok(Document::from(nerve(&c, small_arg(cap))).to_text())
        }
        SsetCommand::Bar { monoid, cap } => {
            let (m, modules) = load(&monoid)?.monoid_module()?;
            let [x, y] = modules.as_slice() else {
                return Err(Failure::Parse("bar needs exactly two modules, right then left".into()));
            };
            let b = two_sided_bar(x, &m, y, small_arg(cap)).map_err(from_simplicial)?;
            Ok(Document::from(b).to_text())
        }
        SsetCommand::Subdivide { sset } => {
            let s = load(&sset)?.sset()?;
            Ok(Document::from(subdivide(&s).map_err(from_simplicial)?).to_text())
        }
        SsetCommand::Pi0 { sset } => {
            let s = load(&sset)?.sset()?;
            let components: Vec<Vec<&str>> = s
                .pi0()
                .iter()
                .map(|class| class.iter().map(|&v| s.name(0, v)).collect())
                .collect();
            Ok(report(&json!({ "count": components.len(), "components": components })))
        }
        SsetCommand::Euler { sset } => {
            let s = load(&sset)?.sset()?;
            Ok(format!("{}\n", s.euler_char().map_err(from_simplicial)?))
        }
    }
}

fn run_fib(command: FibCommand) -> Outcome {
    match command {
        FibCommand::Free { algebra } => {
            let c = load_operad(&algebra.operad)?;
            let gens = names(&algebra.generators);
            let cap = small_arg(algebra.cap);
            let a = free_algebra(c.as_ref(), &gens, cap).map_err(from_fibered)?;
            let laws = check_action_laws(c.as_ref(), 0, gens.len(), cap).map_err(from_fibered)?;
            Ok(report(&json!({ "sizes": a.sizes(), "algebra": a, "monad_laws": laws })))
        }
        FibCommand::Dfun { algebra, ell } => {
            let c = load_operad(&algebra.operad)?;
            let gens = names(&algebra.generators);
            let cap = small_arg(algebra.cap);
            let a = d_functor(c.as_ref(), ell, &gens, cap).map_err(from_fibered)?;
            let laws = check_action_laws(c.as_ref(), ell, gens.len(), cap).map_err(from_fibered)?;
            Ok(report(&json!({ "sizes": a.sizes(), "functor": a, "action_laws": laws })))
        }
        FibCommand::Afib { algebra } => {
            let c = load_operad(&algebra.operad)?;
            let gens = names(&algebra.generators);
            let a = build_fibered_a(c.as_ref(), &gens, small_arg(algebra.cap)).map_err(from_fibered)?;
            let check = a.check().map_err(from_fibered)?;
            let arities: Vec<_> = (0..=a.cap())
                .map(|n| {
                    let fibers: Vec<_> = c
                        .elements(n)
                        .into_iter()
                        .enumerate()
                        .map(|(i, op)| {
                            let members: Vec<String> = a.fiber(n, i).iter().map(|&e| a.label(&a.elements(n)[e])).collect();
                            json!({ "base": c.label(op), "fiber": members })
                        })
                        .collect();
                    json!({ "n": n, "size": a.elements(n).len(), "fibers": fibers })
                })
                .collect();
            Ok(report(&json!({ "sizes": a.sizes(), "arities": arities, "check": check })))
        }
        FibCommand::LemmaPred {
            algebra,
            module,
            target,
            map,
        } => {
            let c = load_operad(&algebra.operad)?;
            let f = names(&map)
                .iter()
                .map(|s| match s.parse::<usize>() {
                    Ok(i) if i >= 1 => Ok(i - 1),
                    _ => Err(Failure::Parse(format!("bad map entry {s:?}"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            let r = lemma_pred_check(
                c.as_ref(),
                &names(&algebra.generators),
                &names(&module),
                small_arg(algebra.cap),
                &f,
                &names(&target),
            )
            .map_err(from_fibered)?;
            Ok(report(&r))
        }
        FibCommand::Hom { monoid } => {
            let (m, modules) = load(&monoid)?.monoid_module()?;
            let [x, y] = modules.as_slice() else {
                return Err(Failure::Parse("hom needs exactly two modules".into()));
            };
            Ok(report(&hom_equalizer(&m, x, y).map_err(from_fibered)?))
        }
        FibCommand::Special {
            algebra,
            ell,
            dim,
            unit_fiber,
        } => {
            let c = load_operad(&algebra.operad)?;
            let gens = names(&algebra.generators);
            let a = build_fibered_a(c.as_ref(), &gens, small_arg(algebra.cap)).map_err(from_fibered)?;
            let r = specialness_diagnostic(&a, ell, small_arg(dim), unit_fiber).map_err(from_fibered)?;
            let text = report(&r);
            if !r.exact || r.components.iter().any(|c| c.verdict == Verdict::TruncationInconclusive) {
                return Err(Failure::Inconclusive {
                    message: "π₀ comparison is inconclusive at this truncation".into(),
                    report: text,
                });
            }
            Ok(text)
        }
    }
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs.into()).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    };
    let output = cli.output.clone();
    let outcome = pool.install(|| run(cli.command));
    let (text, status, message) = match outcome {
        Ok(text) => (text, 0, None),
        Err(Failure::Parse(m)) => (String::new(), 2, Some(m)),
        Err(Failure::Domain(m)) => (String::new(), 3, Some(m)),
        Err(Failure::Inconclusive { message, report }) => (report, 4, Some(message)),
    };
    if !text.is_empty() {
        if let Err(e) = emit(&output, &text) {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    }
    if let Some(m) = message {
        eprintln!("error: {m}");
    }
    ExitCode::from(status)
}
