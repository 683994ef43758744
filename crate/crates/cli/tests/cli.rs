use std::path::PathBuf;
use std::process::{Command, Output};

use boxcubes::boxprod::interchange_perm;
use boxcubes::cubes::{cube_compose, CubeConfig, LittleCube};
use boxcubes::schema::Document;
use boxcubes::simplicial::FiniteSimplicialSet;

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/data");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_boxcubes"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn status(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn compose_matches_library() {
    let o = run(&["cubes", "compose", &data("half.json"), &data("upper_half.json")]);
    assert_eq!(status(&o), 0);
    let got = Document::parse(&stdout(&o)).unwrap().cube_config().unwrap();
    let half = |a, b| CubeConfig::plain(1, vec![LittleCube::from_fractions(&[(a, b)])]).unwrap();
    let expected = cube_compose(&half((0, 1), (1, 2)), &[half((1, 2), (1, 1))]).unwrap();
    assert_eq!(got, expected);
    assert_eq!(got, half((1, 4), (1, 2)));
}

#[test]
fn sigma_matches_library() {
    let o = run(&["box", "sigma", "--m", "2", "--n", "2"]);
    assert_eq!(stdout(&o), "[1,3,2,4]\n");
    let o = run(&["box", "sigma", "--m", "3", "--n", "2"]);
    assert_eq!(stdout(&o).trim(), interchange_perm(3, 2).to_string());
}

#[test]
fn euler_of_two_simplex() {
    let o = run(&["sset", "euler", &data("delta2.json")]);
    assert_eq!(status(&o), 0);
    assert_eq!(stdout(&o), "1\n");
    let s = Document::parse(&std::fs::read_to_string(data("delta2.json")).unwrap()).unwrap().sset().unwrap();
    assert_eq!(s.nondegenerate_counts(), FiniteSimplicialSet::simplex(2, 3).nondegenerate_counts());
}

#[test]
fn corpus_roundtrips() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data");
    let mut seen = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let text = std::fs::read_to_string(entry.unwrap().path()).unwrap();
        let doc = Document::parse(&text).unwrap();
        let printed = doc.to_text();
        assert_eq!(Document::parse(&printed).unwrap().to_text(), printed);
        seen += 1;
    }
    assert!(seen >= 10);
}

#[test]
fn interchange_is_found() {
    let o = run(&["box", "equiv", &data("interchange.json"), &data("interchanged.json")]);
    assert_eq!(status(&o), 0);
    assert!(stdout(&o).contains("\"equal\""));
    let o = run(&["box", "rewrite", &data("interchange.json"), "--interchange", "."]);
    assert!(stdout(&o).contains("(R:beta (L:alpha 1 2) (L:alpha 3 4))[1,3,2,4]"));
}

#[test]
fn sset_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let nerve = dir.path().join("nerve.json");
    let o = run(&["sset", "nerve", &data("chain2.json"), "--cap", "3", "-o", nerve.to_str().unwrap()]);
    assert_eq!(status(&o), 0);
    let sd = dir.path().join("sd.json");
    let o = run(&["sset", "subdivide", nerve.to_str().unwrap(), "-o", sd.to_str().unwrap()]);
    assert_eq!(status(&o), 0);
    assert_eq!(stdout(&run(&["sset", "euler", sd.to_str().unwrap()])), "1\n");
    let o = run(&["sset", "pi0", sd.to_str().unwrap()]);
    assert!(stdout(&o).contains("\"count\": 1"));
}

#[test]
fn bar_and_hom() {
    let dir = tempfile::tempdir().unwrap();
    let bar = dir.path().join("bar.json");
    let o = run(&["sset", "bar", &data("c2_bar.json"), "--cap", "2", "-o", bar.to_str().unwrap()]);
    assert_eq!(status(&o), 0);
    assert!(stdout(&run(&["sset", "pi0", bar.to_str().unwrap()])).contains("\"count\": 1"));
    let o = run(&["fib", "hom", &data("c2_hom.json")]);
    assert_eq!(status(&o), 0);
    assert!(stdout(&o).contains("\"cross_checked\": true"));
}

#[test]
fn cube_commands() {
    let g = data("grid2.json");
    assert!(stdout(&run(&["cubes", "small", &g, "--k", "1"])).contains("\"small\": true"));
    let o = run(&["cubes", "psi", &g, "--k", "1"]);
    assert_eq!(status(&o), 0);
    assert!(stdout(&o).contains("\"word\""));
    let o = run(&["cubes", "shrink", &g, "--k", "1"]);
    assert!(stdout(&o).contains("\"depth\": 0"));
    let o = run(&["cubes", "subdivide", &g, &g]);
    assert_eq!(Document::parse(&stdout(&o)).unwrap().cube_config().unwrap().len(), 2);
    let svg = stdout(&run(&["cubes", "render", &g]));
    assert!(svg.starts_with("<svg") && svg.contains("512"));
    assert_eq!(status(&run(&["cubes", "small", &g, "--k", "2"])), 3);
}

#[test]
fn operad_commands() {
    let o = run(&["op", "axioms", &data("comm4.json")]);
    assert_eq!(status(&o), 0);
    let o = run(&["op", "wreath", "--lambda", "[2,1]", "--kappa", "[1]", "--kappa", "[2,1]"]);
    assert_eq!(status(&o), 0);
    assert_eq!(stdout(&o).trim().len(), "[1,2,3]".len());
}

#[test]
fn fibered_commands() {
    let c = data("comm4.json");
    for args in [
        vec!["fib", "free", c.as_str(), "--cap", "3"],
        vec!["fib", "dfun", c.as_str(), "--cap", "2", "--ell", "2"],
        vec!["fib", "afib", c.as_str(), "--cap", "2"],
        vec!["fib", "lemma-pred", c.as_str(), "--cap", "3", "--module", "a,b", "--target", "p", "--map", "1,1"],
    ] {
        let o = run(&args);
        assert_eq!(status(&o), 0, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(status(&run(&["fib", "afib", c.as_str(), "--cap", "3"])), 3);
}

#[test]
fn special_statuses() {
    let o = run(&["fib", "special", &data("comm6.json"), "--cap", "3", "--ell", "2", "--dim", "3"]);
    assert_eq!(status(&o), 0);
    assert!(stdout(&o).contains("\"bijective\""));
    let o = run(&["fib", "special", &data("free_binary.json"), "--cap", "2", "--ell", "2", "--dim", "3"]);
    assert_eq!(status(&o), 4);
    assert!(stdout(&o).contains("truncation-inconclusive"));
}

#[test]
fn jobs_do_not_change_output() {
    let args = ["fib", "special", &data("comm6.json"), "--cap", "3", "--ell", "1", "--dim", "3"];
    let one = run(&[&args[..], &["--jobs", "1"]].concat());
    let four = run(&[&args[..], &["--jobs", "4"]].concat());
    assert_eq!(one.stdout, four.stdout);
    let a = run(&["op", "axioms", &data("comm4.json"), "--jobs", "3"]);
    let b = run(&["op", "axioms", &data("comm4.json")]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn malformed_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p.to_string_lossy().into_owned()
    };
    let truncated = write("t.json", "{\"kind\":\"cube-config\"");
    let unknown = write("u.json", "{\"kind\":\"teapot\"}");
    let overlap = write(
        "o.json",
        r#"{"kind":"cube-config","k":1,"strict":false,"cubes":[[["0","3/4"]],[["1/2","1"]]]}"#,
    );
    let not_cat = write(
        "c.json",
        r#"{"kind":"category","objects":["a"],"morphisms":[],"identities":[0],"composition":[]}"#,
    );
    let bad_word = write("w.json", r#"{"kind":"box-word","word":"(L:alpha 1"}"#);
    let (half, comm4, delta2, c2_bar) = (data("half.json"), data("comm4.json"), data("delta2.json"), data("c2_bar.json"));
    let cases: Vec<(Vec<&str>, i32)> = vec![
        (vec!["cubes", "render", &truncated], 2),
        (vec!["cubes", "render", &unknown], 2),
        (vec!["cubes", "render", "/nonexistent/file.json"], 2),
        (vec!["sset", "euler", &half], 2),
        (vec!["cubes", "render", &overlap], 3),
        (vec!["sset", "nerve", &not_cat, "--cap", "2"], 3),
        (vec!["box", "rewrite", &bad_word], 3),
        (vec!["cubes", "compose", &half], 3),
        (vec!["box", "sigma", "--m", "2"], 2),
        (vec!["fib", "free", &comm4, "--cap", "0"], 2),
        (vec!["fib", "free", &comm4, "--cap", "9"], 3),
        (vec!["sset", "euler", &delta2, "--jobs", "0"], 2),
        (vec!["op", "wreath", "--lambda", "[1,1]", "--kappa", "[1]"], 2),
        (vec!["fib", "lemma-pred", &comm4, "--cap", "2", "--module", "a", "--target", "p", "--map", "5"], 3),
        (vec!["fib", "hom", &c2_bar], 3),
        (vec!["bogus"], 2),
    ];
    for (args, code) in cases {
        let o = run(&args);
        assert_eq!(status(&o), code, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!String::from_utf8_lossy(&o.stderr).contains("panicked"));
    }
}
