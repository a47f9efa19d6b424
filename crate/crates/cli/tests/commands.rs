use std::path::{Path, PathBuf};
use std::process::Command;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn ogpd(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ogpd"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).expect("utf-8"),
    )
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn klein_square_has_no_lift() {
    let (code, out) = ogpd(&["lift", path(&fixture("klein.ogq"))]);
    assert_eq!(code, 1);
    assert!(out.contains("no lift exists"));
}

#[test]
fn example_vi_quotient() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("q.dot");
    let (code, out) = ogpd(&[
        "quotient",
        path(&fixture("example_vi.ogq")),
        "--dot",
        path(&dot),
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("objects: 5"));
    assert!(out.contains("inductive: false"));
    let d = std::fs::read_to_string(dot).unwrap();
    let nodes = d
        .lines()
        .filter(|l| l.contains("[label=") && !l.contains("->"))
        .count();
    let edges: Vec<&str> = d.lines().filter(|l| l.contains("->")).collect();
    assert_eq!(nodes, 5);
    assert!(!edges.is_empty() && edges.iter().all(|l| l.contains("dashed")));
}

#[test]
fn interval_validates() {
    let (code, out) = ogpd(&["validate", path(&fixture("interval.ogq"))]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.ogq");
    std::fs::write(
        &bad,
        "[[groupoid]]\nname = \"X\"\nobjects = [\"e\"]\narrows = [[\"id:e\", \"e\", \"e\"]]\n",
    )
    .unwrap();
    let (code, out) = ogpd(&["validate", path(&bad)]);
    assert_eq!(code, 2);
    assert!(out.contains("4:"));
    let (code, _) = ogpd(&["validate", path(&dir.path().join("missing.ogq"))]);
    assert_eq!(code, 2);
    let (code, _) = ogpd(&["fixture", "bicyclic"]);
    assert_eq!(code, 2);
    let (code, _) = ogpd(&["enlarge", path(&fixture("klein.ogq")), "--functor", "p"]);
    assert_eq!(code, 2);
}

#[test]
fn axiom_failure_is_a_false_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.ogq");
    let text = "[[groupoid]]\nname = \"X\"\nobjects = [\"e\"]\narrows = [[\"g\", \"e\", \"e\"]]\ninverses = [[\"g\", \"g\"]]\ncompose = [[\"g\", \"g\", \"g\"]]\n";
    std::fs::write(&bad, text).unwrap();
    let (code, _) = ogpd(&["validate", path(&bad)]);
    assert_eq!(code, 1);
}

#[test]
fn tiny_budget_exits_three() {
    let (code, out) = ogpd(&[
        "--json",
        "--budget",
        "1",
        "lift",
        path(&fixture("klein.ogq")),
    ]);
    assert_eq!(code, 3);
    assert!(out.contains("budget-exceeded"));
}

#[test]
fn verdicts_are_stable() {
    let k = fixture("klein.ogq");
    for args in [
        vec!["--json", "classify", path(&k), "--functor", "p"],
        vec!["--json", "factorize", path(&k), "--functor", "p"],
        vec!["--json", "enlarge", path(&k), "--functor", "i"],
        vec!["--json", "cocylinder", path(&k), "--functor", "p"],
    ] {
        let (c1, a) = ogpd(&args);
        let (c2, b) = ogpd(&args);
        assert_eq!((c1, &a), (c2, &b));
        assert_eq!(c1, 0, "{a}");
    }
}

#[test]
fn classify_reports_the_star_class() {
    let (code, out) = ogpd(&[
        "--json",
        "classify",
        path(&fixture("klein.ogq")),
        "--functor",
        "p",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["facts"]["class"], "fibration");
}

#[test]
fn generated_files_feed_back_in() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("r.ogq");
    let (code, _) = ogpd(&["random", "11", "-o", path(&file)]);
    assert_eq!(code, 0);
    let (code, out) = ogpd(&["validate", path(&file)]);
    assert_eq!(code, 0, "{out}");
    let (code, out) = ogpd(&["factorize", path(&file)]);
    assert_eq!(code, 0, "{out}");
    let (code, out) = ogpd(&["quotient", path(&file)]);
    assert_eq!(code, 0, "{out}");

    let file = dir.path().join("k.ogq");
    ogpd(&["fixture", "klein_hlp", "-o", path(&file)]);
    assert_eq!(
        std::fs::read(&file).unwrap(),
        std::fs::read(fixture("klein.ogq")).unwrap()
    );
}
