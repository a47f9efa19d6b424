use std::sync::Arc;

use ogpd::action::GroupoidAction;
use ogpd::builders::basic::interval;
use ogpd::builders::fixtures::{example_vi, klein_hlp, pstar};
use ogpd::builders::random::{random_instance, RandomParams};
use ogpd_cli::{parse, same_functor, same_structure, CliError, Model, Writer};
use proptest::prelude::*;

fn fixture_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn load(text: &str) -> Model {
    Model::build(parse(text).expect("parses")).expect("valid")
}

fn klein_text() -> String {
    std::fs::read_to_string(fixture_path("klein.ogq")).unwrap()
}

#[test]
fn shipped_klein_equals_builtin() {
    let m = load(&klein_text());
    let k = klein_hlp();
    assert!(same_structure(&m.groupoids[0], &k.e));
    assert!(same_structure(&m.groupoids[1], &k.g));
    assert!(same_structure(&m.groupoids[2], &k.h));
    assert!(same_functor(&m.functors[0], &k.i));
    assert!(same_functor(&m.functors[1], &k.p));
    let sq = &m.squares[0];
    let labels = |s: &ogpd::HomotopySquare| -> Vec<String> {
        s.iota_images()
            .iter()
            .map(|&a| s.p().target().label(a).to_string())
            .collect()
    };
    assert_eq!(labels(sq), labels(&k.square));
}

#[test]
fn shipped_fixtures_match_builtins() {
    let ps = pstar();
    let m = load(&std::fs::read_to_string(fixture_path("pstar.ogq")).unwrap());
    assert!(same_functor(&m.functors[1], &ps.p));
    let m = load(&std::fs::read_to_string(fixture_path("example_vi.ogq")).unwrap());
    assert!(same_structure(&m.groupoids[0], &example_vi().s));
    assert_eq!(m.subgroupoids[0].len(), m.groupoids[0].num_arrows());
    let m = load(&std::fs::read_to_string(fixture_path("interval.ogq")).unwrap());
    assert!(same_structure(&m.groupoids[0], &interval()));
}

#[test]
fn round_trip_on_shipped_files() {
    for name in ["klein.ogq", "pstar.ogq", "example_vi.ogq"] {
        let text = std::fs::read_to_string(fixture_path(name)).unwrap();
        assert_eq!(load(&text).write(), text, "{name}");
    }
    let text = std::fs::read_to_string(fixture_path("interval.ogq")).unwrap();
    let once = load(&text).write();
    assert_eq!(load(&once).write(), once);
}

#[test]
fn actions_round_trip() {
    let i = Arc::new(interval());
    let act = GroupoidAction::trivial(i.clone()).unwrap();
    let mut w = Writer::new();
    w.groupoid("I", &i).action("ends", &act);
    let text = w.finish();
    let m = load(&text);
    assert!(m.actions[0].same_table(&act));
    assert_eq!(m.write(), text);
}

fn semantic_line(text: &str) -> (usize, String) {
    match parse(text) {
        Err(CliError::Semantic { at, message }) => (at.line, message),
        other => panic!("expected a semantic error, got {other:?}"),
    }
}

#[test]
fn manual_identity_is_rejected() {
    let text =
        "[[groupoid]]\nname = \"X\"\nobjects = [\"e\"]\narrows = [[\"id:e\", \"e\", \"e\"]]\n";
    let (line, msg) = semantic_line(text);
    assert_eq!(line, 4);
    assert!(msg.contains("id:e"));
}

#[test]
fn dangling_and_duplicate_names_are_located() {
    let dangling = "[[groupoid]]\nname = \"X\"\nobjects = [\"e\"]\n\n\narrows = [[\"g\", \"e\", \"nowhere\"]]\n";
    let (line, msg) = semantic_line(dangling);
    assert_eq!(line, 6);
    assert!(msg.contains("nowhere"));
    let duplicate = "[[groupoid]]\nname = \"X\"\nobjects = [\"e\",\n  \"e\"]\n";
    assert_eq!(semantic_line(duplicate).0, 4);
    let functor = format!(
        "{}\n[[functor]]\nname = \"f\"\nsource = \"E\"\ntarget = \"Q\"\nobjects = []\n",
        klein_text()
    );
    assert!(semantic_line(&functor).1.contains("\"Q\""));
}

#[test]
fn incomplete_tables_are_rejected() {
    let text = "[[groupoid]]\nname = \"X\"\nobjects = [\"e\"]\narrows = [[\"g\", \"e\", \"e\"]]\ninverses = [[\"g\", \"g\"]]\n";
    assert!(semantic_line(text).1.contains("no composite"));
    let text = "[[groupoid]]\nname = \"X\"\nobjects = [\"e\"]\narrows = [[\"g\", \"e\"]]\n";
    assert!(semantic_line(text).1.contains("3 elements"));
}

#[test]
fn syntax_errors_carry_a_location() {
    match parse("[[groupoid]]\nname = \"X\"\nobjects = [\"e\"\n") {
        Err(CliError::Syntax { at: Some(at), .. }) => assert!(at.line >= 3),
        other => panic!("expected a syntax error, got {other:?}"),
    }
    assert!(matches!(
        parse("[[monoid]]\nname = \"M\"\n"),
        Err(CliError::Syntax { .. })
    ));
}

#[test]
fn axiom_failures_surface_when_building() {
    let text = "[[groupoid]]\nname = \"X\"\nobjects = [\"e\"]\narrows = [[\"g\", \"e\", \"e\"]]\ninverses = [[\"g\", \"g\"]]\ncompose = [[\"g\", \"g\", \"g\"]]\n";
    let file = parse(text).unwrap();
    assert!(matches!(Model::build(file), Err(CliError::Invalid { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn random_instances_round_trip(seed in any::<u64>(), with_interval in any::<bool>()) {
        let inst = random_instance(seed, RandomParams { with_interval, ..RandomParams::default() }).unwrap();
        let mut w = Writer::new();
        w.groupoid("G", &inst.groupoid);
        let text = w.finish();
        let m = load(&text);
        prop_assert!(same_structure(&m.groupoids[0], &inst.groupoid));
        prop_assert_eq!(m.write(), text);
    }
}
