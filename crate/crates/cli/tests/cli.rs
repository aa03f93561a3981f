//! Exit codes, error paths and the remaining subcommands.

use std::path::PathBuf;

use ordcomp_cli::run_from_args;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .display()
        .to_string()
}

#[test]
fn classify_finite_chain_is_all_green() {
    let (out, code) = run_from_args(["ordcomp", "classify", &fixture("chain3.space.json")]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("esakia: ok"));
    assert!(out.contains("locally_esakia: ok"));
}

#[test]
fn classify_noncontinuous_space_reports_the_witness() {
    let (out, code) =
        run_from_args(["ordcomp", "classify", &fixture("noncontinuous.space.json")]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("continuously_ordered: counterexample"));
    assert!(out.contains("order_zero_dimensional: ok"));
    assert!(out.contains("downset_not_open"));
}

#[test]
fn ring_ladder_on_the_pullback_fixture() {
    for (level, expect) in [
        ("ring", 0),
        ("priestley", 0),
        ("basis", 0),
        ("heyting", 0),
        ("esakia", 1),
        ("nbasis", 1),
    ] {
        let (out, code) = run_from_args([
            "ordcomp",
            "ring-check",
            &fixture("fig2_ry.ring.json"),
            "--level",
            level,
        ]);
        assert_eq!(code, expect, "level {level}: {out}");
    }
}

#[test]
fn missing_file_and_bad_documents_exit_2() {
    let (_, code) = run_from_args(["ordcomp", "classify", "/nonexistent.json"]);
    assert_eq!(code, 2);
    let (out, code) =
        run_from_args(["ordcomp", "pair-classify", &fixture("bad_format.pair.json")]);
    assert_eq!(code, 2);
    assert!(out.contains("format"));
    let (_, code) = run_from_args(["ordcomp", "lattice-check", &fixture("m3.lattice.json")]);
    assert_eq!(code, 2, "non-distributive lattices are invalid input");
    // An empty file is a parse error.
    let dir = std::env::temp_dir().join("ordcomp-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let empty = dir.join("empty.json");
    std::fs::write(&empty, "").unwrap();
    let (_, code) = run_from_args(["ordcomp", "classify", empty.to_str().unwrap()]);
    assert_eq!(code, 2);
}

#[test]
fn lattice_check_agrees_on_the_square() {
    let (out, code) =
        run_from_args(["ordcomp", "lattice-check", &fixture("square.lattice.json")]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("prime_filter_oracles_agree: ok"));
    assert!(out.contains("heyting: ok"));
    assert!(out.contains("\"prime_filters\":2"));
}

#[test]
fn eta0_compactify_and_compare_chain() {
    let (out, code) = run_from_args([
        "ordcomp",
        "eta0",
        &fixture("chain3.space.json"),
        "--format",
        "json",
    ]);
    assert_eq!(code, 0, "{out}");
    let report: serde_json::Value = serde_json::from_str(&out).unwrap();
    let pair = report["result"].clone();
    // Feed the constructed pair back through pair-classify.
    let dir = std::env::temp_dir().join("ordcomp-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("eta0_chain3.pair.json");
    std::fs::write(&path, serde_json::to_string(&pair).unwrap()).unwrap();
    let (out, code) = run_from_args(["ordcomp", "pair-classify", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("esakia: ok"));

    let (out2, code) = run_from_args(["ordcomp", "compactify", "--basis", &fixture("up3.ring.json")]);
    assert_eq!(code, 0, "{out2}");
    let (out3, code) = run_from_args([
        "ordcomp",
        "compare",
        path.to_str().unwrap(),
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{out3}");
    assert!(out3.contains("connecting_map: ok"));
}

#[test]
fn lemma_check_fixture_holds() {
    let (out, code) =
        run_from_args(["ordcomp", "lemma-check", &fixture("family_chain.family.json")]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("down_directed_intersection: ok"));
}

#[test]
fn render_emits_dot_with_hollow_new_points() {
    let (out, code) = run_from_args([
        "ordcomp",
        "render",
        &fixture("fig2.pair.json"),
        "--format",
        "dot",
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.starts_with("digraph pair"));
    assert!(out.contains("\"inf\" [shape=circle, style=solid"));
    assert!(out.contains("\"N(0)\" [shape=circle, style=filled"));
    // Stable output.
    let (again, _) = run_from_args([
        "ordcomp",
        "render",
        &fixture("fig2.pair.json"),
        "--format",
        "dot",
    ]);
    assert_eq!(out, again);
}

#[test]
fn suite_on_the_infinite_corpus_file() {
    let (out, code) = run_from_args([
        "ordcomp",
        "suite",
        "--corpus",
        &fixture("infinite.corpus.json"),
        "--samples",
        "60",
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("esakia_iff_esakia_ring: ok"));
}

#[test]
fn emitted_witnesses_replay() {
    // A reported counterexample, parsed back out of the report, must refute
    // the check again.
    let (out, code) = run_from_args([
        "ordcomp",
        "pair-classify",
        &fixture("fig2.pair.json"),
        "--format",
        "json",
    ]);
    assert_eq!(code, 1);
    let report: serde_json::Value = serde_json::from_str(&out).unwrap();
    let n_order = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "n_order")
        .unwrap();
    assert_eq!(n_order["verdict"], "counterexample");
    let raw = std::fs::read(fixture("fig2.pair.json")).unwrap();
    let pair = ordcomp::doc::parse_pair(&serde_json::from_slice(&raw).unwrap()).unwrap();
    let w = ordcomp::doc::parse_rset(pair.x().carrier(), &n_order["witness"]["W"], "W").unwrap();
    let v = ordcomp::doc::parse_rset(pair.x().carrier(), &n_order["witness"]["V"], "V").unwrap();
    // The witness pair is order-separated in the base space but admits no
    // clopen-upset member of the ring between them.
    let up_w = pair.x().order().upclose(&w);
    let down_v = pair.x().order().downclose(&v);
    assert!(up_w.intersection(&down_v).is_empty());
    assert!(pair
        .y()
        .greedy_clopen_upset(&pair.e().image(&w), &pair.e().image(&v))
        .is_err());
}
