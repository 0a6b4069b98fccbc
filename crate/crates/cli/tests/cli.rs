use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};
use tropmod::json::{curve_from_json, curve_to_json, witness_from_json};
use tropmod::{Curve, Witness};

fn tropmod(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_tropmod"))
        .args(args)
        .env_remove("TROPMOD_BOUND")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn ok(args: &[&str], stdin: Option<&str>) -> String {
    let out = tropmod(args, stdin);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json_out(args: &[&str], stdin: &str) -> Value {
    serde_json::from_str(&ok(args, Some(stdin))).unwrap()
}

fn loop_curve(len: &str) -> String {
    json!({
        "vertices": [{"id": 0, "weight": 0}],
        "edges": [{"id": 0, "halfedges": [{"v": 0}, {"v": 0}]}],
        "legs": [{"index": 1, "v": 0}],
        "lengths": [{"edge": 0, "len": len}]
    })
    .to_string()
}

fn tripod() -> String {
    json!({
        "vertices": [{"id": 0, "weight": 0}],
        "legs": [{"index": 1, "v": 0}, {"index": 2, "v": 0}, {"index": 3, "v": 0}],
        "lengths": []
    })
    .to_string()
}

/// Genus 1 with two legs: a loop at one vertex, joined by an edge to the
/// vertex carrying both legs.
fn lollipop() -> String {
    json!({
        "vertices": [{"id": 0, "weight": 0}, {"id": 1, "weight": 0}],
        "edges": [{"id": 0, "halfedges": [{"v": 0}, {"v": 0}]}, {"id": 1, "halfedges": [{"v": 0}, {"v": 1}]}],
        "legs": [{"index": 1, "v": 1}, {"index": 2, "v": 1}],
        "lengths": [{"edge": 0, "len": "3/2"}, {"edge": 1, "len": "inf"}]
    })
    .to_string()
}

fn data_rows(csv: &str) -> usize {
    csv.lines().count() - 1
}

#[test]
fn enumerate_row_counts() {
    assert_eq!(data_rows(&ok(&["enumerate", "--g", "1", "--n", "1", "--format", "csv"], None)), 2);
    assert_eq!(data_rows(&ok(&["enumerate", "--g", "0", "--n", "3", "--format", "csv"], None)), 1);
    assert_eq!(data_rows(&ok(&["enumerate", "--g", "2", "--n", "0", "--format", "csv"], None)), 7);
    let manifest: Value = serde_json::from_str(&ok(&["enumerate", "--g", "0", "--n", "3"], None)).unwrap();
    assert_eq!(manifest["strata"].as_array().unwrap().len(), 1);
}

#[test]
fn golden_outputs() {
    assert_eq!(ok(&["enumerate", "--g", "1", "--n", "1"], None), include_str!("golden/enumerate_1_1.json"));
    assert_eq!(ok(&["enumerate", "--g", "2", "--n", "0", "--format", "csv"], None), include_str!("golden/enumerate_2_0.csv"));
    assert_eq!(ok(&["poset", "--g", "0", "--n", "4"], None), include_str!("golden/poset_0_4.dot"));
}

#[test]
fn output_is_deterministic() {
    let args = ["enumerate", "--g", "1", "--n", "2", "--format", "json"];
    assert_eq!(ok(&args, None), ok(&args, None));
    let args = ["map", "section", "--i", "2"];
    assert_eq!(ok(&args, Some(&lollipop())), ok(&args, Some(&lollipop())));
}

#[test]
fn poset_shapes() {
    let count = |dot: &str, pat: &str| dot.lines().filter(|l| l.contains(pat)).count();
    for (g, n, nodes, arrows) in [("1", "1", 2, 1), ("0", "4", 4, 3), ("0", "3", 1, 0)] {
        let dot = ok(&["poset", "--g", g, "--n", n], None);
        assert_eq!(count(&dot, "[label=\"dim:"), nodes, "{dot}");
        assert_eq!(count(&dot, "->"), arrows, "{dot}");
    }
    let dot = ok(&["poset", "--g", "2", "--n", "0"], None);
    assert!(dot.contains("[label=\"dim:3 order:6\"]"));
}

#[test]
fn section_then_forget_is_identity() {
    let input = lollipop();
    let canon = curve_to_json(&curve_from_json::<tropmod::Rational>(&serde_json::from_str(&input).unwrap()).unwrap().canonical().0);
    let canon_text = serde_json::to_string_pretty(&canon).unwrap() + "\n";
    for i in ["1", "2"] {
        let s = ok(&["map", "section", "--i", i], Some(&input));
        let back = ok(&["map", "forget"], Some(&s));
        assert_eq!(back, canon_text);
    }
}

#[test]
fn forget_with_point() {
    let out = json_out(&["map", "forget", "--with-point"], &lollipop());
    assert_eq!(out["point"], json!({"leg": 1, "distance": "inf"}));
    let base: Curve = curve_from_json(&out["curve"]).unwrap();
    assert_eq!(base.num_legs(), 1);
    assert_eq!(base.lengths().len(), 1);
}

#[test]
fn glue_xy_sums() {
    let out = json_out(&["map", "glue-xy", "--x", "2", "--y", "3"], &tripod());
    assert_eq!(out["lengths"][0]["len"], "5/1");
    let out = json_out(&["map", "glue"], &tripod());
    assert_eq!(out["lengths"][0]["len"], "inf");
}

#[test]
fn clutch_variants() {
    let pair = format!("[{}, {}]", loop_curve("1"), loop_curve("2"));
    let out = json_out(&["map", "clutch-xy", "--x", "1/2", "--y", "3/2"], &pair);
    let c: Curve = curve_from_json(&out).unwrap();
    assert_eq!(c.genus().unwrap(), 2);
    assert!(c.lengths().iter().any(|l| l.to_text() == "2/1"));
    let out = json_out(&["map", "clutch"], &pair);
    assert_eq!(curve_from_json::<tropmod::Rational>(&out).unwrap().infinite_part().0.len(), 1);
}

#[test]
fn cover_boundary_round_trips() {
    let out = json_out(&["map", "cover-boundary"], &loop_curve("inf"));
    assert_eq!(out["kind"], "glue");
    let w: Witness = witness_from_json(&out).unwrap();
    let input: Curve = curve_from_json(&serde_json::from_str(&loop_curve("inf")).unwrap()).unwrap();
    assert_eq!(w.apply().unwrap().canonical_form(), input.canonical_form());

    let out = json_out(&["map", "cover-boundary"], &lollipop());
    assert_eq!(out["kind"], "clutch");
    let w: Witness = witness_from_json(&out).unwrap();
    let input: Curve = curve_from_json(&serde_json::from_str(&lollipop()).unwrap()).unwrap();
    assert_eq!(w.apply().unwrap().canonical_form(), input.canonical_form());
}

#[test]
fn quotient_folds_the_loop() {
    let out = json_out(&["map", "quotient"], &loop_curve("5/2"));
    assert_eq!(out["edges"][0]["len"], "5/4");
    assert_eq!(out["edges"][0]["folded"], true);
    assert_eq!(out["total_length"], "5/4");
}

#[test]
fn map_outputs_reparse() {
    for (args, input) in [
        (vec!["map", "forget"], lollipop()),
        (vec!["map", "section", "--i", "1"], lollipop()),
        (vec!["map", "glue"], lollipop()),
        (vec!["map", "glue-xy", "--x", "inf", "--y", "1"], tripod()),
    ] {
        let out = json_out(&args, &input);
        let c: Curve = curve_from_json(&out).unwrap();
        assert!(c.is_stable());
        assert_eq!(curve_to_json(&c), out);
    }
}

#[test]
fn verify_examples() {
    let out = ok(&["verify", "--g", "1", "--n", "1", "--suite", "all"], None);
    assert!(out.trim_end().ends_with("pass (1, 1)"), "{out}");
    let out = ok(&["verify", "--g", "2", "--n", "0", "--suite", "boundary"], None);
    assert!(out.contains("boundary/cover_round_trip (6 checked)"), "{out}");

    let out = tropmod(&["verify", "--g", "0", "--n", "2"], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("2g−2+n ≤ 0"));
}

#[test]
fn verify_bound() {
    let out = tropmod(&["verify", "--g", "0", "--n", "8", "--suite", "poset"], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--bound"));
    let out = tropmod(&["verify", "--g", "1", "--n", "2", "--bound", "1"], None);
    assert_eq!(out.status.code(), Some(2));

    let out = Command::new(env!("CARGO_BIN_EXE_tropmod"))
        .args(["verify", "--g", "1", "--n", "2", "--suite", "poset"])
        .env("TROPMOD_BOUND", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_tropmod"))
        .args(["verify", "--g", "1", "--n", "2", "--suite", "poset", "--bound", "2"])
        .env("TROPMOD_BOUND", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn usage_and_schema_errors_exit_two() {
    let cases: [(&[&str], &str); 6] = [
        (&["enumerate", "--g", "1", "--n", "1", "--format", "xml"], ""),
        (&["enumerate", "--g", "0", "--n", "1"], ""),
        (&["map", "forget"], "not json"),
        (&["map", "forget"], r#"{"vertices": [{"id": 0, "weight": 1, "extra": 1}]}"#),
        (&["map", "section", "--i", "3"], &lollipop()),
        (&["map", "cover-boundary"], &tripod()),
    ];
    for (args, input) in cases {
        let out = tropmod(args, Some(input));
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("tropmod-out-{}.dot", std::process::id()));
    let printed = ok(&["poset", "--g", "1", "--n", "1"], None);
    assert_eq!(ok(&["poset", "--g", "1", "--n", "1", "--out", path.to_str().unwrap()], None), "");
    assert_eq!(std::fs::read_to_string(&path).unwrap(), printed);
    std::fs::remove_file(path).unwrap();
}
