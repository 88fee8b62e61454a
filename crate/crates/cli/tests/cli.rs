//! End-to-end contract tests for the binary: exit codes, document
//! round-trips, and output determinism.

use std::path::Path;
use std::process::{Command, Output};

use cogredient_cli::{cmd_classify, cmd_random, cmd_reduce, Entry, MatrixDocument};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cogredient"))
}

fn write_doc(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

#[test]
fn classify_happy_path_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_doc(
        dir.path(),
        "h2.json",
        r#"{"ring":"zmod:5","n":2,"entries":[[0,1],[1,0]]}"#,
    );
    let out = run(&["classify", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["form"]["nu"], 1);
    assert_eq!(doc["form"]["delta"], 0);
    assert_eq!(doc["form"]["delta_kind"], "NONE");
    assert!(doc.get("witness").is_none());
}

#[test]
fn parse_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("garbage.json", "not json"),
        ("badring.json", r#"{"ring":"zmod:9","n":1,"entries":[[1]]}"#),
        ("evenring.json", r#"{"ring":"zmod:2^3","n":1,"entries":[[1]]}"#),
        ("shape.json", r#"{"ring":"zmod:3","n":2,"entries":[[1,0]]}"#),
        ("range.json", r#"{"ring":"zmod:3","n":1,"entries":[[7]]}"#),
        ("entrykind.json", r#"{"ring":"zmod:3","n":1,"entries":[[[1,2]]]}"#),
        ("zerorank.json", r#"{"ring":"zmod:3","n":0,"entries":[]}"#),
    ];
    for (name, text) in cases {
        let input = write_doc(dir.path(), name, text);
        let out = run(&["classify", "--input", input.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{name}: {:?}", out);
    }
    // missing input file
    let out = run(&["classify", "--input", "/nonexistent/x.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_matrices_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let degenerate = write_doc(
        dir.path(),
        "deg.json",
        r#"{"ring":"zmod:3^2","n":2,"entries":[[3,0],[0,1]]}"#,
    );
    let out = run(&["classify", "--input", degenerate.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));

    let asymmetric = write_doc(
        dir.path(),
        "asym.json",
        r#"{"ring":"zmod:3","n":2,"entries":[[1,1],[0,1]]}"#,
    );
    let out = run(&["reduce", "--input", asymmetric.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn budget_exceeded_exits_four() {
    let out = run(&["oracle", "--ring", "zmod:3", "--n", "9"]);
    assert_eq!(out.status.code(), Some(4));
    // tightened budget trips on a case that normally fits
    let out = run(&["oracle", "--ring", "zmod:3", "--n", "2", "--budget", "10"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn ring_flag_must_match_document() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_doc(
        dir.path(),
        "m.json",
        r#"{"ring":"zmod:3","n":1,"entries":[[1]]}"#,
    );
    let ok = run(&[
        "classify",
        "--ring",
        "zmod:3",
        "--input",
        input.to_str().unwrap(),
    ]);
    assert_eq!(ok.status.code(), Some(0));
    let bad = run(&[
        "classify",
        "--ring",
        "zmod:5",
        "--input",
        input.to_str().unwrap(),
    ]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn reduce_verify_and_no_witness_flags() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_doc(
        dir.path(),
        "m.json",
        r#"{"ring":"zmod:3^2","n":2,"entries":[[1,3],[3,2]]}"#,
    );
    let plain = run(&["reduce", "--input", input.to_str().unwrap()]);
    let doc: serde_json::Value = serde_json::from_slice(&plain.stdout).unwrap();
    assert_eq!(doc["verified"], false);
    assert!(doc.get("witness").is_some());
    assert!(doc.get("target").is_some());

    let verified = run(&["reduce", "--verify", "--input", input.to_str().unwrap()]);
    let doc: serde_json::Value = serde_json::from_slice(&verified.stdout).unwrap();
    assert_eq!(doc["verified"], true);

    let bare = run(&[
        "reduce",
        "--verify",
        "--no-witness",
        "--input",
        input.to_str().unwrap(),
    ]);
    let doc: serde_json::Value = serde_json::from_slice(&bare.stdout).unwrap();
    assert!(doc.get("witness").is_none());
    assert!(doc.get("target").is_some());
}

#[test]
fn canonical_input_reduces_with_identity_witness() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_doc(
        dir.path(),
        "h2.json",
        r#"{"ring":"zmod:5","n":2,"entries":[[0,1],[1,0]]}"#,
    );
    let out = run(&["reduce", "--verify", "--input", input.to_str().unwrap()]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["witness"], serde_json::json!([[1, 0], [0, 1]]));
    assert_eq!(doc["verified"], true);
}

#[test]
fn document_roundtrip_all_families() {
    // parse(emit(doc)) == doc for seeded random documents of every family
    for ring in ["zmod:3^2", "zmod:7", "gr:3^2:2", "gr:5:2", "trunc:3:2:2"] {
        for n in 1..=3 {
            for doc in cmd_random(ring, n, 42, 5).unwrap() {
                let text = serde_json::to_string(&doc).unwrap();
                let back: MatrixDocument = serde_json::from_str(&text).unwrap();
                assert_eq!(back, doc, "{ring}, n={n}");
                // and the parsed matrix re-emits identically
                let (_, m) = back.to_matrix().unwrap();
                assert_eq!(MatrixDocument::from_matrix(&m), doc, "{ring}, n={n}");
            }
        }
    }
}

#[test]
fn random_outputs_are_valid_and_both_classes_appear() {
    let docs = cmd_random("zmod:3", 2, 7, 100).unwrap();
    assert_eq!(docs.len(), 100);
    let mut kinds = std::collections::BTreeSet::new();
    for doc in &docs {
        let (_, m) = doc.to_matrix().unwrap();
        assert!(m.is_symmetric());
        assert!(m.is_invertible());
        let result = cmd_classify(doc, None).unwrap();
        kinds.insert(result.form.delta_kind.clone());
    }
    // rank 2 over Z_3: both the hyperbolic and diag(1,-z) classes show up
    assert_eq!(kinds.len(), 2);
}

#[test]
fn random_stream_is_deterministic_per_seed() {
    let a = cmd_random("gr:3^2:2", 3, 99, 10).unwrap();
    let b = cmd_random("gr:3^2:2", 3, 99, 10).unwrap();
    assert_eq!(a, b);
    let c = cmd_random("gr:3^2:2", 3, 100, 10).unwrap();
    assert_ne!(a, c);
}

#[test]
fn cli_outputs_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    // det = 1 - x^2 = 2, a unit in GR(9,2) with x^2 = -1
    let input = write_doc(
        dir.path(),
        "m.json",
        r#"{"ring":"gr:3^2:2","n":2,"entries":[[[1,0],[0,1]],[[0,1],[1,0]]]}"#,
    );
    let input = input.to_str().unwrap();
    for args in [
        vec!["classify", "--input", input],
        vec!["reduce", "--verify", "--input", input],
        vec!["oracle", "--ring", "zmod:3", "--n", "2"],
        vec!["random", "--ring", "trunc:3:1:2", "--n", "3", "--seed", "5", "--count", "4"],
    ] {
        let first = run(&args);
        let second = run(&args);
        assert_eq!(first.status.code(), Some(0), "{args:?}");
        assert_eq!(first.stdout, second.stdout, "{args:?}");
    }
}

#[test]
fn selftest_passes() {
    let out = run(&["selftest"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("selftest: PASS"));
}

#[test]
fn entry_shapes_match_families() {
    let (zmod_doc, gr_doc, tr_doc) = (
        cmd_random("zmod:3", 1, 0, 1).unwrap().remove(0),
        cmd_random("gr:3:2", 1, 0, 1).unwrap().remove(0),
        cmd_random("trunc:3:2:2", 1, 0, 1).unwrap().remove(0),
    );
    assert!(matches!(zmod_doc.entries[0][0], Entry::Int(_)));
    assert!(matches!(gr_doc.entries[0][0], Entry::Coeffs(_)));
    assert!(matches!(tr_doc.entries[0][0], Entry::Blocks(_)));
}

#[test]
fn reduce_emits_parseable_witness_and_target() {
    let dir = tempfile::tempdir().unwrap();
    let original = cmd_random("trunc:3:1:2", 3, 31, 1).unwrap().remove(0);
    let input = write_doc(
        dir.path(),
        "m.json",
        &serde_json::to_string(&original).unwrap(),
    );
    let out = run(&["reduce", "--verify", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["verified"], true);

    // re-check the witness identity by hand through the library
    let reduced = cmd_reduce(&original, None, true, true).unwrap();
    let (ctx, s) = original.to_matrix().unwrap();
    let w_doc = MatrixDocument {
        ring: ctx.spec_string().to_string(),
        n: 3,
        entries: reduced.witness.unwrap(),
    };
    let t_doc = MatrixDocument {
        ring: ctx.spec_string().to_string(),
        n: 3,
        entries: reduced.target.unwrap(),
    };
    let (_, w) = w_doc.to_matrix().unwrap();
    let (_, t) = t_doc.to_matrix().unwrap();
    assert_eq!(w.congruence(&s), t);
}
