//! Behavioral tests for the binary: exit codes, report shapes, determinism,
//! and the document round-trip contract.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn sievekit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sievekit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 output")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf-8 output")
}

#[test]
fn validate_passes_on_the_pointed_two_document() {
    let out = sievekit(&["validate", fixture("pt.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("validate category: ok"));
    assert!(text.contains("validate topology `J`: ok"));
}

#[test]
fn validate_reports_law_violations_with_exit_one() {
    let out = sievekit(&["validate", fixture("broken.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("no composite declared for s∘s"));
}

#[test]
fn other_commands_reject_a_lawless_category_as_input() {
    let out = sievekit(&["sieves", "*", fixture("broken.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("/category"));
}

#[test]
fn sieves_are_listed_in_canonical_order() {
    let out = sievekit(&["sieves", "1", fixture("b2.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let expected = "\
sieves on 1: 6
  []
  [0->1]
  [0->1, a->1]
  [0->1, b->1]
  [0->1, a->1, b->1]
  [0->1, 1->1, a->1, b->1]
";
    assert_eq!(stdout(&out), expected);
}

#[test]
fn closure_uses_generator_syntax() {
    let out = sievekit(&["closure", "p0", fixture("pt.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "closure of [e0, p0] on C under `J`: {p0, p1}\n"
    );
}

#[test]
fn empty_sieve_closure_needs_an_object() {
    let path = fixture("pt.json");
    let out = sievekit(&["closure", "C:", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "closure of [] on C under `J`: {}\n");

    let out = sievekit(&["closure", "", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn convergence_answers_are_not_failures() {
    let path = fixture("b2.json");
    let out = sievekit(&["converge", "covering", "1->1", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("converges"));

    // A negative answer is still exit 0: the check ran fine.
    let out = sievekit(&["converge", "tooFine", "1->1", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("converges"), "{text}");
}

#[test]
fn audits_pass_on_fixture_documents() {
    for (id, object, path) in [
        ("4.3", "C", "pt.json"),
        ("4.5", "C", "pt.json"),
        ("4.6", "C", "pt.json"),
        ("4.5", "1", "b2.json"),
        ("4.6", "1", "b2.json"),
        ("prime", "1", "b2.json"),
        ("corollary", "Y", "pp.json"),
    ] {
        let out = sievekit(&["audit", id, object, fixture(path).to_str().unwrap()]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "audit {id} on {object} in {path}"
        );
        assert!(stdout(&out).contains("pass"));
    }
}

#[test]
fn unknown_audit_id_is_an_input_error() {
    let out = sievekit(&["audit", "9.9", "C", fixture("pt.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unknown audit"));
}

#[test]
fn frame_preset_rejects_the_pentagon() {
    let out = sievekit(&["validate", fixture("n5_frame.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("distributivity fails"));
}

#[test]
fn declared_sieves_must_be_closed() {
    let out = sievekit(&["validate", fixture("bad_sieve.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("/filters/notASieve/C/0"), "{err}");
    assert!(err.contains("not a sieve"), "{err}");
}

#[test]
fn malformed_json_is_an_input_error() {
    let dir = std::env::temp_dir().join("sievekit-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("garbage.json");
    std::fs::write(&path, "{ not json").unwrap();
    let out = sievekit(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exec_runs_the_whole_query_list() {
    let out = sievekit(&["exec", fixture("pt.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("validate category: ok"));
    assert!(text.contains("sieves on C: 5"));
    assert!(text.contains("closure of [e0, p0] on C under `J`: {p0, p1}"));
    assert!(text.contains("audit 4.5 on C under `J`: pass"));
}

#[test]
fn json_reports_embed_witnesses_in_document_vocabulary() {
    let out = sievekit(&[
        "--format",
        "json",
        "pullback",
        "p0",
        "e0,e1,p0,p1",
        fixture("pt.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let report = &value["reports"][0];
    assert_eq!(report["kind"], "pullback");
    assert_eq!(report["result"], serde_json::json!(["c", "id_T"]));
}

#[test]
fn level_flag_controls_topology_validation() {
    // The fixture's topology is fully valid, so both levels pass; this pins
    // the flag's plumbing rather than a difference in verdict.
    for level in ["basic", "full"] {
        let out = sievekit(&[
            "--level",
            level,
            "validate",
            fixture("pt.json").to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
}

#[test]
fn guard_flag_limits_enumeration() {
    let out = sievekit(&[
        "--guard",
        "3",
        "sieves",
        "1",
        fixture("b2.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("guard"));
}

fn write_temp(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("sievekit-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn poset_and_monoid_presets_expand() {
    let poset = write_temp(
        "chain.json",
        r#"{
  "category": {
    "preset": "poset",
    "elements": ["0", "1"],
    "le": [["0", "0"], ["0", "1"], ["1", "1"]]
  }
}"#,
    );
    let out = sievekit(&["sieves", "1", poset.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("sieves on 1: 3"));

    let monoid = write_temp("monoid.json", r#"{ "category": { "preset": "monoid" } }"#);
    let out = sievekit(&["sieves", "*", monoid.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("sieves on *: 3"));

    let unknown = write_temp("unknown.json", r#"{ "category": { "preset": "torus" } }"#);
    let out = sievekit(&["validate", unknown.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unknown preset"));
}

#[test]
fn frame_preset_provides_the_canonical_topology() {
    let out = sievekit(&[
        "converge",
        "covering",
        "1->1",
        fixture("b2.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("under `canonical`"));
}

#[test]
fn filter_gen_and_ultra_print_assignments() {
    let path = fixture("pt.json");
    let out = sievekit(&["filter", "gen", "genp0", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("filter generated from base `genp0`"));
    assert!(text.contains("C: {[e0, p0], [e0, e1, p0, p1], [e0, e1, id_C, p0, p1]}"));

    let out = sievekit(&["ultra", "triv", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("ultrafilter extending `triv`"));
}

#[test]
fn queries_must_reference_declared_names() {
    let doc = write_temp(
        "ghost_query.json",
        r#"{
  "category": { "preset": "pointed-two" },
  "topologies": { "J": { "C": [["e0", "e1", "id_C", "p0", "p1"]] } },
  "queries": [ { "op": "ultra", "name": "ghost" } ]
}"#,
    );
    let out = sievekit(&["exec", doc.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("/queries/0"));
}

#[test]
fn canonicalized_documents_round_trip_byte_identically() {
    for name in ["pt.json", "b2.json", "pp.json"] {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        let doc = sievekit_cli::document::parse_document(&text).unwrap();
        let canonical = sievekit_cli::document::canonical_json(&doc);
        let reparsed = sievekit_cli::document::parse_document(&canonical).unwrap();
        assert_eq!(
            canonical,
            sievekit_cli::document::canonical_json(&reparsed),
            "round-trip of {name}"
        );
    }
}
