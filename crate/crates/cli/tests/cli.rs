use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name)
}

fn ifk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ifk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn demo() -> String {
    fixture("demo.json").to_string_lossy().into_owned()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

#[test]
fn validate_ok() {
    let out = ifk(&["validate", &demo()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "{\n  \"ok\": true\n}\n"
    );
}

#[test]
fn validate_reports_defects() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"classifications": {"A": {"instances": ["a"], "types": ["t"], "incidence": [["a", "u"]]}}}"#,
    )
    .unwrap();
    let out = ifk(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["ok"], json!(false));
    assert_eq!(r["defects"].as_array().unwrap().len(), 1);

    std::fs::write(&path, "{\"theories\": [").unwrap();
    let out = ifk(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(report(&out)["defects"][0]
        .as_str()
        .unwrap()
        .contains("line 1"));
}

#[test]
fn seeded_validation_is_repeatable() {
    let a = ifk(&["--seed", "11", "validate", &demo()]);
    let b = ifk(&["validate", &demo(), "--seed", "11"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(report(&a)["self_checks"]["failures"], json!([]));
}

#[test]
fn vee_integration() {
    let out = ifk(&[
        "integrate",
        "--system",
        "vee",
        "--delta-bound",
        "2",
        &demo(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let o2 = r["deltas"]["O2"].as_array().unwrap();
    assert!(o2.contains(&json!({"ant": ["philosopher"], "con": ["mortal_gr"]})));
    assert_eq!(r["deltas"]["O1"], json!([]));
    assert_eq!(r["verdict"], json!("monocosmic"));
}

#[test]
fn vee_report_matches_frozen_fixture() {
    let out = ifk(&[
        "integrate",
        "--system",
        "vee",
        "--delta-bound",
        "1",
        &demo(),
    ]);
    let frozen = std::fs::read(fixture("vee_integrate_d1.json")).unwrap();
    assert_eq!(out.stdout, frozen);
}

#[test]
fn clash_is_polycosmic() {
    let out = ifk(&["consistency", "--system", "clash", &demo()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        report(&out),
        json!({"pointwise": true, "monocosmic": false, "verdict": "polycosmic"})
    );
}

#[test]
fn runs_are_byte_identical() {
    for args in [
        vec!["integrate", "--system", "field"],
        vec!["sum", "--system", "field"],
        vec!["lattice", "--classification", "CLF-A"],
        vec!["close", "--theory", "T-A"],
    ] {
        let mut args = args.clone();
        let d = demo();
        args.push(&d);
        let a = ifk(&args);
        let b = ifk(&args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn lattice_formats() {
    let dot = ifk(&[
        "lattice",
        "--classification",
        "CLF-A",
        "--format",
        "dot",
        &demo(),
    ]);
    let text = String::from_utf8(dot.stdout).unwrap();
    assert!(text.starts_with("digraph lattice {\n"));
    assert_eq!(text.matches(" -> ").count(), 4);
    let json = report(&ifk(&["lattice", "--classification", "CLF-A", &demo()]));
    assert_eq!(json["concepts"].as_array().unwrap().len(), 4);
}

#[test]
fn entails_and_close() {
    let r = report(&ifk(&[
        "entails",
        "--theory",
        "T-A",
        "--sequent",
        "philosopher, car |-",
        &demo(),
    ]));
    assert_eq!(r["entailed"], json!(true));
    let r = report(&ifk(&[
        "entails",
        "--theory",
        "T-A",
        "--sequent",
        "|- car",
        &demo(),
    ]));
    assert_eq!(r["entailed"], json!(false));
    // empty theory on two types: 16 sequents, 9 with disjoint sides
    let r = report(&ifk(&["close", "--theory", "vee-M", &demo()]));
    assert_eq!(r["count"], json!(7));
}

#[test]
fn sum_of_populated_system() {
    let r = report(&ifk(&["sum", "--system", "field", &demo()]));
    assert_eq!(r["core"]["instances"].as_array().unwrap().len(), 3);
    assert_eq!(r["legs"].as_object().unwrap().len(), 3);
    let out = ifk(&["sum", "--system", "vee", &demo()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = ifk(&["--output", path.to_str().unwrap(), "validate", &demo()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(
        std::fs::read_to_string(path).unwrap(),
        "{\n  \"ok\": true\n}\n"
    );
}

#[test]
fn exit_codes() {
    assert_eq!(ifk(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        ifk(&["validate", "/no/such/file.json"]).status.code(),
        Some(2)
    );
    assert_eq!(
        ifk(&["close", "--theory", "missing", &demo()])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        ifk(&["entails", "--theory", "T-A", "--sequent", "a b", &demo()])
            .status
            .code(),
        Some(2)
    );
    let capped = ifk(&["close", "--theory", "T-A", "--cap", "10", &demo()]);
    assert_eq!(capped.status.code(), Some(1));
    assert!(String::from_utf8(capped.stderr).unwrap().contains("64"));
}
