use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/corpus")
        .join(format!("{name}.json"))
}

fn flexcert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flexcert"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = flexcert(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn example4_fails_at_order_two() {
    let v = json(&["--json", "analyze-system", path(&corpus("example4"))]);
    assert_eq!(v["verdict"], "Rigid");
    assert_eq!(v["certificate"]["kind"], "TStandardFail");
    assert_eq!(v["certificate"]["p"], 2);
    assert_eq!(v["certificate"]["rhs"], serde_json::json!(["-1", "0", "0"]));
}

#[test]
fn example1_is_flexible() {
    let v = json(&["--json", "analyze-system", path(&corpus("example1"))]);
    assert_eq!(v["verdict"], "Flexible");
    assert_eq!(v["certificate"]["kind"], "Theorem1Flex");
    assert_eq!(v["certificate"]["q"], 2);
    assert_eq!(v["certificate"]["k"], 1);
}

#[test]
fn base_point_off_the_variety_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(corpus("example1"))
        .unwrap()
        .replace(r#"["5", "5", "7"]"#, r#"["5", "5", "8"]"#);
    let file = dir.path().join("off.json");
    std::fs::write(&file, text).unwrap();
    let out = flexcert(&["analyze-system", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("(-15, -3, 1)"), "{err}");
}

#[test]
fn square_has_a_diagonal_witness() {
    let v = json(&[
        "--json",
        "analyze-framework",
        path(&corpus("square")),
        "--auto-pin",
    ]);
    assert_eq!(v["verdict"], "Flexible");
    assert_eq!(v["criterion"]["theorem"], 7);
    let pair = &v["witness"]["pair"];
    let diagonal = (pair[0] == "v1" && pair[1] == "v3") || (pair[0] == "v2" && pair[1] == "v4");
    assert!(diagonal, "{pair}");
}

#[test]
fn reduce_writes_the_quadratic_system() {
    let dir = tempfile::tempdir().unwrap();
    let out_file = dir.path().join("reduced.json");
    let out = flexcert(&[
        "reduce",
        path(&corpus("cubic")),
        "-o",
        out_file.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let written = std::fs::read_to_string(&out_file).unwrap();
    let file = flexcert::format::parse_system(&written).unwrap();
    let (q, map) = file.quadratic();
    assert!(map.is_empty(), "already quadratic");
    assert_eq!(q.variable_count(), 3);
    assert_eq!(q.equation_count(), 2);
    assert_eq!(file.auxiliary.len(), 1);
    assert_eq!(file.auxiliary[0].monomial, vec![2, 0]);
    // x1 x3 - x2^2 and x1^2 - x3 at sample points.
    for (a, b, c) in [(1i64, 2i64, 3i64), (-2, 5, 7), (0, 1, -4)] {
        let x = flexcert::ratlinalg::Vector::from_ints(&[a, b, c]);
        let expect = flexcert::ratlinalg::Vector::from_ints(&[a * c - b * b, a * a - c]);
        assert_eq!(q.evaluate(&x).unwrap(), expect);
    }
    assert_eq!(
        file.base_point,
        Some(flexcert::ratlinalg::Vector::from_ints(&[0, 0, 0]))
    );
    // The reduced file analyzes like the original.
    let a = json(&["--json", "analyze-system", out_file.to_str().unwrap()]);
    let b = json(&["--json", "analyze-system", path(&corpus("cubic"))]);
    assert_eq!(a["verdict"], b["verdict"]);
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    for args in [
        vec!["--json", "analyze-system"],
        vec!["--json", "analyze-framework", "--auto-pin"],
    ] {
        let name = if args[1] == "analyze-system" {
            "example1"
        } else {
            "square"
        };
        let file = corpus(name);
        let mut full = args.clone();
        full.push(path(&file));
        let a = flexcert(&full);
        let b = flexcert(&full);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn malformed_input_exits_2_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.json");
    std::fs::write(
        &file,
        "{\n  \"variables\": [\"x\"],\n  \"equations\": [ {\"alpha\": 3} ]\n}\n",
    )
    .unwrap();
    let out = flexcert(&["analyze-system", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3"), "{err}");

    std::fs::write(&file, "{ not json").unwrap();
    assert_eq!(
        flexcert(&["analyze-system", file.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn framework_without_bars_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("empty.json");
    std::fs::write(
        &file,
        r#"{"dimension": 2, "joints": [{"id": "a", "coords": ["0", "0"]}, {"id": "b", "coords": ["1", "0"]}], "bars": []}"#,
    )
    .unwrap();
    let out = flexcert(&["analyze-framework", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bar"));
}

#[test]
fn human_and_json_verdicts_agree() {
    for name in ["example1", "example3", "example4"] {
        let file = corpus(name);
        let v = json(&["--json", "analyze-system", path(&file)]);
        let out = flexcert(&["analyze-system", path(&file)]);
        let text = String::from_utf8_lossy(&out.stdout);
        let line = format!("verdict: {}", v["verdict"].as_str().unwrap());
        assert!(text.lines().any(|l| l == line), "{name}: {text}");
    }
}

#[test]
fn extend_prints_normalized_circle_series() {
    let v = json(&["--json", "extend", path(&corpus("circle")), "--degree", "4"]);
    assert_eq!(v["mode"], "normalized");
    let c = &v["series"]["coefficients"];
    assert_eq!(c[2], serde_json::json!(["-1/2", "0"]));
    assert_eq!(c[3], serde_json::json!(["0", "0"]));
    assert_eq!(c[4], serde_json::json!(["-1/8", "0"]));
}

#[test]
fn caps_are_validated() {
    let out = flexcert(&["--q-max", "0", "analyze-system", path(&corpus("example1"))]);
    assert_eq!(out.status.code(), Some(2));
}
