use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use catmap::export::read_matrix_binary;
use serde_json::Value;

fn titanic() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/titanic.csv")
}

fn catmap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_catmap")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> Vec<u8> {
    let out = catmap(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn input() -> String {
    titanic().to_string_lossy().into_owned()
}

#[test]
fn project_writes_layout_json() {
    let v: Value = serde_json::from_slice(&ok(&["project", "--input", &input(), "--distance", "overlap", "--method", "mds"])).unwrap();
    assert_eq!(v["points"].as_array().unwrap().len(), 24);
    assert_eq!(v["overlapReduced"], true);
    let raw: Value = serde_json::from_slice(&ok(&["project", "--input", &input(), "--overlap-reduction", "false"])).unwrap();
    assert_eq!(raw["overlapReduced"], false);
    assert!(raw["preOverlap"].is_null());
}

#[test]
fn tessellate_reads_a_layout() {
    let dir = tempfile::tempdir().unwrap();
    let layout = dir.path().join("layout.json");
    ok(&["project", "--input", &input(), "--output", layout.to_str().unwrap()]);
    let v: Value = serde_json::from_slice(&ok(&["tessellate", "--input", layout.to_str().unwrap()])).unwrap();
    assert_eq!(v["cells"].as_array().unwrap().len(), 24);
    let n = 24;
    let h = v["hull"].as_array().unwrap().len();
    assert_eq!(v["edges"].as_array().unwrap().len(), 3 * n - 3 - h);
}

#[test]
fn fracturedness_report() {
    let v: Value = serde_json::from_slice(&ok(&["fracturedness", "--input", &input()])).unwrap();
    assert_eq!(v["rankingEdge"], serde_json::json!(["Sex", "Survived", "Age", "Class"]));
    let class = &v["attributes"][0];
    let parts: Vec<u64> = class["fEdgeExact"].as_str().unwrap().split('/').map(|x| x.parse().unwrap()).collect();
    assert!((class["fEdge"].as_f64().unwrap() - parts[0] as f64 / parts[1] as f64).abs() < 1e-15);
}

#[test]
fn metrics_table_has_three_rows() {
    let csv = String::from_utf8(ok(&["metrics", "--input", &input(), "--configs", "mds:overlap,mds:jaccard,mca"])).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0], "method,measure,TW,CT,SC,NS,Avg NH,Med NH");
    assert!(lines[3].starts_with("mca,overlap,"));
    let md = String::from_utf8(ok(&["metrics", "--input", &input(), "--format", "markdown", "--k", "5"])).unwrap();
    assert_eq!(md.lines().count(), 5);
}

#[test]
fn render_svg() {
    let svg = String::from_utf8(ok(&[
        "render", "--input", &input(), "--attribute", "Class", "--secondary-attribute", "Survived", "--glyph", "bar_square",
    ]))
    .unwrap();
    assert!(svg.contains("class=\"outline\""));
    assert_eq!(svg.matches("id=\"cell-").count(), 24);
}

#[test]
fn matrix_exports() {
    let csv = String::from_utf8(ok(&["matrix", "--input", &input(), "--distance", "manhattan_onehot"])).unwrap();
    assert_eq!(csv.lines().count(), 24);
    assert!(csv.lines().all(|l| l.split(',').count() == 24));
    let bin = ok(&["matrix", "--input", &input(), "--format", "binary"]);
    let (n, values) = read_matrix_binary(&bin).unwrap();
    assert_eq!(n, 24);
    assert!(values.iter().all(|v| (0.0..=1.0).contains(v)));
}

#[test]
fn seeds_are_reproducible() {
    let a = ok(&["project", "--input", &input(), "--seed", "5", "--distance", "jaccard"]);
    let b = ok(&["project", "--input", &input(), "--seed", "5", "--distance", "jaccard"]);
    assert_eq!(a, b);
}

#[test]
fn usage_errors_exit_two() {
    for args in [&["project", "--bogus"][..], &["frobnicate"], &["project", "--distance", "cosine"], &[]] {
        let out = catmap(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert!(err.starts_with("error: usage: "), "{err}");
    }
}

#[test]
fn data_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let ragged = dir.path().join("ragged.csv");
    std::fs::write(&ragged, "a,b\nx,y\nz\n").unwrap();
    let titanic = input();
    let cases = [
        (vec!["project", "--input", ragged.to_str().unwrap()], "ragged-row"),
        (vec!["project", "--input", "/does/not/exist.csv"], "io"),
        (vec!["render", "--input", &titanic, "--attribute", "Colour"], "unknown-attribute"),
        (vec!["metrics", "--input", &titanic, "--k", "30"], "k-too-large"),
        (vec!["metrics", "--input", &titanic, "--configs", "tsne"], "invalid-parameter"),
    ];
    for (args, code) in cases {
        let out = catmap(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert!(err.starts_with(&format!("error: {code}: ")), "{err}");
    }
}

#[test]
fn stdin_input_and_delimiter() {
    use std::io::Write;
    let mut child = Command::new(env!("CARGO_BIN_EXE_catmap"))
        .args(["project", "--input", "-", "--delimiter", ";"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"a;b\nx;y\nx;z\nw;z\nw;y\n").unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["points"].as_array().unwrap().len(), 4);
}
