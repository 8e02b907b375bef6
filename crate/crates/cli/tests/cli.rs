//! End-to-end checks of the binary: output surfaces, exit codes, round-trips.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn fusionlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fusionlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

const Z2_DOC: &str = r#"{
    "irreducibles": ["e", "g"],
    "unit": "e",
    "conjugate": {"e": "e", "g": "g"},
    "dim": {"e": "1", "g": "1"},
    "product": {
        "e,e": {"e": 1}, "e,g": {"g": 1},
        "g,e": {"g": 1}, "g,g": {"e": 1}
    }
}"#;

#[test]
fn table_shows_closed_forms() {
    let out = fusionlab(&["table", "--q", "0.5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("3.75"), "{text}");
    assert!(text.contains("0.9375"), "{text}");
    assert!(text.contains("0.428571428571"), "{text}");
    // The free unitary row shows its rate and dashes elsewhere.
    assert!(text.contains("R(U_F+)"), "{text}");
    assert!(text.contains("10.5199700847"), "{text}");
}

#[test]
fn table_from_family_size() {
    // Free orthogonal at N = 3: Kaz = 1 - 2/3.
    let out = fusionlab(&["table", "--N", "3", "--model", "su"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("0.333333333333"), "{text}");
}

#[test]
fn contradictory_parameters_are_usage_errors() {
    let out = fusionlab(&["table", "--q", "0.5", "--N", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = fusionlab(&["table", "--N", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = fusionlab(&["table"]);
    assert_eq!(out.status.code(), Some(2));
    let out = fusionlab(&["table", "--q", "1.5"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn folner_csv_has_documented_columns() {
    let out = fusionlab(&[
        "folner",
        "--model",
        "su",
        "--q",
        "0.5",
        "--strategy",
        "intervals",
        "--max",
        "40",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "radius,size,boundary_size,inner_boundary_size,outer_ratio,inner_ratio"
    );
    let last = text.lines().last().unwrap();
    let fields: Vec<&str> = last.split(',').collect();
    let inner: f64 = fields[5].parse().unwrap();
    let outer: f64 = fields[4].parse().unwrap();
    assert!((inner - 0.75).abs() < 1e-9);
    assert!((outer - 3.75).abs() < 1e-9);
}

#[test]
fn growth_csv_has_documented_columns() {
    let out = fusionlab(&[
        "growth", "--model", "so", "--q", "0.5", "--depth", "20", "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("n,ball_size,sphere_size,nth_root,ratio\n"));
    assert_eq!(text.lines().count(), 21);
}

#[test]
fn growth_handles_finite_custom_models() {
    let path = std::env::temp_dir().join("fusionlab_z2.json");
    fs::write(&path, Z2_DOC).unwrap();
    let out = fusionlab(&[
        "growth",
        "--model",
        "custom",
        "--file",
        path.to_str().unwrap(),
        "--depth",
        "12",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("estimate 1 (method finite"), "{text}");
}

#[test]
fn kazhdan_trace_columns() {
    let out = fusionlab(&[
        "kazhdan", "--model", "so", "--q", "0.5", "--depth", "400", "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("N,estimate,closed_form,gap\n"));
    let last = text.lines().last().unwrap();
    let est: f64 = last.split(',').nth(1).unwrap().parse().unwrap();
    assert!((est - 3.0 / 7.0).abs() < 0.01, "{est}");
}

#[test]
fn lie_table_lists_exact_fractions() {
    let out = fusionlab(&["lie", "--type", "E7", "--q", "0.9"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("27/2"), "{text}");
    assert!(text.contains("exponent 54"), "{text}");
    // Same through the split type/rank spelling.
    let out2 = fusionlab(&["lie", "--type", "E", "--rank", "7", "--q", "0.9"]);
    assert_eq!(stdout(&out2), text);
    // Conflicting rank spellings are refused.
    let out = fusionlab(&["lie", "--type", "E7", "--rank", "6"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn uf_reports_root_and_bracket() {
    let out = fusionlab(&["uf", "--q", "0.5", "--depth", "30", "--exact"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("10.5199700847"), "{text}");
    assert!(text.contains("lower bound 10.25"), "{text}");
    assert!(text.contains("exact series cross-check: ok"), "{text}");
}

#[test]
fn validate_accepts_and_rejects() {
    let dir = std::env::temp_dir();
    let good = dir.join("fusionlab_good.json");
    fs::write(&good, Z2_DOC).unwrap();
    let out = fusionlab(&["validate", good.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("valid"));

    let bad = dir.join("fusionlab_bad.json");
    fs::write(
        &bad,
        Z2_DOC.replace(r#""g,g": {"e": 1}"#, r#""g,g": {"g": 1}"#),
    )
    .unwrap();
    let out = fusionlab(&["validate", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn structured_output_round_trips() {
    for args in [
        vec!["uf", "--q", "0.5", "--depth", "8", "--format", "structured"],
        vec!["table", "--q", "0.5", "--format", "structured"],
        vec![
            "lie",
            "--type",
            "G2",
            "--q",
            "0.5",
            "--format",
            "structured",
        ],
        vec![
            "kazhdan",
            "--model",
            "su",
            "--q",
            "0.5",
            "--depth",
            "100",
            "--format",
            "structured",
        ],
    ] {
        let out = fusionlab(&args);
        assert!(out.status.success(), "{args:?}");
        let text = stdout(&out);
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        let mut rendered = serde_json::to_string_pretty(&value).unwrap();
        rendered.push('\n');
        assert_eq!(rendered, text, "round trip for {args:?}");
    }
}

#[test]
fn out_flag_writes_files() {
    let path = std::env::temp_dir().join("fusionlab_out.csv");
    let out = fusionlab(&[
        "growth",
        "--model",
        "su",
        "--q",
        "0.5",
        "--depth",
        "15",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).is_empty());
    let written = fs::read_to_string(Path::new(&path)).unwrap();
    assert!(written.starts_with("n,ball_size,sphere_size,nth_root,ratio\n"));
}

#[test]
fn q_from_matrix_file() {
    let path = std::env::temp_dir().join("fusionlab_f.json");
    let s = 2f64.sqrt();
    fs::write(&path, format!("[[{s}, 0], [0, {}]]", 1.0 / s)).unwrap();
    let out = fusionlab(&["uf", "--f-file", path.to_str().unwrap(), "--depth", "5"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("10.5199700847"));

    // An unnormalised matrix is rejected with advice.
    fs::write(&path, "[[2, 0], [0, 1]]").unwrap();
    let out = fusionlab(&["uf", "--f-file", path.to_str().unwrap(), "--depth", "5"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("rescale"), "{err}");
}

#[test]
fn thread_cap_is_respected() {
    let out = Command::new(env!("CARGO_BIN_EXE_fusionlab"))
        .env("FUSIONLAB_THREADS", "1")
        .args([
            "growth", "--model", "su", "--q", "0.5", "--depth", "15", "--format", "csv",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
}
