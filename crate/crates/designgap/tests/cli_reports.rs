//! Integration tests for the command-line surface: exit codes, report
//! determinism, CSV/JSON shape, and the shipped JSON schema.

use std::collections::BTreeMap;
use std::process::Command;

fn designgap(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_designgap"))
        .args(args)
        .env_remove("DESIGNGAP_SEED")
        .output()
        .expect("binary runs")
}

#[test]
fn gadget_table_exits_zero_with_csv() {
    let out = designgap(&["gadget-table"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "gate,kx,ky,kz,a,b,c,l1,l2,l3,l4,gap"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#') && !l.is_empty()).count(), 9);
}

#[test]
fn unknown_gate_is_a_validation_error() {
    let out = designgap(&["gadget-table", "--gates", "XSWAP"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oversized_graph_is_a_validation_error() {
    let out = designgap(&["graph-gaps", "--n", "20", "--gates", "ISWAP"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn assertion_failure_exits_three() {
    // an absurd tolerance override forces the pinned-value check to fail
    let out = designgap(&["gadget-table", "--tol", "gadget-table=1e-18"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let args = ["graph-gaps", "--gates", "ISWAP;CHI", "--graphs", "complete,ring", "--n", "4..5", "--seed", "7"];
    let a = designgap(&args);
    let b = designgap(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), Some(0));
}

#[test]
fn seed_env_fallback() {
    let with_flag = designgap(&["haar-baseline", "--n", "1", "--t", "1", "--samples", "5", "--seed", "99"]);
    let with_env = Command::new(env!("CARGO_BIN_EXE_designgap"))
        .args(["haar-baseline", "--n", "1", "--t", "1", "--samples", "5"])
        .env("DESIGNGAP_SEED", "99")
        .output()
        .unwrap();
    assert_eq!(with_flag.stdout, with_env.stdout);
}

#[test]
fn custom_graph_file_roundtrip() {
    let dir = std::env::temp_dir().join("designgap-test-graph");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("line4.txt");
    std::fs::write(&path, "n=4\n0 1\n1 2\n2 3\n").unwrap();
    let spec = format!("custom:{}", path.display());
    let out = designgap(&["graph-gaps", "--gates", "ISWAP", "--graphs", &spec, "--n", "4"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("custom:"));
}

/// Minimal structural validation of a JSON report against the shipped
/// schema: required keys present, primitive types as declared.
#[test]
fn json_report_validates_against_shipped_schema() {
    let out = designgap(&["weyl-scan", "--grid", "4", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let schema_text = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/schemas/report.schema.json"
    ))
    .unwrap();
    let schema: serde_json::Value = serde_json::from_str(&schema_text).unwrap();
    let required: Vec<&str> =
        schema["required"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    let obj = report.as_object().unwrap();
    for key in &required {
        assert!(obj.contains_key(*key), "missing required key {key}");
    }
    // no extra keys beyond the schema's properties
    let props: BTreeMap<String, &serde_json::Value> = schema["properties"]
        .as_object()
        .unwrap()
        .iter()
        .map(|(k, v)| (k.clone(), v))
        .collect();
    for key in obj.keys() {
        assert!(props.contains_key(key), "unexpected key {key}");
    }
    // type checks per the schema's type declarations
    for (key, prop) in &props {
        let Some(value) = obj.get(key) else { continue };
        match prop["type"].as_str().unwrap() {
            "string" => assert!(value.is_string(), "{key} should be a string"),
            "integer" => assert!(value.is_u64() || value.is_i64(), "{key} should be an integer"),
            "object" => assert!(value.is_object(), "{key} should be an object"),
            "array" => assert!(value.is_array(), "{key} should be an array"),
            other => panic!("unhandled schema type {other}"),
        }
    }
    // rows are arrays of strings matching the column count
    let cols = report["columns"].as_array().unwrap().len();
    for row in report["rows"].as_array().unwrap() {
        assert_eq!(row.as_array().unwrap().len(), cols);
        assert!(row.as_array().unwrap().iter().all(|v| v.is_string()));
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join("designgap-test-out");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("table.csv");
    let out = designgap(&["gadget-table", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("ISWAP"));
}

#[test]
fn clifford_phase_optimum_json() {
    let out = designgap(&["clifford-phase", "--mode", "optimum", "--c", "-1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let gap: f64 = report["rows"][0][1].as_str().unwrap().parse().unwrap();
    assert!((gap - 0.0221405).abs() < 1e-6);
}
