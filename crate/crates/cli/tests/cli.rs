use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn config(name: &str) -> String {
    configs().join(format!("{name}.conf")).to_string_lossy().into_owned()
}

fn brst(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_brst")).args(args).output().unwrap()
}

fn json(cmd: &str, name: &str, extra: &[&str]) -> (i32, Value) {
    let cfg = config(name);
    let mut args = vec![cmd, "--config", &cfg, "--output", "json"];
    args.extend_from_slice(extra);
    let out = brst(&args);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{name}: {e}: {}", String::from_utf8_lossy(&out.stderr)));
    (out.status.code().unwrap(), v)
}

fn temp_config(text: &str) -> (tempfile::TempDir, String) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.conf");
    fs::write(&path, text).unwrap();
    (dir, path.to_string_lossy().into_owned())
}

fn schema() -> jsonschema::JSONSchema {
    let text = fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/report.schema.json")).unwrap();
    jsonschema::JSONSchema::compile(&serde_json::from_str(&text).unwrap()).unwrap()
}

fn assert_valid(schema: &jsonschema::JSONSchema, v: &Value, what: &str) {
    if let Err(errors) = schema.validate(v) {
        let msgs: Vec<String> = errors.map(|e| format!("{} at {}", e, e.instance_path)).collect();
        panic!("{what}: {msgs:?}");
    }
}

fn check_status<'a>(v: &'a Value, name: &str) -> Vec<&'a str> {
    v["checks"].as_array().unwrap().iter().filter(|c| c["name"] == name).map(|c| c["status"].as_str().unwrap()).collect()
}

#[test]
fn validate_lists_assumptions_and_passes() {
    let (code, v) = json("validate", "hypertoric_m11", &[]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "pass");
    assert_eq!(check_status(&v, "smoothness"), ["pass"]);
    assert!(!check_status(&v, "assumption").is_empty());
    assert!(check_status(&v, "assumption").iter().all(|s| *s == "assumed"));
}

#[test]
fn zero_theta_fails_smoothness_with_empty_witness() {
    let (code, v) = json("validate", "nonsmooth_m1", &[]);
    assert_eq!(code, 2);
    assert_eq!(v["verdict"], "validation-failure");
    let c = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == "smoothness").unwrap();
    assert_eq!(c["status"], "fail");
    assert!(c["detail"].as_str().unwrap().ends_with("J = {}"));
}

#[test]
fn parse_errors_carry_line_and_column() {
    let (_d, path) = temp_config("[setup]\nkind = hypertoric\nmatrix = [[1]]\ntheta = [1]\nc = [1/0]\n");
    let out = brst(&["validate", "--config", &path]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains(&format!("{path}:5:6")), "{err}");
}

#[test]
fn config_errors_exit_three() {
    let (_d, path) = temp_config("[setup]\nkind = hypertoric\nmatrix = [[1]]\ntheta = [1]\nc = [1/3]\ncolour = red\n");
    let out = brst(&["validate", "--config", &path]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains(":6:1"));

    let m1 = config("hypertoric_m1");
    assert_eq!(brst(&["verify", "--config", &m1, "--max-degree", "3"]).status.code(), Some(3));
    assert_eq!(brst(&["brst", "--config", &m1, "--weights", "[[0, 1]]"]).status.code(), Some(3));
    assert_eq!(brst(&["verify", "--config", "/nonexistent.conf"]).status.code(), Some(3));
    assert_eq!(brst(&["verify"]).status.code(), Some(3));
}

#[test]
fn affine_a1_hilbert_row() {
    let (code, v) = json("flatness", "preprojective_a1", &[]);
    assert_eq!(code, 0);
    let row: Vec<i64> = v["hilbert"]["computed"].as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect();
    assert_eq!(row, [1, 4, 9, 16, 25, 36, 49, 64, 81]);
    assert_eq!(v["hilbert"]["first_failure"], Value::Null);
    assert!(v["hilbert"]["dimension_target"].is_i64());
}

#[test]
fn negative_fixture_exits_one() {
    let (code, v) = json("flatness", "negative_square", &[]);
    assert_eq!(code, 1);
    assert_eq!(v["verdict"], "mismatch");
    assert_eq!(v["hilbert"]["first_failure"], 4);
}

#[test]
fn a3_prediction() {
    for name in ["family_a3", "preprojective_a3"] {
        let (code, v) = json("predict", name, &[]);
        assert_eq!(code, 0, "{name}");
        assert_eq!(v["predicted"][0]["coefficients"], serde_json::json!([1, 3, 3, 1]), "{name}");
    }
}

#[test]
fn families_refuse_other_commands() {
    let (code, _) = json("verify", "family_a3", &[]);
    assert_eq!(code, 2);
}

#[test]
fn nonabelian_verify_downgrades_scope() {
    let d4 = fs::read_to_string(config("preprojective_d4")).unwrap();
    let (_d, path) = temp_config(&format!("{d4}samples = 4\n"));
    let out = brst(&["verify", "--config", &path, "--output", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["tables"].as_array().unwrap().is_empty());
    assert!(!v["notices"].as_array().unwrap().is_empty());
    assert_eq!(check_status(&v, "identities"), ["pass"]);
    assert_eq!(brst(&["brst", "--config", &path]).status.code(), Some(2));
}

#[test]
fn single_variable_verify() {
    let (code, v) = json("verify", "hypertoric_m1", &[]);
    assert_eq!(code, 0);
    for row in v["tables"].as_array().unwrap() {
        if row["stable"] == true && row["weight"] == serde_json::json!([0]) {
            let n = row["ghost_degree"].as_i64().unwrap();
            assert_eq!(row["dim"], i64::from(n == 0 || n == 1), "{row}");
        }
    }
}

#[test]
fn reports_match_schema() {
    let schema = schema();
    let quick = [
        "hypertoric_m1",
        "hypertoric_m11",
        "hypertoric_2x3",
        "preprojective_a1",
        "calogero_moser_a1_n1",
        "negative_square",
        "nonsmooth_m1",
        "family_a3",
        "sra_a1_rank2",
    ];
    for name in quick {
        for cmd in ["validate", "flatness", "brst", "oracle", "predict", "verify"] {
            let (_, v) = json(cmd, name, &[]);
            assert_valid(&schema, &v, &format!("{cmd} {name}"));
        }
    }
}

/// Every number in the JSON report appears on the matching text line.
#[test]
fn text_and_json_agree() {
    let cfg = config("hypertoric_m11");
    for cmd in ["verify", "oracle"] {
        let text = String::from_utf8(brst(&[cmd, "--config", &cfg]).stdout).unwrap();
        let (_, v) = json(cmd, "hypertoric_m11", &[]);
        let lines: Vec<&str> = text.lines().collect();
        let mut rows = v["tables"].as_array().unwrap().iter();
        let table_lines: Vec<&&str> = lines.iter().filter(|l| l.starts_with("table ")).collect();
        assert_eq!(table_lines.len(), v["tables"].as_array().unwrap().len());
        for line in table_lines {
            let r = rows.next().unwrap();
            let weight: Vec<i64> = serde_json::from_value(r["weight"].clone()).unwrap();
            let mut want = format!(
                "table {} weight={weight:?} n={} k={} dim={} stable={}",
                r["table"].as_str().unwrap(),
                r["ghost_degree"],
                r["bound"],
                r["dim"],
                r["stable"]
            );
            if let Some(e) = r.get("expected") {
                want += &format!(" expected={e}");
            }
            assert_eq!(**line, want);
        }
        for p in v["predicted"].as_array().unwrap() {
            let coeffs: Vec<u64> = serde_json::from_value(p["coefficients"].clone()).unwrap();
            let head = format!("predicted {}: {coeffs:?} = {}", p["source"].as_str().unwrap(), p["factored"].as_str().unwrap());
            assert!(lines.iter().any(|l| l.starts_with(&head)), "{head}");
        }
        if let Some(h) = v.get("hilbert") {
            let computed: Vec<i64> = serde_json::from_value(h["computed"].clone()).unwrap();
            assert!(lines.contains(&format!("hilbert computed: {computed:?}").as_str()));
        }
        assert_eq!(lines.last().unwrap(), &format!("verdict: {}", v["verdict"].as_str().unwrap()));
    }
}

#[test]
fn dump_writes_triplet_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_string_lossy().into_owned();
    let cfg = config("hypertoric_m1");
    let out = brst(&["brst", "--config", &cfg, "--weights", "[[0]]", "--dump", &d]);
    assert_eq!(out.status.code(), Some(0));
    let mut names: Vec<String> = fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    assert_eq!(names, ["d_w0_n-1.txt", "d_w0_n0.txt"]);
    let text = fs::read_to_string(dir.path().join("d_w0_n0.txt")).unwrap();
    assert!(!text.trim().is_empty());
}

#[test]
fn out_flag_writes_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let p = path.to_string_lossy().into_owned();
    let cfg = config("hypertoric_m1");
    let out = brst(&["predict", "--config", &cfg, "--output", "json", "--out", &p]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "predict");
}
