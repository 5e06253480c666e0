use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lame-resonance"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lame-resonance-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

/// Data rows of a CSV artifact with its header; the config comment is checked.
fn csv_of(out: &Output) -> (Vec<String>, Vec<Vec<String>>) {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let (first, rest) = text.split_once('\n').unwrap();
    let cfg: Value = serde_json::from_str(first.strip_prefix("# config = ").expect("config comment")).unwrap();
    assert!(cfg.get("material").is_some());
    let mut r = csv::Reader::from_reader(rest.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|x| x.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

fn schema() -> Value {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/output.schema.json");
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

/// Checks `required`, `properties`, `items` and local `$ref` recursively.
fn conforms(v: &Value, s: &Value, root: &Value) -> Result<(), String> {
    if let Some(r) = s.get("$ref").and_then(Value::as_str) {
        let name = r.trim_start_matches("#/$defs/");
        return conforms(v, &root["$defs"][name], root);
    }
    if let Some(req) = s.get("required").and_then(Value::as_array) {
        for k in req {
            let k = k.as_str().unwrap();
            if v.get(k).is_none() {
                return Err(format!("missing key {k}"));
            }
        }
    }
    if s.get("additionalProperties") == Some(&Value::Bool(false)) {
        let allowed = s["properties"].as_object().unwrap();
        if let Some(extra) = v.as_object().unwrap().keys().find(|k| !allowed.contains_key(*k)) {
            return Err(format!("unexpected key {extra}"));
        }
    }
    if let Some(props) = s.get("properties").and_then(Value::as_object) {
        for (k, sub) in props {
            if let Some(x) = v.get(k) {
                conforms(x, sub, root)?;
            }
        }
    }
    if let (Some(items), Some(arr)) = (s.get("items"), v.as_array()) {
        for x in arr {
            conforms(x, items, root)?;
        }
    }
    if s.get("type").and_then(Value::as_str) == Some("number") && !v.is_number() {
        return Err(format!("{v} is not a number"));
    }
    Ok(())
}

fn check_schema(v: &Value, kind: &str) {
    let root = schema();
    conforms(v, &root["$defs"][kind], &root).unwrap();
    conforms(&v["config"], &root["$defs"]["config"], &root).unwrap();
    let again: Value = serde_json::from_str(&serde_json::to_string(v).unwrap()).unwrap();
    assert_eq!(&again, v);
}

#[test]
fn minimal_resonances_have_a_degenerate_pair() {
    let v = json_of(&run(&["resonances", "--epsilon", "1e-4", "--tau", "1"]));
    check_schema(&v, "resonances");
    let roots = v["roots"].as_array().unwrap();
    assert_eq!(roots.len(), 3);
    assert_eq!(roots[0]["omega"], roots[1]["omega"]);
    assert_ne!(roots[0]["omega"], roots[2]["omega"]);
    assert_eq!(v["case"]["tag"], "Case2");
}

#[test]
fn epsilon_sweep_writes_csv() {
    let (header, rows) = csv_of(&run(&["resonances", "--sweep", "epsilon=1e-5:1e-3:3:log"]));
    assert_eq!(&header[..4], ["epsilon", "re_omega", "im_omega", "residual"]);
    assert_eq!(rows.len(), 9);
    let eps: Vec<f64> = rows.iter().step_by(3).map(|r| r[0].parse().unwrap()).collect();
    assert_eq!(eps, vec![1e-5, 1e-4, 1e-3]);
}

#[test]
fn convexity_violation_is_a_config_error() {
    let out = run(&["--lambda", "-2", "resonances"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("strong convexity lambda + mu > 0"));
}

#[test]
fn delta_and_tau_conflict() {
    assert_eq!(run(&["resonances", "--delta", "1e-4", "--tau", "1"]).status.code(), Some(2));
    assert_eq!(run(&["resonances", "--sweep", "epsilon=1:2"]).status.code(), Some(2));
    assert_eq!(run(&["farfield", "--radii", "3"]).status.code(), Some(2));
}

#[test]
fn three_regime_preset() {
    let (header, rows) = csv_of(&run(&["scatter", "--preset", "three-regime", "--nodes", "32"]));
    let tag = header.iter().position(|h| h == "regime").unwrap();
    let xi = header.iter().position(|h| h == "abs_xi").unwrap();
    let tags: Vec<&str> = rows.iter().map(|r| r[tag].as_str()).collect();
    assert_eq!(tags, ["Quasistatic", "Resonant", "Beyond"]);
    assert!(rows.iter().all(|r| r[xi].parse::<f64>().unwrap() > 0.0));
}

#[test]
fn scatter_json_matches_schema() {
    let v = json_of(&run(&["scatter", "--omega", "0.01,0", "--direction", "30", "--nodes", "32"]));
    check_schema(&v, "scatter");
    assert_eq!(v["regime"], "Resonant");
    assert!((v["direction"][1].as_f64().unwrap() - 0.5).abs() < 1e-15);
}

#[test]
fn far_field_projector_columns() {
    let args = ["farfield", "--omega", "1", "--epsilon", "1e-2", "--nodes", "32", "--angles", "0,45,-120"];
    let (header, rows) = csv_of(&run(&[&args[..], &["--format", "csv"]].concat()));
    let p = header.iter().position(|h| h == "p_parallel").unwrap();
    let s = header.iter().position(|h| h == "s_perpendicular").unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r[p] == "true" && r[s] == "true"));
    let v = json_of(&run(&args));
    check_schema(&v, "farfield");
    assert_eq!(v["decay"].as_array().unwrap().len(), 3);
}

#[test]
fn dilute_bandgap_reports_t() {
    let v = json_of(&run(&["bandgap", "--dilute", "--scale", "0.05", "--epsilon", "1e-5"]));
    check_schema(&v, "bandgap");
    let t = num_complex::Complex64::new(v["t"]["re"].as_f64().unwrap(), v["t"]["im"].as_f64().unwrap());
    let w = (-t * 2.0 * 1e-5 / (0.05 * 0.05)).sqrt().re;
    assert!((v["omega_star"].as_f64().unwrap() - w).abs() < 1e-15);
    assert!(v["samples"].as_array().unwrap().is_empty());
}

#[test]
fn config_file_with_flag_override() {
    let cfg = tmp("bandgap.json");
    std::fs::write(&cfg, r#"{"bandgap": {"grid_points": 4, "scale": 0.3}, "geometry": {"n_nodes": 16}}"#).unwrap();
    let out = run(&["--config", cfg.to_str().unwrap(), "bandgap", "--scale", "0.2", "--format", "csv"]);
    let (header, rows) = csv_of(&out);
    assert_eq!(header, ["alpha_x", "alpha_y", "lambda_min", "lambda_max", "anti_hermitian"]);
    assert_eq!(rows.len(), 16);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().next().unwrap().contains(r#""scale":0.2"#));
    std::fs::write(&cfg, r#"{"bandgap": {"points": 4}}"#).unwrap();
    assert_eq!(run(&["--config", cfg.to_str().unwrap(), "bandgap"]).status.code(), Some(2));
}

#[test]
fn scale_sweep_has_agreement_column() {
    let cfg = tmp("sweep.json");
    std::fs::write(&cfg, r#"{"bandgap": {"grid_points": 4}, "geometry": {"n_nodes": 16}}"#).unwrap();
    let (header, rows) = csv_of(&run(&["--config", cfg.to_str().unwrap(), "bandgap", "--sweep", "scale=0.2:0.1:2"]));
    assert_eq!(header, ["scale", "omega_full", "omega_dilute", "relative_gap"]);
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r[3].parse::<f64>().unwrap() >= 0.0));
}

#[test]
fn verify_exit_codes() {
    let out_file = tmp("verify.json");
    let ok = run(&["verify", "--only", "2", "--out", out_file.to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out_file).unwrap()).unwrap();
    check_schema(&v, "verify");
    assert_eq!(v["report"]["checks"][0]["anchor"], "neumann-poincare-rigid-motion-eigenspace");
    let bad = run(&["verify", "--only", "2", "--perturb", "neumann-poincare=1e-3"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("FAIL [neumann-poincare-rigid-motion-eigenspace]"));
    assert_eq!(run(&["verify", "--perturb", "gravity=1"]).status.code(), Some(2));
}

#[test]
fn output_is_reproducible() {
    let path = tmp("repro.json");
    let once = || {
        let out = run(&["scatter", "--omega", "0.02,-0.001", "--nodes", "32", "--out", path.to_str().unwrap()]);
        assert!(out.status.success());
        std::fs::read(&path).unwrap()
    };
    assert_eq!(once(), once());
}
