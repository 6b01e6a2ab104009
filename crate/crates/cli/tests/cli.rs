use std::process::{Command, Output};

use serde_json::Value;

fn z2rep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_z2rep"))
        .args(args)
        .env_remove("Z2REP_CONFIG")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let out = z2rep(args);
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (v, out.status.code().unwrap())
}

#[test]
fn verify_algebra_passes() {
    let (v, code) = json(&["verify-algebra"]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], true);
    assert_eq!(v["triples_checked"], 1000);
    assert_eq!(v["pairs_checked"], 100);
}

#[test]
fn mutated_table_fails_with_a_counterexample() {
    let (v, code) = json(&["verify-algebra", "--mutate", "[R,Lp]=Lp"]);
    assert_eq!(code, 1);
    assert_eq!(v["passed"], false);
    assert_eq!(v["first_antisymmetry_failure"], serde_json::json!(["R", "Lp"]));
    assert!(v["first_jacobi_failure"]["triple"].is_array());

    let out = z2rep(&["verify-algebra", "--mutate", "[R,Lp]=Lp", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("check,evaluated,failures,first_counterexample\n"));
    assert!(text.contains("antisymmetry,100,2,\"[R,Lp]\""));
}

#[test]
fn singular_at_level_three() {
    let (v, code) = json(&["singular", "--kind", "mr", "--r", "-2", "--level", "3"]);
    assert_eq!(code, 0);
    let reports = v.as_array().unwrap();
    assert_eq!(reports.len(), 2);
    for r in reports {
        assert_eq!(r["nullspace"].as_array().unwrap().len(), 1);
        assert!(matches!(r["closed_form_match"].as_str(), Some("exact" | "scalar-multiple")));
    }
    assert_eq!(reports[0]["closed_form"], "chi01");
    assert_eq!(reports[1]["closed_form"], "chi10");
}

#[test]
fn sweeps() {
    let (v, code) = json(&["singular", "--kind", "mrl", "--r", "1", "--lambda", "1", "--sweep", "--level-cap", "8"]);
    assert_eq!(code, 0);
    let hits: Vec<u64> = v
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| !r["nullspace"].as_array().unwrap().is_empty())
        .map(|r| r["level"].as_u64().unwrap())
        .collect();
    assert_eq!(hits, vec![1, 1]);

    let (v, code) = json(&["singular", "--kind", "mr", "--r", "1/2", "--sweep", "--level-cap", "8"]);
    assert_eq!(code, 0);
    assert!(v.as_array().unwrap().iter().all(|r| r["nullspace"].as_array().unwrap().is_empty()));
}

#[test]
fn classify_examples() {
    let (v, code) = json(&["classify", "--kind", "mr", "--r", "-4"]);
    assert_eq!(code, 0);
    assert_eq!((v["case"].as_str(), v["dimension"].as_u64(), v["M"].as_u64()), (Some("ii"), Some(25), Some(2)));

    let (v, _) = json(&["classify", "--kind", "mr", "--r", "3", "--level-cap", "5"]);
    assert_eq!((v["case"].as_str(), v["dimension"].as_str()), (Some("i"), Some("infinite")));

    let (v, _) = json(&["classify", "--kind", "mrl", "--r", "0", "--lambda", "16", "--level-cap", "7"]);
    assert_eq!((v["case"].as_str(), v["M"].as_u64()), (Some("iv"), Some(2)));
}

#[test]
fn dims_tables() {
    let out = z2rep(&["dims", "--kind", "mr", "--r", "-2", "--max-level", "6", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        text,
        "level,verma_dim,submodule_dim,quotient_dim\n0,1,0,1\n1,2,0,2\n2,3,0,3\n3,4,2,2\n4,5,4,1\n5,6,6,0\n6,7,7,0\n"
    );
    let (v, _) = json(&["dims", "--kind", "mr", "--r", "5", "--max-level", "4"]);
    for row in v["per_level"].as_array().unwrap() {
        assert_eq!(row["quotient_dim"], row["verma_dim"]);
    }
    let (v, _) = json(&["dims", "--kind", "mrl", "--r", "1", "--lambda", "1", "--max-level", "5"]);
    let q: Vec<u64> = v["per_level"].as_array().unwrap().iter().map(|r| r["quotient_dim"].as_u64().unwrap()).collect();
    assert_eq!(q, vec![2; 6]);
}

#[test]
fn cartan_examples() {
    let (v, code) = json(&["cartan", "--n", "1", "--r", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["constituents"][0]["kind"], "nu_r");
    let (v, _) = json(&["cartan", "--n", "2", "--r", "0", "--c", "5"]);
    assert_eq!(v["constituents"][0]["kind"], "nu_r_lambda");
    assert_eq!(v["constituents"][0]["lambda"], "5/1");
    let (v, _) = json(&["cartan", "--n", "4", "--r", "0", "--c", "0,1"]);
    assert!(v["constituents"].as_array().unwrap().iter().all(|c| c["dim"].as_u64().unwrap() <= 2));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["cartan", "--n", "4", "--r", "0", "--c", "1"][..],
        &["singular", "--kind", "mr", "--r", "0.5", "--level", "1"],
        &["singular", "--kind", "mrl", "--r", "1", "--level", "1"],
        &["singular", "--kind", "mr", "--r", "1", "--lambda", "2", "--level", "1"],
        &["singular", "--kind", "mr", "--r", "1/0", "--level", "1"],
        &["singular", "--kind", "mr", "--r", "1", "--level", "2", "--sector", "01"],
        &["classify", "--kind", "mrl", "--r", "1", "--lambda", "0"],
        &["verify-algebra", "--mutate", "R,Lp"],
        &["bogus"],
    ] {
        assert_eq!(z2rep(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["verify-algebra", "--seed", "11", "--samples", "7"];
    let a = z2rep(&args);
    let b = z2rep(&args);
    assert_eq!(a.stdout, b.stdout);
    let args = ["singular", "--kind", "mrl", "--r", "1/3", "--lambda", "49/9", "--sweep", "--level-cap", "5", "--format", "csv"];
    assert_eq!(z2rep(&args).stdout, z2rep(&args).stdout);
}

#[test]
fn config_file_and_out_flag() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"level_cap": 3, "output_format": "csv", "seed": 4}"#).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_z2rep"))
        .args(["singular", "--kind", "mr", "--r", "-2", "--sweep"])
        .env("Z2REP_CONFIG", &cfg)
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 6, "{text}");

    let target = dir.path().join("table.json");
    let out = Command::new(env!("CARGO_BIN_EXE_z2rep"))
        .args(["bracket-table", "--format", "json", "--out"])
        .arg(&target)
        .env("Z2REP_CONFIG", &cfg)
        .output()
        .unwrap();
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert!(!v.as_array().unwrap().is_empty());

    std::fs::write(&cfg, r#"{"level_cap": "x"}"#).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_z2rep"))
        .arg("bracket-table")
        .env("Z2REP_CONFIG", &cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
