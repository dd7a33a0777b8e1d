//! End-to-end runs of the `thue` binary: exit codes, JSON shapes,
//! determinism, and the environment precision override.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn thue(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thue"))
        .args(args)
        .env_remove("THUE_PRECISION_BITS")
        .output()
        .expect("binary runs")
}

fn thue_env(args: &[&str], bits: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thue"))
        .args(args)
        .env("THUE_PRECISION_BITS", bits)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "exit {:?}, stderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr_error(out: &Output, want_code: i32) -> serde_json::Value {
    assert_eq!(out.status.code(), Some(want_code));
    let doc: serde_json::Value =
        serde_json::from_slice(&out.stderr).expect("stderr carries a JSON error");
    assert!(doc["error"]["code"].is_string());
    assert!(doc["error"]["message"].is_string());
    doc["error"].clone()
}

#[test]
fn field_check_reports_field_and_verified_units() {
    let spec = fixture("stender_d2_c1.json");
    let doc = stdout_json(&thue(&["field-check", spec.to_str().unwrap()]));
    assert_eq!(doc["degree"], 4);
    assert_eq!(doc["signature"], serde_json::json!([0, 2]));
    assert_eq!(doc["irreducibility"]["status"], "verified");
    assert_eq!(doc["units"]["rank"], 1);
    assert_eq!(doc["units"]["torsion_order"], 2);
    assert_eq!(doc["units"]["regulator_claim_checked"], true);
    let reg = doc["units"]["regulator"].as_array().unwrap();
    let lo = reg[0].as_f64().unwrap();
    let hi = reg[1].as_f64().unwrap();
    assert!(lo <= 4.882514851667388 && 4.882514851667388 <= hi);
}

#[test]
fn field_with_one_real_embedding_is_accepted() {
    let spec = fixture("cbrt2.json");
    let doc = stdout_json(&thue(&["field-check", spec.to_str().unwrap()]));
    assert_eq!(doc["degree"], 3);
    assert_eq!(doc["signature"], serde_json::json!([1, 1]));
    assert_eq!(doc["units"]["regulator_claim_checked"], true);

    let h = stdout_json(&thue(&["height", spec.to_str().unwrap(), "--element", "0,1,0"]));
    // h(2^(1/3)) = ln(2)/3 and M = 2
    let got = h["h"].as_f64().unwrap();
    assert!((got - 2f64.ln() / 3.0).abs() < 1e-12, "h = {got}");
    assert!((h["M"].as_f64().unwrap() - 2.0).abs() < 1e-12);
}

#[test]
fn bounds_below_two_is_a_validation_error() {
    let spec = fixture("stender_d2_c1.json");
    let out = thue(&["bounds", spec.to_str().unwrap(), "--m", "1"]);
    let err = stderr_error(&out, 2);
    assert_eq!(err["code"], "validation");
}

#[test]
fn zero_denominator_in_a_spec_points_at_the_field() {
    let spec = fixture("bad_rational.json");
    let out = thue(&["field-check", spec.to_str().unwrap()]);
    let err = stderr_error(&out, 2);
    assert_eq!(err["code"], "validation");
    assert!(
        err["message"].as_str().unwrap().contains("fundamental_units"),
        "message lacks a field pointer: {}",
        err["message"]
    );
}

#[test]
fn missing_spec_file_is_a_validation_error() {
    let out = thue(&["field-check", "/nonexistent/spec.json"]);
    let err = stderr_error(&out, 2);
    assert_eq!(err["code"], "validation");
}

#[test]
fn solve_fixed_finds_the_unit_circle_points() {
    let form = fixture("quartic_fermat.json");
    let doc = stdout_json(&thue(&["solve-fixed", form.to_str().unwrap(), "--m", "16"]));
    assert_eq!(doc["count"], 4);
    let sols = doc["solutions"].as_array().unwrap();
    assert_eq!(sols.len(), 4);
    for s in sols {
        assert_eq!(s[0].as_i64().unwrap().abs(), 1);
        assert_eq!(s[1].as_i64().unwrap().abs(), 1);
    }

    let empty = stdout_json(&thue(&["solve-fixed", form.to_str().unwrap(), "--m", "1"]));
    assert_eq!(empty["count"], 0);
}

#[test]
fn oracle_agrees_with_the_family_solver() {
    let spec = fixture("stender_d2_c1.json");
    for (m, expect) in [("10", 0usize), ("200", 8usize)] {
        let oracle = stdout_json(&thue(&[
            "oracle",
            spec.to_str().unwrap(),
            "--m",
            m,
            "--cap-xy",
            "50",
            "--cap-a",
            "7",
        ]));
        // member exponent e twists by eps^e; the quartic family labels
        // that member n = e - 1
        let mut from_oracle: Vec<(i64, i64, i64)> = Vec::new();
        for member in oracle["members"].as_array().unwrap() {
            let n = member["exponents"][0].as_i64().unwrap() - 1;
            if n.abs() > 6 {
                continue;
            }
            for s in member["solutions"].as_array().unwrap() {
                from_oracle.push((n, s[0].as_i64().unwrap(), s[1].as_i64().unwrap()));
            }
        }
        from_oracle.sort_unstable();

        let solved = stdout_json(&thue(&[
            "stender", "solve", "--d", "2", "--c", "1", "--m", m, "--cap-xy", "50", "--cap-n",
            "6",
        ]));
        let mut from_solver: Vec<(i64, i64, i64)> = solved["triples"]
            .as_array()
            .unwrap()
            .iter()
            .map(|t| {
                (
                    t["n"].as_i64().unwrap(),
                    t["x"].as_i64().unwrap(),
                    t["y"].as_i64().unwrap(),
                )
            })
            .collect();
        from_solver.sort_unstable();
        assert_eq!(from_oracle, from_solver, "mismatch at m={m}");
        assert_eq!(from_solver.len(), expect);
        assert_eq!(solved["skipped_members"], serde_json::json!([-1]));
    }
}

#[test]
fn twist_by_a_unit_power_reproduces_member_coefficients() {
    let spec = fixture("stender_d2_c1.json");
    let twisted = stdout_json(&thue(&["twist", spec.to_str().unwrap(), "--exponents", "3"]));
    let coeffs = stdout_json(&thue(&["stender", "coeffs", "--d", "2", "--c", "1", "--n", "2"]));
    let cs = twisted["coefficients"].as_array().unwrap();
    assert_eq!(cs[0], serde_json::json!(1));
    assert_eq!(cs[1], coeffs["a"]);
    assert_eq!(cs[2], coeffs["b"]);
    assert_eq!(cs[3], coeffs["c"]);
    assert_eq!(cs[4], serde_json::json!(1));
    assert_eq!(coeffs["b"], serde_json::json!(2297986));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let spec = fixture("stender_d2_c1.json");
    for args in [
        vec!["bounds", spec.to_str().unwrap(), "--m", "10"],
        vec!["field-check", spec.to_str().unwrap()],
        vec![
            "solve-family",
            spec.to_str().unwrap(),
            "--m",
            "200",
            "--cap-xy",
            "50",
            "--cap-a",
            "3",
        ],
    ] {
        let a = thue(&args);
        let b = thue(&args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "nondeterministic stdout for {args:?}");
    }
}

#[test]
fn family_solve_reports_members_and_completeness() {
    let spec = fixture("stender_d2_c1.json");
    let doc = stdout_json(&thue(&[
        "solve-family",
        spec.to_str().unwrap(),
        "--m",
        "200",
        "--cap-xy",
        "50",
        "--cap-a",
        "3",
    ]));
    assert_eq!(doc["completeness"], "capped");
    assert_eq!(doc["skipped"], serde_json::json!([[0]]));
    let total: usize = doc["members"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m["solutions"].as_array().unwrap().len())
        .sum();
    assert_eq!(total, 8);
    assert!(doc["report"]["kappa_final"].as_f64().unwrap() > 0.0);
}

#[test]
fn precision_env_var_is_honored_and_validated() {
    let spec = fixture("stender_d2_c1.json");

    let doc = stdout_json(&thue_env(&["embeddings", spec.to_str().unwrap()], "256"));
    assert_eq!(doc["bits"], 256);
    assert_eq!(doc["roots"].as_array().unwrap().len(), 4);

    // below the floor
    let out = thue_env(&["embeddings", spec.to_str().unwrap()], "32");
    let err = stderr_error(&out, 2);
    assert_eq!(err["code"], "validation");

    // not an integer
    let out = thue_env(&["embeddings", spec.to_str().unwrap()], "lots");
    stderr_error(&out, 2);

    // an explicit flag wins over a bad environment value
    let out = Command::new(env!("CARGO_BIN_EXE_thue"))
        .args(["--bits", "128", "embeddings", spec.to_str().unwrap()])
        .env("THUE_PRECISION_BITS", "lots")
        .output()
        .unwrap();
    let doc = stdout_json(&out);
    assert_eq!(doc["bits"], 128);
}

#[test]
fn pretty_flag_indents_the_same_document() {
    let spec = fixture("stender_d2_c1.json");
    let compact = thue(&["field-check", spec.to_str().unwrap()]);
    let pretty = thue(&["--pretty", "field-check", spec.to_str().unwrap()]);
    assert!(compact.status.success() && pretty.status.success());
    assert!(!compact.stdout.contains(&b'\n') || compact.stdout.ends_with(b"\n"));
    assert!(pretty.stdout.iter().filter(|&&b| b == b'\n').count() > 5);
    let a: serde_json::Value = serde_json::from_slice(&compact.stdout).unwrap();
    let b: serde_json::Value = serde_json::from_slice(&pretty.stdout).unwrap();
    assert_eq!(a, b);
}

#[test]
fn stender_spec_output_round_trips_through_field_check() {
    let out = thue(&["stender", "spec", "--d", "3", "--c", "-1"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["min_poly"].as_array().unwrap().len(), 5);

    let dir = std::env::temp_dir().join("thue-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("stender_d3_cm1.json");
    std::fs::write(&path, &out.stdout).unwrap();
    let checked = stdout_json(&thue(&["field-check", path.to_str().unwrap()]));
    assert_eq!(checked["degree"], 4);
    assert_eq!(checked["units"]["regulator_claim_checked"], true);
    let reg = checked["units"]["regulator"].as_array().unwrap();
    let frozen = 6.467686670047546;
    assert!(reg[0].as_f64().unwrap() <= frozen && frozen <= reg[1].as_f64().unwrap());
}
