use assert_cmd::Command;
use serde_json::Value;
use std::path::PathBuf;

fn model(name: &str) -> &'static str {
    let p: PathBuf = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/models").join(format!("{name}.json"));
    Box::leak(p.to_str().unwrap().to_string().into_boxed_str())
}

fn bin() -> Command {
    let mut c = Command::cargo_bin("reinhardt").unwrap();
    c.env_remove("REINHARDT_SEED");
    c
}

fn run(args: &[&str]) -> (i32, Value) {
    let out = bin().args(args).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let json = serde_json::from_str(&text).unwrap_or(Value::Null);
    (out.status.code().unwrap(), json)
}

#[test]
fn classify_exit_codes() {
    let (code, v) = run(&["classify", model("coeure_loeb")]);
    assert_eq!(code, 3);
    assert_eq!(v["member"], false);
    assert_eq!(v["case_label"], "T0Hyperbolic");
    let (code, v) = run(&["classify", model("model4")]);
    assert_eq!(code, 0);
    assert_eq!(v["member"], true);
}

#[test]
fn malformed_input_is_a_json_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"kind\": ").unwrap();
    let (code, v) = run(&["classify", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "json");

    std::fs::write(&bad, r#"{"kind": "model5"}"#).unwrap();
    let (code, v) = run(&["classify", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "schema");
    assert!(!v["error"]["violations"].as_array().unwrap().is_empty());

    let (code, v) = run(&["classify", "/nonexistent/model.json"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "io");
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = ["stehle", model("model4"), "--radial", "3", "--angular", "2", "--exhaustion-samples", "300", "--bounded-samples", "1000", "--automorphisms", "2"];
    let a = bin().args(args).output().unwrap();
    let b = bin().args(args).output().unwrap();
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), Some(0));
}

#[test]
fn seed_comes_from_the_environment() {
    let args = ["stehle", model("model6"), "--fn", "neg_square", "--radial", "2", "--angular", "2", "--exhaustion-samples", "100", "--bounded-samples", "100", "--automorphisms", "1"];
    let out = bin().env("REINHARDT_SEED", "7").args(args).output().unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["seed"], 7);
    let flag = bin().env("REINHARDT_SEED", "7").args(args).args(["--seed", "0x10"]).output().unwrap();
    let w: Value = serde_json::from_slice(&flag.stdout).unwrap();
    assert_eq!(w["seed"], 16);
}

#[test]
fn planted_control_fails_the_suite() {
    let (code, v) = run(&["stehle", model("model6"), "--fn", "neg_square", "--radial", "4", "--angular", "2", "--exhaustion-samples", "500", "--bounded-samples", "1000", "--automorphisms", "2"]);
    assert_eq!(code, 2);
    assert_eq!(v["psh_pass"], false);
    assert!((v["psh_min_eigen"].as_f64().unwrap() + 1.0).abs() < 1e-6);
}

#[test]
fn rotations_of_model4_have_zero_sup() {
    let dir = tempfile::tempdir().unwrap();
    let auts = dir.path().join("auts.json");
    std::fs::write(
        &auts,
        r#"[{"family": "model4", "alpha": 0.7, "beta": {"re": 0.0, "im": 0.0}, "gamma": 2.1, "invert": false},
            {"family": "model4", "alpha": 3.0, "beta": {"re": 0.0, "im": 0.0}, "gamma": 0.0, "invert": false}]"#,
    )
    .unwrap();
    let (code, v) = run(&["stehle", model("model4"), "--fn", "u4", "--aut-file", auts.to_str().unwrap(), "--radial", "4", "--angular", "3", "--exhaustion-samples", "1000", "--bounded-samples", "10000"]);
    assert_eq!(code, 0, "{v}");
    for b in v["bounded"].as_array().unwrap() {
        for s in b["sups"].as_array().unwrap() {
            assert!(s[1].as_f64().unwrap().abs() < 1e-12, "{s}");
        }
    }
}

#[test]
fn utilde6_is_invariant_but_not_an_exhaustion() {
    let (code, v) = run(&["stehle", model("model6"), "--fn", "u_tilde6", "--radial", "4", "--angular", "3", "--exhaustion-samples", "1000", "--bounded-samples", "10000"]);
    assert_eq!(code, 2);
    assert_eq!(v["psh_pass"], true);
    assert_eq!(v["bounded_pass"], true);
    assert_eq!(v["bounded"].as_array().unwrap().len(), 10);
    assert_eq!(v["exhaustion_pass"], false);
}

#[test]
fn foreign_automorphisms_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let auts = dir.path().join("auts.json");
    std::fs::write(&auts, r#"[{"family": "model6", "alpha": 0.1, "beta": {"re": 0.2, "im": 0.0}, "gamma": 0.0}]"#).unwrap();
    let (code, v) = run(&["stehle", model("model4"), "--fn", "u4", "--aut-file", auts.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "invalid");
    std::fs::write(&auts, r#"[{"family": "model6"}]"#).unwrap();
    let (code, v) = run(&["stehle", model("model4"), "--aut-file", auts.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "schema");
}

#[test]
fn counterexample_defaults_pass_with_four_rows() {
    let (code, v) = run(&["counterexample"]);
    assert_eq!(code, 0);
    let rows = v["branches"][0]["blowup"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    let g: Vec<f64> = rows.iter().map(|r| r["im_g0"].as_f64().unwrap()).collect();
    assert!(g.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn counterexample_minus_branch_passes() {
    let (code, v) = run(&["counterexample", "--sign", "-", "--R-list", "1.5,1.1"]);
    assert_eq!(code, 0);
    assert_eq!(v["branches"][0]["params"]["sign"], "-");
    assert!(v["branches"][0]["params"]["a"].as_f64().unwrap() < 0.0);
}

#[test]
fn coarse_sampling_is_a_check_failure() {
    let (code, v) = run(&["counterexample", "--R-list", "1.001", "--N", "64"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "check_failure");
    assert_eq!(v["error"]["record"]["n"], 64);
    let (code, _) = run(&["counterexample", "--N", "100"]);
    assert_eq!(code, 1);
    let (code, _) = run(&["counterexample", model("model4")]);
    assert_eq!(code, 1);
}

#[test]
fn counterexample_files() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("rows.csv");
    let svg = dir.path().join("blowup.svg");
    let json = dir.path().join("summary.json");
    let out = bin()
        .args(["counterexample", "--R-list", "1.5,1.2", "--sign", "both", "--csv", csv.to_str().unwrap(), "--svg", svg.to_str().unwrap(), "-o", json.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["branches"].as_array().unwrap().len(), 2);
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("sign,R,theta"));
    let signs: std::collections::HashSet<&str> = lines.map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(signs.len(), 2);
    let pic = std::fs::read_to_string(&svg).unwrap();
    assert!(pic.contains("<polyline") && pic.trim_end().ends_with("</svg>"));
}

#[test]
fn cone_and_aut_reports() {
    let (code, v) = run(&["cone", model("coeure_loeb")]);
    assert_eq!(code, 0);
    assert_eq!(v["recession_cone"]["kind"], "wedge");
    assert_eq!(v["hyperbolic_matrix"]["matrix"], serde_json::json!([[2, 1], [1, 1]]));
    let (code, v) = run(&["aut", model("parabolic_k2")]);
    assert_eq!(code, 0);
    assert_eq!(v["structure"]["type"], "parabolic_type");
    assert!(v["witness"]["norms_squared"].as_array().unwrap().len() > 10);
    let (code, v) = run(&["aut", model("model4")]);
    assert_eq!(code, 0);
    assert!(v["structure"].is_null());
}

#[test]
fn quick_selftest() {
    let (code, v) = run(&["selftest", "--quick"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["models"].as_array().unwrap().len(), 12);
    assert_eq!(v["control"]["detected"], true);
}
