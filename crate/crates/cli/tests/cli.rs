use assert_cmd::Command;
use serde_json::Value;

fn fkdv() -> Command {
    let mut cmd = Command::cargo_bin("fkdv").unwrap();
    cmd.env_remove("FKDV_OUT_DIR");
    cmd
}

fn json_of(args: &[&str]) -> Value {
    let out = fkdv()
        .args(args)
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    serde_json::from_slice(&out).unwrap()
}

#[test]
fn derive_sk_has_fifteen_equations_and_the_top_entry() {
    let v = json_of(&["derive", "--preset", "sk"]);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["count"], 15);
    let top = &v["equations"][0];
    assert_eq!(top["power"], 7);
    // 2γ = 10, 24α + 12β = 180, 720ω = 720
    assert_eq!(top["equation"], "10*a2^3 + 180*a2^2 + 720*a2");
}

#[test]
fn symbolic_derive_keeps_every_coefficient() {
    let v = json_of(&["derive"]);
    assert_eq!(v["params"], "symbolic");
    assert_eq!(
        v["equations"][0]["equation"],
        "2*gamma*a2^3 + 24*alpha*a2^2 + 12*beta*a2^2 + 720*omega*a2"
    );
    let r = json_of(&["derive", "--restricted"]);
    assert_eq!(r["count"], 8);
}

#[test]
fn verify_kk_reports_a_eighty_and_six_certificates() {
    let v = json_of(&["verify", "--preset", "kk"]);
    assert_eq!(v["A"], "80");
    assert_eq!(v["all_verified"], true);
    let fams = v["families"].as_array().unwrap();
    assert_eq!(fams.len(), 6);
    assert!(fams.iter().all(|f| f["status"] == "verified"));
}

#[test]
fn solve_ito_includes_family_three_at_a_twenty() {
    let v = json_of(&["solve", "--preset", "ito", "--k", "-1"]);
    let tuples = v["tuples"].as_array().unwrap();
    assert!(tuples.len() >= 6);
    // a₀ = −2·20·(−1)/2, a₂ = −3·20/2, λ = 16·(−6)·1
    let hit = tuples
        .iter()
        .find(|t| t["family"] == 3)
        .expect("family 3 present");
    assert_eq!(hit["exact"]["a0"], "20");
    assert_eq!(hit["exact"]["a2"], "-30");
    assert_eq!(hit["exact"]["b2"], "0");
    assert_eq!(hit["exact"]["lambda"], "-96");
    assert_eq!(hit["root"], "principal");
}

#[test]
fn decimal_k_is_read_exactly() {
    let v = json_of(&["solve", "--preset", "sk", "--k", "-0.25"]);
    assert_eq!(v["k"], "-1/4");
}

#[test]
fn identical_runs_are_byte_identical() {
    for args in [
        &["solve", "--preset", "lax", "--k", "1/4"][..],
        &["verify", "--preset", "cdg"][..],
        &[
            "residual",
            "--preset",
            "sk",
            "--printed",
            "9",
            "--nx",
            "201",
        ][..],
    ] {
        let a = fkdv()
            .args(args)
            .assert()
            .success()
            .get_output()
            .stdout
            .clone();
        let b = fkdv()
            .args(args)
            .assert()
            .success()
            .get_output()
            .stdout
            .clone();
        assert_eq!(a, b, "{args:?}");
    }
}

#[test]
fn floats_use_seventeen_significant_digits() {
    let out = fkdv()
        .args(["solve", "--preset", "sk", "--k", "-1"])
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    let text = String::from_utf8(out).unwrap();
    assert!(text.contains("\"a0\": 8.0000000000000000e+0"), "{text}");
}

#[test]
fn exit_codes_distinguish_failures() {
    fkdv()
        .args([
            "solve", "--alpha", "1", "--beta", "1", "--gamma", "1", "--omega", "1", "--k", "1",
        ])
        .assert()
        .code(3);
    fkdv()
        .args(["solve", "--preset", "sk", "--alpha", "1", "--k", "1"])
        .assert()
        .code(2);
    fkdv()
        .args([
            "solve", "--alpha", "1", "--beta", "1", "--gamma", "0", "--omega", "1", "--k", "1",
        ])
        .assert()
        .code(2);
    fkdv()
        .args(["solve", "--alpha", "1", "--k", "1"])
        .assert()
        .code(2);
    fkdv()
        .args([
            "eval", "--preset", "sk", "--family", "3", "--branch", "tan", "--k", "-1",
        ])
        .assert()
        .code(2);
    fkdv().args(["verify", "--family", "9"]).assert().code(2);
}

#[test]
fn eval_writes_csv_with_masks() {
    let out = fkdv()
        .args([
            "eval",
            "--preset",
            "sk",
            "--printed",
            "1",
            "--x-min",
            "0",
            "--x-max",
            "0",
            "--nx",
            "1",
            "--t",
            "0",
        ])
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    let text = String::from_utf8(out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,t,u,mask"));
    // u1 carries only φ⁻², singular where tan vanishes.
    assert_eq!(
        lines.next(),
        Some("0.0000000000000000e+0,0.0000000000000000e+0,,1")
    );
}

#[test]
fn residual_reports_both_methods() {
    let v = json_of(&["residual", "--preset", "sk", "--printed", "6"]);
    let reports = v["reports"].as_array().unwrap();
    assert_eq!(reports[0]["method"], "riccati-chain");
    assert_eq!(reports[1]["method"], "finite-difference");
    assert!(reports[0]["scaled"].as_f64().unwrap() < 1e-8);
    assert!(v["agreement"]["max_abs_difference"].as_f64().unwrap() < 1e-2);
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    fkdv()
        .env("FKDV_OUT_DIR", dir.path())
        .args(["verify", "--preset", "sk"])
        .assert()
        .success()
        .stdout("");
    let written: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("verify.json")).unwrap())
            .unwrap();
    assert_eq!(written["A"], "20");
    let explicit = dir.path().join("nested/solve.csv");
    fkdv()
        .args([
            "solve", "--preset", "sk", "--k", "-1", "--format", "csv", "--output",
        ])
        .arg(&explicit)
        .assert()
        .success();
    assert!(std::fs::read_to_string(explicit)
        .unwrap()
        .starts_with("a0,a2,b2,lambda,family,root,residual_norm\n"));
}

#[test]
fn report_covers_every_preset() {
    let v = json_of(&["report", "--nx", "101"]);
    let presets = v["presets"].as_array().unwrap();
    assert_eq!(presets.len(), 5);
    let labels: Vec<_> = presets
        .iter()
        .map(|p| p["params"]["label"].as_str().unwrap())
        .collect();
    assert_eq!(labels, ["kk", "sk", "cdg", "lax", "ito"]);
    assert_eq!(presets[0]["abc"][0]["A"], "80");
    assert!(presets
        .iter()
        .all(|p| p["max_riccati_scaled"].as_f64().unwrap() < 1e-8));
}
