use std::path::PathBuf;
use std::process::{Command, Output};

use num_complex::Complex64;
use serde_json::Value;
use shadowsum::{ModularData, RootSystem};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_shadowsum"));
    c.env_remove("SHADOWSUM_THREADS");
    c
}

fn link(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../links").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json_out(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn json_err(o: &Output) -> Value {
    serde_json::from_slice(&o.stderr).unwrap()
}

fn cval(v: &Value) -> Complex64 {
    Complex64::new(v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

#[test]
fn verify_a1_level_3_passes() {
    let o = run(&["verify", "--algebra", "A1", "--level", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(json_out(&o)["pass"], Value::Bool(true));
}

#[test]
fn verify_a2_reports_conjugation_failures() {
    let o = run(&["verify", "--algebra", "A2", "--level", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let doc = json_out(&o);
    let failing: Vec<&str> = doc["reports"][0]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["pass"] == Value::Bool(false))
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(failing.len(), 2, "{failing:?}");
}

#[test]
fn fusion_a1_level_1() {
    let o = run(&["fusion", "--algebra", "A1", "--level", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let doc = json_out(&o);
    assert_eq!(doc["alcove"], serde_json::json!([[0], [1]]));
    assert_eq!(doc["n_lmn"][1][1][1], 0);
    assert_eq!(doc["n_lmn"][1][1][0], 1);
    assert_eq!(doc["racah"][1][1][0], 1);
    assert_eq!(doc["mismatches"], 0);
}

#[test]
fn fusion_a2_exits_one() {
    let o = run(&["fusion", "--algebra", "a2", "--level", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json_out(&o)["racah_matches_conjugate_gamma"], Value::Bool(true));
}

#[test]
fn wlo_of_three_unknots_matches_closed_form() {
    let o = run(&["wlo", link("link_three_unknots.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let doc = json_out(&o);
    let md = ModularData::new(RootSystem::new("A1".parse().unwrap()).unwrap(), 3).unwrap();
    // colors [1], [2], [1]
    let s00 = md.s.get(0, 0);
    let expect = md.t[1] * md.t[2] * md.t[1] / (md.t[0].powi(3) * s00 * s00) * md.n3(1, 2, 1) as f64
        / md.empty_sum(0);
    let got = cval(&doc["value"]);
    assert!((got - expect).norm() < 1e-12 * expect.norm().max(1.0), "{got} vs {expect}");
    assert!((cval(&doc["wlo_cs"]) - expect).norm() < 1e-9);
}

#[test]
fn shadow_and_cs_sum_agree() {
    for f in ["link_three_unknots.json", "link_nested.json", "link_mixed.json", "link_torus.json"] {
        let p = link(f);
        let s = json_out(&run(&["shadow", p.to_str().unwrap()]));
        let c = json_out(&run(&["cs-sum", p.to_str().unwrap()]));
        assert_eq!(s["pass"], Value::Bool(true), "{f}");
        assert_eq!(c["pass"], Value::Bool(true), "{f}");
        let k = s["k"].as_f64().unwrap();
        let g = s["genus"].as_i64().unwrap() as i32;
        let lhs = cval(&c["cs_state_sum"]);
        let rhs = cval(&s["shadow_state_sum"]) * k.powi(2 - 2 * g);
        assert!((lhs - rhs).norm() <= 1e-9 * lhs.norm().max(1.0), "{f}");
    }
}

#[test]
fn output_is_byte_identical() {
    for args in [
        vec!["modular", "--algebra", "B2", "--level", "2"],
        vec!["fusion", "--algebra", "G2", "--level", "1"],
        vec!["wlo", "../../links/link_torus.json"],
    ] {
        let a = bin().args(&args).current_dir(env!("CARGO_MANIFEST_DIR")).output().unwrap();
        let b = bin()
            .args(&args)
            .current_dir(env!("CARGO_MANIFEST_DIR"))
            .env("SHADOWSUM_THREADS", "1")
            .output()
            .unwrap();
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(!String::from_utf8_lossy(&a.stdout).contains("-0.0,"));
    }
}

#[test]
fn modular_document_shape() {
    let doc = json_out(&run(&["modular", "--algebra", "A1", "--level", "2"]));
    assert_eq!(doc["alcove"], serde_json::json!([[0], [1], [2]]));
    assert_eq!(doc["s"].as_array().unwrap().len(), 3);
    assert_eq!(doc["c"], serde_json::json!([[1, 0, 0], [0, 1, 0], [0, 0, 1]]));
    assert_eq!(doc["central_charge"], "3/2");
    let s00 = cval(&doc["s"][0][0]);
    assert!((s00.re - 0.5).abs() < 1e-14);
}

#[test]
fn table_format() {
    let o = run(&["--format", "table", "wlo", link("link_mixed.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let s = String::from_utf8(o.stdout).unwrap();
    assert!(s.contains("[PASS]"));
    assert!(s.starts_with("A2 level 3, genus 0"));
}

#[test]
fn flags_override_document() {
    let p = link("link_three_unknots.json");
    let o = run(&["wlo", p.to_str().unwrap(), "--level", "5"]);
    assert_eq!(json_out(&o)["level"], 5);
    let o = run(&["wlo", p.to_str().unwrap(), "--level", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json_err(&o)["code"], "ColorNotInAlcove");
}

#[test]
fn errors_are_objects_with_exit_two() {
    let cases: Vec<(Vec<&str>, &str)> = vec![
        (vec!["wlo", "/nonexistent/link.json"], "IoError"),
        (vec!["modular", "--algebra", "E8", "--level", "1"], "UnsupportedAlgebra"),
        (vec!["modular", "--algebra", "A1", "--level", "0"], "UsageError"),
        (vec!["frobnicate"], "UsageError"),
        (vec!["verify", "--level", "2"], "UsageError"),
        (vec!["--tol-theorem", "-1", "verify"], "UsageError"),
        (vec!["--weyl-cap", "2", "modular", "--algebra", "A2", "--level", "1"], "WeylCapExceeded"),
    ];
    for (args, code) in cases {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let e = json_err(&o);
        assert_eq!(e["code"], code, "{args:?}");
        assert!(e["message"].is_string() && e.get("context").is_some());
    }
}

#[test]
fn bad_documents() {
    let dir = std::env::temp_dir().join(format!("shadowsum-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cases = [
        ("not json", "ParseError"),
        (r#"{"loops": [{"id": "a", "color": [1]}]}"#, "UsageError"),
        (r#"{"algebra": "A1", "level": 2, "loops": [{"id": "a", "color": [1]}, {"id": "a", "color": [1]}]}"#, "DuplicateId"),
        (r#"{"algebra": "A1", "level": 2, "surface": {"genus": 1}, "loops": []}"#, "ForestGenusMismatch"),
        (r#"{"algebra": "A1", "level": 2, "loops": [], "vertical": [{"color": [1], "winding": 2}]}"#, "VerticalWinding"),
    ];
    for (i, (doc, code)) in cases.iter().enumerate() {
        let p = dir.join(format!("doc{i}.json"));
        std::fs::write(&p, doc).unwrap();
        let o = run(&["shadow", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{doc}");
        assert_eq!(json_err(&o)["code"], *code, "{doc}");
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn invalid_thread_count() {
    let o = bin().args(["modular", "--algebra", "A1", "--level", "1"]).env("SHADOWSUM_THREADS", "zero").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json_err(&o)["context"]["SHADOWSUM_THREADS"], "zero");
}

#[test]
fn stdin_input() {
    use std::io::Write;
    let mut child = bin()
        .args(["wlo", "-"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(br#"{"algebra": "G2", "level": 1, "loops": [{"id": "a", "color": [1, 0], "winding": -1}]}"#)
        .unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_out(&o)["pass"], Value::Bool(true));
}
