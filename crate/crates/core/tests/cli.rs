use std::path::Path;
use std::process::{Command, Output};

use amitsur::csa::StructureConstantAlgebra;

fn amitsur(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_amitsur")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write_quaternions(dir: &Path) -> String {
    let path = dir.join("hamilton.json");
    let h = StructureConstantAlgebra::hamilton_quaternions();
    std::fs::write(&path, serde_json::to_string(&h).unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn gen_present_trivialize_verify() {
    let dir = tempfile::tempdir().unwrap();
    let p = |name: &str| dir.path().join(name).to_str().unwrap().to_string();
    let out = amitsur(&["gen", "--degree", "2", "--seed", "7", "--output", &p("a.json")]);
    assert_eq!(out.status.code(), Some(0));
    let out = amitsur(&["present", "--input", &p("a.json"), "--output", &p("p.json")]);
    assert_eq!(out.status.code(), Some(0));
    let out = amitsur(&["trivialize", "--input", &p("p.json"), "--output", &p("c.json")]);
    assert_eq!(out.status.code(), Some(0));
    let out = amitsur(&["verify", "--input", &p("c.json")]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["passed"], true);
    assert!(report["checks"].as_array().unwrap().len() >= 8);
}

#[test]
fn split_with_witness_in_degree_three() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let a = a.to_str().unwrap();
    let out = amitsur(&["gen", "--degree", "3", "--seed", "4", "--witness", "split-u", "--output", a]);
    assert_eq!(out.status.code(), Some(0));
    let out = amitsur(&["split", "--input", a]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["d"], 3);
}

#[test]
fn output_is_stable_per_seed() {
    let a = amitsur(&["gen", "--degree", "2", "--seed", "7"]);
    let b = amitsur(&["gen", "--degree", "2", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["A"]["dim"], 4);
}

#[test]
fn quaternions_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let h = write_quaternions(dir.path());
    let out = amitsur(&["split", "--input", &h]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"], "NotACoboundary");
}

#[test]
fn discriminant_bound_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let h = write_quaternions(dir.path());
    let out = amitsur(&["split", "--input", &h, "--max-disc", "1"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["error"], "DiscriminantTooLarge");
}

#[test]
fn malformed_input_exits_four() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"dim\": 2}").unwrap();
    let out = amitsur(&["split", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(json(&out)["error"], "Malformed");
    let out = amitsur(&["gen"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn tampered_certificate_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let c = dir.path().join("c.json");
    amitsur(&["gen", "--degree", "2", "--seed", "1", "--output", a.to_str().unwrap()]);
    amitsur(&["split", "--input", a.to_str().unwrap(), "--output", c.to_str().unwrap()]);
    let mut cert: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&c).unwrap()).unwrap();
    cert["map"]["entries"][0] = serde_json::Value::String("12345".into());
    std::fs::write(&c, cert.to_string()).unwrap();
    let out = amitsur(&["verify", "--input", c.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["passed"], false);
}
