use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn polycast(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polycast"))
        .args(args)
        .output()
        .expect("spawn polycast")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn gen(dir: &TempDir, name: &str, extra: &[&str]) -> std::path::PathBuf {
    let off = dir.path().join(name);
    let mut args = vec!["generate", "--out", path_str(&off)];
    args.extend_from_slice(extra);
    let out = polycast(&args);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    off
}

#[test]
fn cube_analysis() {
    let dir = TempDir::new().unwrap();
    let off = gen(&dir, "cube.off", &["--kind", "platonic", "--solid", "cube"]);
    let out = polycast(&["analyze", path_str(&off)]);
    assert_eq!(code(&out), 0);
    let r = json(&out);
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["command"], "analyze");
    assert_eq!(r["input_digest"].as_str().unwrap().len(), 64);
    let res = &r["results"];
    let ratio = res["fatness"]["ratio"].as_f64().unwrap();
    assert!((ratio - 3f64.sqrt()).abs() < 1e-9, "{ratio}");
    assert_eq!(res["castable_weak"], 6);
    assert_eq!(res["castable_strong"], 0);
    assert_eq!(res["euler_characteristic"], 2);
}

#[test]
fn explicit_center_outside_is_geometry_error() {
    let dir = TempDir::new().unwrap();
    let off = gen(&dir, "cube.off", &["--kind", "platonic", "--solid", "cube"]);
    let out = polycast(&["analyze", path_str(&off), "--center", "5,0,0"]);
    assert_eq!(code(&out), 3);
    let out = polycast(&["analyze", path_str(&off), "--center", "1,2"]);
    assert_eq!(code(&out), 64);
}

#[test]
fn garbage_and_missing_inputs() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.off");
    std::fs::write(&bad, "not an off file\n1 2 3\n").unwrap();
    assert_eq!(code(&polycast(&["analyze", path_str(&bad)])), 2);
    let missing = dir.path().join("missing.off");
    assert_eq!(code(&polycast(&["analyze", path_str(&missing)])), 2);
}

#[test]
fn degenerate_geometry_exit_code() {
    let dir = TempDir::new().unwrap();
    let flat = dir.path().join("flat.off");
    std::fs::write(&flat, "OFF\n4 1 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n4 0 1 2 3\n").unwrap();
    assert_eq!(code(&polycast(&["analyze", path_str(&flat)])), 3);
}

#[test]
fn cube_cut_search_finds_witness() {
    let dir = TempDir::new().unwrap();
    let off = gen(&dir, "cube.off", &["--kind", "platonic", "--solid", "cube"]);
    let out = polycast(&["cut-search", path_str(&off), "--budget", "50", "--seed", "1"]);
    assert_eq!(code(&out), 0);
    let r = json(&out);
    assert!(r["results"]["witness"].is_object());
    assert_eq!(r["config"]["seed"], 1);
}

#[test]
fn fat_polyhedron_has_no_castable_facet_or_cut() {
    let dir = TempDir::new().unwrap();
    let off = gen(&dir, "fat.off", &["--ratio", "1.07", "--seed", "3"]);
    let out = polycast(&["analyze", path_str(&off)]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["results"]["castable_weak"], 0);

    let out = polycast(&["--compact", "cut-search", path_str(&off), "--budget", "2000", "--seed", "3"]);
    assert_eq!(code(&out), 1);
    let r = json(&out);
    assert!(r["results"]["witness"].is_null());
    assert_eq!(r["results"]["budget"], 2000);
}

#[test]
fn usage_errors() {
    let dir = TempDir::new().unwrap();
    let off = gen(&dir, "cube.off", &["--kind", "platonic", "--solid", "cube"]);
    assert_eq!(code(&polycast(&["cut-search", path_str(&off), "--budget", "0"])), 64);
    assert_eq!(code(&polycast(&["cut-search", path_str(&off), "--strategies", "bogus"])), 64);
    assert_eq!(code(&polycast(&["--strict", "cut-search", path_str(&off)])), 64);
    assert_eq!(code(&polycast(&["--strict", "generate", "--n", "20"])), 64);
    assert_eq!(code(&polycast(&["frobnicate"])), 64);
    assert_eq!(code(&polycast(&["--help"])), 0);
    assert_eq!(code(&polycast(&["--version"])), 0);
}

#[test]
fn bounds_table() {
    let out = polycast(&["bounds"]);
    assert_eq!(code(&out), 0);
    let r = json(&out);
    assert!(r["input_digest"].is_null());
    let cases = r["results"]["table"]["cases"].as_array().unwrap();
    assert_eq!(cases.len(), 5);
    assert!(cases.iter().all(|c| c["matches_reference"] == true));
    let theorem = r["results"]["table"]["theorem"]["root"].as_f64().unwrap();
    assert!((theorem - 1.07218989).abs() < 1e-6);

    let text = polycast(&["bounds", "--text"]);
    assert_eq!(code(&text), 0);
    assert!(String::from_utf8_lossy(&text.stdout).contains("IIb-neg"));
}

#[test]
fn target_ratio_generation_round_trips() {
    let dir = TempDir::new().unwrap();
    let off = gen(&dir, "t.off", &["--ratio", "1.07", "--seed", "7"]);
    let manifest: Value =
        serde_json::from_str(&std::fs::read_to_string(off.with_extension("json")).unwrap()).unwrap();
    let achieved = manifest["achieved_ratio"].as_f64().unwrap();
    assert!(achieved <= 1.07, "{achieved}");
    assert_eq!(manifest["seed"], 7);
    assert_eq!(manifest["spec"]["kind"], "target-ratio");

    let c = &manifest["fatness"]["center"];
    let center = format!("{},{},{}", c[0], c[1], c[2]);
    let out = polycast(&["analyze", path_str(&off), "--center", &center]);
    assert_eq!(code(&out), 0);
    let again = json(&out)["results"]["fatness"]["ratio"].as_f64().unwrap();
    assert!((again - achieved).abs() < 1e-9, "{again} vs {achieved}");
}

#[test]
fn generation_is_deterministic_and_inline_without_out() {
    let a = polycast(&["--compact", "generate", "--n", "40", "--seed", "9"]);
    let b = polycast(&["--compact", "generate", "--n", "40", "--seed", "9"]);
    assert_eq!(code(&a), 0);
    let (ja, jb) = (json(&a), json(&b));
    assert_eq!(ja["results"]["off"], jb["results"]["off"]);
    assert!(ja["results"]["off"].as_str().unwrap().starts_with("OFF"));
    assert_eq!(ja["config"]["spec"]["kind"], "sphere-hull");
}

#[test]
fn unreachable_ratio_exits_negative() {
    let out = polycast(&["generate", "--ratio", "1.0000001", "--cap", "50", "--seed", "1"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}
