use serde_json::Value;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_genus-cantor"))
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("genus-cantor-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&d);
    d
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn seq_genus_six() {
    let o = run(&["seq", "--genus", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["a"], serde_json::json!([1, 2, 1, 1, 2, 1]));
    assert_eq!(v["N"], 1089);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["mode"], "admissible");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["seq", "--genus", "0"]).status.code(), Some(2));
    assert_eq!(run(&["certify", "--genus", "1", "--lemmas", "bogus"]).status.code(), Some(2));
    let d = scratch("usage");
    let out = d.to_str().unwrap();
    let o = run(&["export", "--genus", "1", "--N", "9", "--what", "level", "--prefix", "1,2", "--out", out]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["certify", "--genus", "2", "--N", "10", "--lemmas", "sigma", "--out", out]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn certify_passes_and_is_reproducible() {
    let d = scratch("certify");
    let out = d.to_str().unwrap();
    let args = ["certify", "--genus", "1", "--lemmas", "sigma,tau-sep,conjugation", "--out", out];
    assert_eq!(run(&args).status.code(), Some(0));
    let path = d.join("sigma_g1_N529_d1.json");
    let first = fs::read(&path).unwrap();
    let v = json(&path);
    assert_eq!(v["certificate"]["status"], "pass");
    assert_eq!(v["mode"], "admissible");
    assert!(v["certificate"].get("elapsed_ms").is_none());
    assert_eq!(run(&args).status.code(), Some(0));
    assert_eq!(first, fs::read(&path).unwrap());
    fs::remove_dir_all(&d).unwrap();
}

#[test]
fn figure_mode_nesting_fails() {
    let d = scratch("figure");
    let out = d.to_str().unwrap();
    let o = run(&["certify", "--genus", "1", "--N", "9", "--lemmas", "nesting", "--out", out]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&d.join("nesting_g1_N9_d1.json"));
    assert_eq!(v["mode"], "figure");
    assert!(v["mode_note"].as_str().unwrap().starts_with("FIGURE MODE"));
    assert!(v["certificate"]["witness"].is_object());
    fs::remove_dir_all(&d).unwrap();
}

#[test]
fn folding_on_odd_genus_is_not_applicable() {
    let d = scratch("fold");
    let out = d.to_str().unwrap();
    let o = run(&["certify", "--genus", "1", "--N", "9", "--lemmas", "folding", "--out", out]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&d.join("folding_g1_N9_d1.json"));
    assert_eq!(v["certificate"]["status"], "not-applicable");
    fs::remove_dir_all(&d).unwrap();
}

#[test]
fn linking_writes_matrix() {
    let d = scratch("link");
    let out = d.to_str().unwrap();
    let o = run(&["certify", "--genus", "1", "--N", "9", "--lemmas", "linking", "--out", out]);
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(d.join("linking-matrix_g1_N9_d1.csv")).unwrap();
    assert!(csv.lines().count() > 1);
    assert_eq!(json(&d.join("linking_g1_N9_d1.json"))["linking_matrix"], "linking-matrix_g1_N9_d1.csv");
    fs::remove_dir_all(&d).unwrap();
}

fn objects(obj: &str) -> usize {
    obj.lines().filter(|l| l.starts_with("o ")).count()
}

#[test]
fn exports() {
    let d = scratch("export");
    let out = d.to_str().unwrap();

    assert!(run(&["export", "--genus", "2", "--what", "curves", "--out", out]).status.success());
    let v = json(&d.join("curves_g2_N625_d0.json"));
    let comps = v["components"].as_array().unwrap();
    assert_eq!(comps.len(), 1);
    assert_eq!(comps[0]["loops"].as_array().unwrap().len(), 2);

    let level = ["export", "--genus", "1", "--N", "9", "--what", "level", "--depth", "1", "--out", out];
    assert!(run(&level).status.success());
    let obj_path = d.join("level_g1_N9_d1.obj");
    let obj = fs::read(&obj_path).unwrap();
    assert_eq!(objects(std::str::from_utf8(&obj).unwrap()), 36);
    let m = json(&d.join("level_g1_N9_d1.json"));
    assert_eq!(m["meshes"], 36);
    assert_eq!(m["euler_characteristic"], 0);
    assert_eq!(m["components"].as_array().unwrap().len(), 36);
    assert!(run(&level).status.success());
    assert_eq!(obj, fs::read(&obj_path).unwrap());

    let tubes = ["export", "--genus", "1", "--N", "9", "--what", "tubes", "--depth", "2", "--prefix", "3", "--out", out];
    assert!(run(&tubes).status.success());
    let obj = fs::read_to_string(d.join("tubes_g1_N9_d2.obj")).unwrap();
    assert_eq!(objects(&obj), 1 + 1 + 36);
    assert!(obj.contains("o T_3_36\n"));
    fs::remove_dir_all(&d).unwrap();
}

#[test]
fn export_caps_component_count() {
    let d = scratch("cap");
    let o = run(&["export", "--genus", "1", "--what", "level", "--depth", "2", "--out", d.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
}
