use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join(name)
}

fn dlkh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dlkh")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn manifest(name: &str) -> String {
    data(&format!("data/{name}")).display().to_string()
}

#[test]
fn dkh_json_matches_golden_file() {
    let o = dlkh(&["dkh", "--manifest", &manifest("unknot_k1.txt"), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let got: serde_json::Value = serde_json::from_str(&stdout(&o)).expect("json");
    let want: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(data("golden/dkh_unknot_k1.json")).unwrap()).unwrap();
    assert_eq!(got, want);
    let again = dlkh(&["dkh", "--manifest", &manifest("unknot_k1.txt"), "--format", "json"]);
    assert_eq!(stdout(&o), stdout(&again));
}

#[test]
fn dkh_two_crossings_reports_six_copies() {
    let o = dlkh(&["dkh", "--manifest", &manifest("unknot_k2.txt"), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["N"], 6);
    let bs: std::collections::BTreeSet<i64> = v["homology"].as_array().unwrap().iter().map(|g| g["gradings"]["b"].as_i64().unwrap()).collect();
    assert_eq!(bs.into_iter().collect::<Vec<_>>(), vec![0, 1, 2]);
}

#[test]
fn states_rows() {
    let o = dlkh(&["states", "--manifest", &manifest("unknot_k1.txt")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 13);
    let o = dlkh(&["states", "--pd", "O[1]", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["states"].as_array().unwrap().len(), 2);
}

#[test]
fn kh_of_the_trefoil() {
    let o = dlkh(&["kh", "--pd", "trefoil-left", "--normalize", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let groups = v["homology"].as_array().unwrap();
    let total: u64 = groups.iter().map(|g| g["rank"].as_u64().unwrap()).sum();
    assert_eq!(total, 4);
    assert!(groups.iter().any(|g| g["torsion"] == serde_json::json!([2])));
    assert_eq!(v["euler"], "-1q^-9 + 1q^-5 + 1q^-3 + 1q^-1");
}

#[test]
fn curl_homology_moves_to_zero_when_normalized() {
    let raw = stdout(&dlkh(&["kh", "--pd", "X[2,2,1,1]", "--format", "json"]));
    let norm = stdout(&dlkh(&["kh", "--pd", "X[2,2,1,1]", "--normalize", "--format", "json"]));
    let is = |s: &str| -> Vec<i64> {
        let v: serde_json::Value = serde_json::from_str(s).unwrap();
        v["homology"].as_array().unwrap().iter().map(|g| g["gradings"]["i"].as_i64().unwrap()).collect()
    };
    assert_eq!(is(&norm), vec![0, 0]);
    let r = is(&raw);
    assert!(r.iter().all(|&i| i == r[0]));
}

#[test]
fn guards_exit_with_two() {
    assert_eq!(dlkh(&["states", "--manifest", &manifest("toroidal.txt")]).status.code(), Some(2));
    assert_eq!(dlkh(&["kh", "--pd", "X[1,4,2,3] X[3,6,4,5] X[5,2,6,1]"]).status.code(), Some(2));
    assert_eq!(dlkh(&["dkh", "--manifest", &manifest("mixed.txt")]).status.code(), Some(2));
    assert_eq!(dlkh(&["kh", "--pd", "hopf", "--frobenius", "f5"]).status.code(), Some(2));
    assert_eq!(dlkh(&["kh", "--pd", "X[1,2,3]"]).status.code(), Some(2));
    assert_eq!(dlkh(&["kh"]).status.code(), Some(2));
}

#[test]
fn check_suites_pass() {
    let o = dlkh(&["check", "--suite", "fast", "--pd", "figure-eight"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).lines().all(|l| l.starts_with("PASS")));
    let o = dlkh(&["check", "--frobenius", "f5", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
}

#[test]
fn dot_output_is_a_digraph() {
    let o = dlkh(&["states", "--pd", "hopf", "--format", "dot"]);
    let s = stdout(&o);
    assert!(s.contains("digraph"));
    assert!(s.contains("arrowtail=odot"));
}
