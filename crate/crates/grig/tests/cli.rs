use std::path::PathBuf;
use std::process::{Command, Output};

use grig_core::GrigElement;
use serde_json::{json, Value};

fn grig(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grig")).args(args).env_remove("GRIG_MAX_DEPTH").output().unwrap()
}

fn grig_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grig")).args(args).env(key, value).output().unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn scratch(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("grig-cli-{}-{name}", std::process::id()))
}

#[test]
fn reduce_and_arithmetic() {
    let out = grig(&["reduce", "bcbc"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out), json!(""));
    assert_eq!(json_of(&grig(&["mul", "ab", "ba"])), json!(""));
    assert_eq!(json_of(&grig(&["section", "d", "1"])), json!("b"));
    assert_eq!(json_of(&grig(&["act", "a", "0110"])), json!("1110"));
    assert_eq!(json_of(&grig(&["order", "ab"])), json!(16));
    assert_eq!(json_of(&grig(&["coset", "ab"])), json!("z15"));
    assert_eq!(json_of(&grig(&["km-coset", "d", "--level", "1"])), json!("(z0, z8)"));
}

#[test]
fn printed_words_round_trip() {
    let words = ["abadac", "(ab)^5", "dacab", "cadabacab", "bab", "(ad)^3c"];
    for w in words {
        let g = GrigElement::parse(w).unwrap();
        for (args, expected) in [
            (vec!["reduce", w], g.clone()),
            (vec!["inv", w], g.invert()),
            (vec!["mul", w, "acab"], g.multiply(&GrigElement::parse("acab").unwrap())),
            (vec!["section", w, "01"], g.section(&[0, 1])),
        ] {
            let printed = json_of(&grig(&args)).as_str().unwrap().to_string();
            assert!(GrigElement::parse(&printed).unwrap().equals(&expected), "{args:?} printed {printed:?}");
            assert_eq!(json_of(&grig(&["reduce", &printed])), json!(printed));
        }
    }
}

#[test]
fn conjugacy_decisions() {
    let out = grig(&["conj", "a", "a"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["conjugate"], json!(true));
    assert_eq!(v["level"], json!(0));
    assert_eq!(v["witness_cosets"], json!(["z0", "z3", "z4", "z7"]));

    let out = grig(&["conj", "b", "c"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["witness_cosets"], json!([]));

    let out = grig(&["conj-sub", "b", "aba", "--subgroup-gens", "b,c,d,aba,aca,ada"]);
    assert_eq!(out.status.code(), Some(1));
    let out = grig(&["conj-sub", "abadac", "acabad", "--subgroup-gens", "a,b,c,d", "--km-level", "1"]);
    assert_eq!(json_of(&out)["level"], json!(1));
}

#[test]
fn q_sets_and_stabilization() {
    let v = json_of(&grig(&["qfin", "d", "d", "--depth", "6"]));
    assert_eq!(v["cosets"], json!(["z0", "z1", "z4", "z5", "z8", "z9", "z12", "z13"]));
    let v = json_of(&grig(&["qfin", "a", "a", "--depth", "5", "--km-level", "1"]));
    assert_eq!(v["cosets"].as_array().unwrap().len(), 8);
    let v = json_of(&grig(&["stabilize", "d", "d", "--max-depth", "12"]));
    assert!(v["depth"].as_u64().unwrap() <= 6);
    assert_eq!(v["sets"].as_array().unwrap().len(), 10);
}

#[test]
fn splitting_tree_output() {
    let v = json_of(&grig(&["splitting-tree", "b", "b", "--depth", "5"]));
    assert_eq!(v["q_set"], json!(["z0", "z1", "z8", "z9"]));
    let out = grig(&["splitting-tree", "b", "b", "--depth", "5", "--dot"]);
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("digraph"));
    let path = scratch("tree.dot");
    grig(&["splitting-tree", "b", "b", "--depth", "5", "--out", path.to_str().unwrap()]);
    assert!(std::fs::read_to_string(&path).unwrap().contains("(5; b, b)"));
    std::fs::remove_file(path).ok();
}

#[test]
fn exit_codes() {
    assert_eq!(grig(&["reduce", "abx"]).status.code(), Some(2));
    assert_eq!(grig(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(grig(&["reduce", "a", "--bogus"]).status.code(), Some(2));
    let out = grig(&["quotient", "enumerate", "--depth", "6"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8(out.stderr).unwrap().contains("error"));
    assert_eq!(grig(&["km-coset", "a", "--level", "9"]).status.code(), Some(3));
}

#[test]
fn depth_guard_from_environment() {
    assert_eq!(json_of(&grig(&["quotient", "enumerate", "--depth", "4"]))["order"], json!(4096));
    assert_eq!(grig_env(&["quotient", "enumerate", "--depth", "4"], "GRIG_MAX_DEPTH", "3").status.code(), Some(3));
    assert_eq!(grig_env(&["quotient", "enumerate", "--depth", "3"], "GRIG_MAX_DEPTH", "3").status.code(), Some(0));
    assert_eq!(grig_env(&["reduce", "a"], "GRIG_MAX_DEPTH", "banana").status.code(), Some(2));
    assert_eq!(grig_env(&["reduce", "a"], "GRIG_MAX_DEPTH", "9").status.code(), Some(2));
}

#[test]
fn verification_suites() {
    let v = json_of(&grig(&["verify", "lift-table"]));
    assert_eq!(v["summary"], json!("32/32 entries verified"));
    assert_eq!(v["passed"], json!(true));
    let path = scratch("schreier.dot");
    let out = grig(&["verify", "schreier", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(std::fs::read_to_string(&path).unwrap().contains("z0 -> z7"));
    std::fs::remove_file(path).ok();
    assert_eq!(grig(&["verify", "base-cong"]).status.code(), Some(0));
    assert_eq!(grig(&["verify", "q-agreement"]).status.code(), Some(0));
}

#[test]
fn verify_all_is_green() {
    let out = grig(&["--threads", "2", "verify", "all"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["suites"].as_array().unwrap().len(), 5);
}

#[test]
fn wreath_groups_from_files() {
    let json_path = scratch("c3.json");
    std::fs::write(&json_path, r#"{"order": 3, "table": [[0,1,2],[1,2,0],[2,0,1]], "names": ["e","r","rr"]}"#).unwrap();
    let csv_path = scratch("c2.csv");
    std::fs::write(&csv_path, "0,1\n1,0\n").unwrap();
    let spec = format!("{}:{},C2:D3", csv_path.display(), json_path.display());
    let out = grig(&["--pretty", "verify", "wreath", "--groups", &spec]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.iter().filter(|&&c| c == b'\n').count() > 5);
    let v = json_of(&out);
    assert_eq!(v["products"][0]["order"], json!(24));
    assert_eq!(v["products"][1]["order"], json!(384));

    std::fs::write(&json_path, r#"{"order": 3, "table": [[0,1,2],[1,2,0],[2,1,0]]}"#).unwrap();
    let spec = format!("C2:{}", json_path.display());
    assert_eq!(grig(&["verify", "wreath", "--groups", &spec]).status.code(), Some(2));
    assert_eq!(grig(&["verify", "wreath", "--groups", "C2"]).status.code(), Some(2));
    assert_eq!(grig(&["verify", "wreath", "--groups", "C9:C9"]).status.code(), Some(3));
    std::fs::remove_file(json_path).ok();
    std::fs::remove_file(csv_path).ok();
}
