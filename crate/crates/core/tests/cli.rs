//! End-to-end runs of the command-line binary: subcommand outputs, exit
//! codes, JSON determinism, and the model-export round trip.

use std::path::PathBuf;
use std::process::{Command, Output};

fn koszul(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_koszul"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

fn tmp(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("koszul-cli-{}-{name}", std::process::id()))
}

#[test]
fn betti_text_and_json() {
    let json_path = tmp("betti.json");
    let out = koszul(&[
        "betti",
        "--model",
        "rnc:3",
        "--field",
        "qq",
        "--no-cache",
        "--json",
        json_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("rnc:3"));
    let value: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    let entries = value["entries"].as_array().unwrap();
    let lookup = |p: u64, q: u64| {
        entries
            .iter()
            .find(|e| e[0] == p && e[1] == q)
            .map(|e| e[2].as_u64().unwrap())
    };
    assert_eq!(lookup(1, 1), Some(3));
    assert_eq!(lookup(2, 1), Some(2));
    assert_eq!(lookup(0, 0), Some(1));
    let _ = std::fs::remove_file(&json_path);
}

#[test]
fn betti_json_is_deterministic_modulo_timestamp() {
    let (a_path, b_path) = (tmp("det-a.json"), tmp("det-b.json"));
    for path in [&a_path, &b_path] {
        let out = koszul(&[
            "betti",
            "--model",
            "ci:2,3",
            "--seed",
            "3",
            "--no-cache",
            "--json",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    let strip = |p: &PathBuf| {
        let mut v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
        v.as_object_mut().unwrap().remove("generated_at");
        serde_json::to_string(&v).unwrap()
    };
    assert_eq!(strip(&a_path), strip(&b_path));
    let _ = std::fs::remove_file(&a_path);
    let _ = std::fs::remove_file(&b_path);
}

#[test]
fn cache_does_not_change_values() {
    let dir = tmp("cache-dir");
    let _ = std::fs::remove_dir_all(&dir);
    let run = |_label: &str| {
        let path = tmp("cached.json");
        let out = koszul(&[
            "betti",
            "--model",
            "mukai:6",
            "--pmax",
            "2",
            "--qmax",
            "1",
            "--cache",
            dir.to_str().unwrap(),
            "--json",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        let mut v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        v.as_object_mut().unwrap().remove("generated_at");
        let _ = std::fs::remove_file(&path);
        serde_json::to_string(&v).unwrap()
    };
    let cold = run("cold");
    assert!(dir.exists(), "cache directory is populated");
    let warm = run("warm");
    assert_eq!(cold, warm);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn verify_thm45_exit_codes() {
    let out = koszul(&["verify", "thm45", "--k", "2", "--seeds", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("PASS"));
    // an inadmissible working field is an assertion failure, exit 1
    let out = koszul(&["verify", "thm45", "--k", "3", "--field", "gfp:3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_duality_and_rem46() {
    let out = koszul(&["verify", "duality", "--model", "ci:2,3"]);
    assert_eq!(out.status.code(), Some(0));
    let json_path = tmp("rem46.json");
    let out = koszul(&[
        "verify",
        "rem46",
        "--seeds",
        "1",
        "--json",
        json_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(v["claim"], "rem46-genus5");
    let _ = std::fs::remove_file(&json_path);
}

#[test]
fn bott_json_lines() {
    let out = koszul(&["bott", "--n", "5", "--quotient", "2", "--weight", "1,0|0,0,0"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["degree"], 0);
    assert_eq!(v["dim"], 5);
    let out = koszul(&["bott", "--n", "4", "--quotient", "1", "--weight", "-1|0,0,0"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["zero"], true);
}

#[test]
fn chern_reports() {
    for check in ["tango", "thm44"] {
        let out = koszul(&["chern", "--k", "4", "--sigma", "0", "--check", check]);
        assert_eq!(out.status.code(), Some(0), "{check}");
        let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
        assert_eq!(v["pass"], true, "{check}");
    }
    let out = koszul(&["chern", "--k", "3", "--sigma", "1", "--check", "tango"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn model_list_and_export_round_trip() {
    let out = koszul(&["model", "list"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for kind in ["rnc:3", "ci:2,3", "mukai:6", "mukai:8", "section:mukai:6"] {
        assert!(text.contains(kind), "listing mentions {kind}");
    }
    let exported = tmp("export.json");
    let out = koszul(&[
        "model",
        "export",
        "--model",
        "mukai:6",
        "--seed",
        "7",
        "--json",
        exported.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    // the exported presentation feeds back into the table computation
    let out = koszul(&[
        "betti",
        "--input",
        exported.to_str().unwrap(),
        "--pmax",
        "2",
        "--qmax",
        "1",
        "--no-cache",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("6"));
    let _ = std::fs::remove_file(&exported);
}

#[test]
fn usage_and_resource_exit_codes() {
    let out = koszul(&["betti", "--model", "nonsense:9"]);
    assert_eq!(out.status.code(), Some(2));
    let out = koszul(&["betti", "--model", "rnc:3", "--field", "gfp:91"]);
    assert_eq!(out.status.code(), Some(2));
    let out = koszul(&["verify", "unknown-claim"]);
    assert_eq!(out.status.code(), Some(2));
    let out = koszul(&["betti"]);
    assert_eq!(out.status.code(), Some(2));
    // a zero budget cannot fit any elimination: resource exit
    let out = koszul(&[
        "betti",
        "--model",
        "rnc:3",
        "--budget-mb",
        "0",
        "--no-cache",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("hole"));
}
