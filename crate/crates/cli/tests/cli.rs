use std::path::Path;
use std::process::Command;

use serde_json::{json, Value};

fn indminor(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_indminor")).args(args).env_remove("INDMINOR_SEED").output().unwrap();
    let code = out.status.code().unwrap();
    let value = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (code, value)
}

fn write(dir: &Path, name: &str, v: &Value) -> String {
    let p = dir.join(name);
    std::fs::write(&p, v.to_string()).unwrap();
    p.display().to_string()
}

#[test]
fn gen_examples() {
    let (code, v) = indminor(&["gen", "grid", "--rows", "3", "--cols", "3"]);
    assert_eq!(code, 0);
    assert_eq!((v["result"]["n"].as_u64(), v["result"]["edges"].as_array().unwrap().len()), (Some(9), 12));
    assert_eq!(indminor(&["gen", "complete", "--n", "5"]).1["manifest"]["measured"]["m"], 10);
    assert_eq!(indminor(&["gen", "bs", "--b", "2"]).1["manifest"]["measured"]["m"], 5);
    let a = indminor(&["gen", "random", "--n", "20", "--p", "0.3", "--seed", "4"]).1;
    let b = indminor(&["gen", "random", "--n", "20", "--p", "0.3", "--seed", "4"]).1;
    assert_eq!(a["result"], b["result"]);
}

#[test]
fn invalid_input_exits_two() {
    assert_eq!(indminor(&["gen", "grid", "--rows", "3"]).0, 2);
    assert_eq!(indminor(&["gen", "random", "--n", "5", "--p", "1.5"]).0, 2);
    assert_eq!(indminor(&["separate", "--graph", "nonsense", "--pattern", "K3"]).0, 2);
    assert_eq!(indminor(&["bs", "--b", "0"]).0, 2);
    assert_eq!(indminor(&["--eps", "0", "mis", "--graph", "K3"]).0, 2);
    assert_eq!(indminor(&["frobnicate"]).0, 2);
}

#[test]
fn pipeline_examples() {
    let (code, v) = indminor(&["mis", "--graph", "grid4x4"]);
    assert_eq!((code, v["result"]["size"].as_u64()), (0, Some(8)));
    let (code, v) = indminor(&["imtest", "--graph", "C5", "--pattern", "C4"]);
    assert_eq!(code, 0);
    assert!(v["result"]["model"].is_object());
    let (code, v) = indminor(&["separate", "--graph", "K30", "--pattern", "C4"]);
    assert_eq!(code, 0);
    assert!(v["result"]["separator"].is_object());
}

#[test]
fn reduce_tiny_csp_to_imt() {
    let dir = tempfile::tempdir().unwrap();
    let csp = json!({ "n": 4, "constraints": [
        { "edge": [0, 1], "allowed": [[1, 2], [2, 1], [3, 3]] },
        { "edge": [1, 2], "allowed": [[1, 1], [2, 2]] },
    ]});
    let from = write(dir.path(), "csp.json", &csp);
    let (code, v) = indminor(&["reduce", "--from", &from, "--stage", "imt", "--h", "2"]);
    assert_eq!(code, 0);
    let verdicts = v["manifest"]["verdicts"].as_object().unwrap();
    assert!(verdicts.len() >= 8 && verdicts.values().all(|x| x == true), "{verdicts:?}");
    assert_eq!(v["manifest"]["measured"]["satisfiable"], true);
    for w in v["manifest"]["measured"]["certificate_widths"].as_array().unwrap() {
        assert!(w.as_u64().unwrap() <= 169);
    }
    assert_eq!(v["result"]["compressed"]["attachments"].as_array().unwrap().len(), 18);

    let (code, v) = indminor(&["reduce", "--from", &from, "--stage", "midp"]);
    assert_eq!(code, 0);
    let inst = write(dir.path(), "midp.json", &v["result"]["instance"]);
    let paths = write(dir.path(), "paths.json", &v["result"]["paths"]);
    assert_eq!(indminor(&["verify", "midp", "--instance", &inst, "--cert", &paths]).0, 0);
    let mut broken = v["result"]["paths"].clone();
    broken[0].as_array_mut().unwrap().pop();
    let broken = write(dir.path(), "broken.json", &broken);
    assert_eq!(indminor(&["verify", "midp", "--instance", &inst, "--cert", &broken]).0, 1);
}

#[test]
fn verify_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "good.json", &json!({ "A": [0, 1], "S": [2], "B": [3, 4] }));
    let bad = write(dir.path(), "bad.json", &json!({ "A": [0, 1, 2], "S": [], "B": [3, 4] }));
    assert_eq!(indminor(&["verify", "separation", "--graph", "P5", "--cert", &good]).0, 0);
    assert_eq!(indminor(&["verify", "separation", "--graph", "P5", "--cert", &bad]).0, 1);
    let model = write(dir.path(), "m.json", &json!({ "branch_sets": { "0": [0, 1], "1": [2], "2": [3], "3": [4] } }));
    assert_eq!(indminor(&["verify", "model", "--graph", "C5", "--pattern", "C4", "--cert", &model]).0, 0);
    assert_eq!(indminor(&["verify", "model", "--graph", "C5", "--pattern", "K4", "--cert", &model]).0, 1);
    let (_, v) = indminor(&["bs", "--b", "3", "--partition"]);
    let td = write(dir.path(), "td.json", &v["result"]["partition"]["certificates"][0]);
    assert_eq!(indminor(&["verify", "decomposition", "--graph", "P8", "--cert", &td]).0, 0);
}

#[test]
fn oracle_and_bs() {
    assert_eq!(indminor(&["oracle", "mis", "--graph", "petersen"]).1["result"]["size"], 4);
    assert_eq!(indminor(&["oracle", "pathwidth", "--graph", "C5"]).1["result"]["pathwidth"], 2);
    assert_eq!(indminor(&["oracle", "separator", "--graph", "K6"]).1["result"]["size"], 2);
    assert!(indminor(&["oracle", "minor", "--graph", "B3", "--pattern", "K3"]).1["result"]["model"].is_null());
    assert_eq!(indminor(&["oracle", "pathwidth", "--graph", "B4"]).0, 2);
    let (code, v) = indminor(&["bs", "--b", "1", "--flow"]);
    assert_eq!((code, v["manifest"]["measured"]["congestion"].as_f64()), (0, Some(3.0)));
}

#[test]
fn dot_output() {
    let out = Command::new(env!("CARGO_BIN_EXE_indminor"))
        .args(["--format", "dot", "separate", "--graph", "grid4x4", "--pattern", "K5"])
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("graph separation {") && text.contains("fillcolor=red"));
    let out = Command::new(env!("CARGO_BIN_EXE_indminor")).args(["--format", "dot", "oracle", "mis", "--graph", "K3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn replay_reproduces_runs() {
    let dir = tempfile::tempdir().unwrap();
    let (_, g) = indminor(&["gen", "random", "--n", "30", "--p", "0.5", "--seed", "9"]);
    let graph = write(dir.path(), "g.json", &g);
    let manifest = dir.path().join("run.json").display().to_string();
    let (code, first) = indminor(&["--seed", "3", "separate", "--graph", &graph, "--pattern", "K3", "--manifest-out", &manifest]);
    assert_eq!(code, 0);
    let (code, v) = indminor(&["replay", "--manifest", &manifest]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["identical"], true);
    assert_eq!(v["result"]["replayed"], first["manifest"]["output_sha256"]);

    std::fs::write(&graph, json!({ "version": 1, "n": 3, "edges": [[0, 1]] }).to_string()).unwrap();
    let (code, v) = indminor(&["replay", "--manifest", &manifest]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["inputs_unchanged"], false);
}

#[test]
fn environment_mirrors_flags() {
    let out = Command::new(env!("CARGO_BIN_EXE_indminor"))
        .args(["gen", "random", "--n", "12", "--p", "0.5"])
        .env("INDMINOR_SEED", "4")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["manifest"]["seed"], 4);
    assert_eq!(v["result"], indminor(&["gen", "random", "--n", "12", "--p", "0.5", "--seed", "4"]).1["result"]);
}
