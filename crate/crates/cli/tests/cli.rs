use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bfpp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bfpp"))
        .args(args)
        .env_remove("BFPP_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn jsonl(path: &Path) -> Vec<Value> {
    fs::read_to_string(path).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn step_lines(path: &Path) -> Vec<String> {
    fs::read_to_string(path).unwrap().lines().filter(|l| l.contains("\"type\":\"step\"")).map(String::from).collect()
}

#[test]
fn validate_reports_each_program() {
    let o = bfpp(&["validate", "0!,1!", "+[-]"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("ok\t") && out.contains("5 tokens"), "{out}");

    let o = bfpp(&["validate", "+[", "+x"]);
    assert_eq!(o.status.code(), Some(2));
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with("invalid\t")).count(), 2, "{out}");
    assert!(out.contains("position 1"), "{out}");

    let o = bfpp(&["validate", "--dialect", "bf+no-shorthands", "0!"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn run_writes_trace_and_manifest() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("r");
    let o = bfpp(&["run", "--env", "cartpole", "--program", "0!,1!", "--episodes", "2", "--out-dir", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("mean reward"));
    let lines = jsonl(&out.join("trace.jsonl"));
    let footers: Vec<_> = lines.iter().filter(|l| l["type"] == "footer").collect();
    assert_eq!(footers.len(), 2);
    for f in &footers {
        let steps = lines.iter().filter(|l| l["type"] == "step" && l["episode"] == f["episode"]).count();
        assert_eq!(f["steps"].as_u64().unwrap() as usize, steps);
        assert_eq!(f["program"], "0!,1!");
    }
    let manifest: Value = serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "run");
    assert_eq!(manifest["outputs"][0], "trace.jsonl");
}

#[test]
fn run_reads_a_program_file_by_index() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("p.bfpp");
    fs::write(&file, "# comment\n>!a\n\n-..\n").unwrap();
    let out = dir.path().join("r");
    let o = bfpp(&["run", "--env", "mountaincar", "--file", file.to_str().unwrap(), "--index", "1", "--out-dir", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let footer = jsonl(&out.join("trace.jsonl")).pop().unwrap();
    assert_eq!(footer["program"], "-..");
    let o = bfpp(&["run", "--env", "mountaincar", "--file", file.to_str().unwrap(), "--index", "2", "--out-dir", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn equivalent_mountain_car_programs_trace_identically() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for (prog, out) in [("-..~+", &a), ("-..", &b)] {
        let arg = format!("--program={prog}");
        let o = bfpp(&["run", "--env", "mountaincar", &arg, "--episodes", "2", "--seed", "4", "--out-dir", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let sa = step_lines(&a.join("trace.jsonl"));
    assert!(!sa.is_empty());
    assert_eq!(sa, step_lines(&b.join("trace.jsonl")));
}

#[test]
fn train_writes_every_output() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("t");
    let o = bfpp(&[
        "train", "--env", "cartpole", "--episodes", "40", "--hidden", "8", "--final-episodes", "3", "--seed", "2",
        "--out-dir", out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("best program") && text.contains("over 3 episodes"), "{text}");
    for f in ["checkpoint.json", "queue.json", "learning_curve.csv", "train_log.jsonl", "result.json", "manifest.json"] {
        assert!(out.join(f).exists(), "{f}");
    }
    assert_eq!(jsonl(&out.join("train_log.jsonl")).len(), 40);
    let curve = fs::read_to_string(out.join("learning_curve.csv")).unwrap();
    assert_eq!(curve.lines().next(), Some("episode,best_so_far"));
    let best: Vec<f64> = curve.lines().skip(1).filter_map(|l| l.split(',').nth(1)?.parse().ok()).collect();
    assert!(best.windows(2).all(|w| w[1] >= w[0]));

    // eval on the checkpoint is repeatable
    let ck = out.join("checkpoint.json");
    let e1 = bfpp(&["eval", "--checkpoint", ck.to_str().unwrap(), "--episodes", "5"]);
    let e2 = bfpp(&["eval", "--checkpoint", ck.to_str().unwrap(), "--episodes", "5"]);
    assert!(e1.status.success(), "{}", stderr(&e1));
    assert_eq!(stdout(&e1), stdout(&e2));
    assert!(stdout(&e1).contains("score"));
}

#[test]
fn random_search_and_taxi_run_to_the_cap() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("t");
    let o = bfpp(&[
        "train", "--env", "taxi", "--synthesizer", "random", "--episodes", "30", "--final-episodes", "2",
        "--out-dir", out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("episodes 30\tstop EpisodeCap"), "{}", stdout(&o));
    let result: Value = serde_json::from_str(&fs::read_to_string(out.join("result.json")).unwrap()).unwrap();
    assert_eq!(result["synthesizer"], "random");
    let o = bfpp(&["train", "--synthesizer", "annealing", "--out-dir", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn empty_and_corrupt_checkpoints_fail_explicitly() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("t");
    let o = bfpp(&["train", "--episodes", "0", "--hidden", "4", "--out-dir", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("queue is empty") || stderr(&o).contains("empty"), "{}", stderr(&o));

    let ck = out.join("checkpoint.json");
    let o = bfpp(&["eval", "--checkpoint", ck.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("empty"), "{}", stderr(&o));

    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"format\": \"something-else\"}").unwrap();
    let o = bfpp(&["eval", "--checkpoint", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("c.toml");
    fs::write(&cfg, "env = \"mountaincar\"\nseed = 9\nepisodes = 12\nhidden = 4\nfinal_episodes = 1\n").unwrap();
    let out = dir.path().join("t");
    let o = bfpp(&["train", "--config", cfg.to_str().unwrap(), "--episodes", "6", "--out-dir", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let manifest: Value = serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["seed"], 9);
    assert_eq!(manifest["config"]["episodes"], 6);
    assert_eq!(manifest["config"]["hidden"], 4);
    assert_eq!(jsonl(&out.join("train_log.jsonl")).len(), 6);

    fs::write(&cfg, "episodes = \"many\"\n").unwrap();
    let o = bfpp(&["train", "--config", cfg.to_str().unwrap(), "--out-dir", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn out_dir_variable_is_respected() {
    let dir = TempDir::new().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_bfpp"))
        .args(["run", "--env", "taxi", "--program", "@!", "--seed", "3"])
        .env("BFPP_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(dir.path().join("run-taxi-seed3").join("trace.jsonl").exists());
}
