use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_nearram");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("NEARRAM_SEED").output().unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = run(&full);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    });
    (out.status.code().unwrap(), v)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn petersen(dir: &Path) -> std::path::PathBuf {
    let p = dir.join("petersen.txt");
    let mut f = std::fs::File::create(&p).unwrap();
    writeln!(f, "10 3").unwrap();
    for (u, v) in [
        (0, 1), (1, 2), (2, 3), (3, 4), (0, 4),
        (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
        (5, 7), (7, 9), (6, 9), (6, 8), (5, 8),
    ] {
        writeln!(f, "{u} {v}").unwrap();
    }
    p
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["generate", "--n", "10", "--out", "/dev/null"]).status.code(), Some(2));
    assert_eq!(run(&["pipeline", "--d", "3", "--eps", "0.3"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["spectrum", "--in", "/nonexistent/graph.txt"]).status.code(), Some(2));
}

#[test]
fn petersen_is_ramanujan() {
    let dir = tempfile::tempdir().unwrap();
    let p = petersen(dir.path());
    let (code, v) = json(&["spectrum", "--in", s(&p)]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], "nearram.run/1");
    assert_eq!(v["outputs"]["verdict"], "ramanujan");
    assert!((v["outputs"]["lambda"].as_f64().unwrap() - 2.0).abs() < 1e-9);

    let (code, v) = json(&["check-bicycle", "--in", s(&p)]);
    assert_eq!(code, 0);
    assert_eq!(v["outputs"]["radius"], 1);
    let (code, _) = json(&["check-bicycle", "--in", s(&p), "--radius", "2"]);
    assert_eq!(code, 1);
}

#[test]
fn generate_then_analyse() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    let (code, v) = json(&["generate", "--n", "40", "--d", "3", "--seed", "00ff", "--simple", "--out", s(&g)]);
    assert_eq!(code, 0);
    assert_eq!(v["outputs"]["simple"], true);
    assert_eq!(v["seeds"]["seed"], "00ff");
    let first = std::fs::read_to_string(&g).unwrap();
    assert!(first.starts_with("40 3\n"));
    assert_eq!(first.lines().count(), 61);

    // Same seed, same file.
    let g2 = dir.path().join("g2.txt");
    run(&["generate", "--n", "40", "--d", "3", "--seed", "00ff", "--simple", "--out", s(&g2)]);
    assert_eq!(first, std::fs::read_to_string(&g2).unwrap());

    let (code, v) = json(&["check-ihara-bass", "--in", s(&g)]);
    assert_eq!(code, 0, "{v}");
    assert!(v["outputs"]["max_residual"].as_f64().unwrap() <= 1e-8);

    let l = dir.path().join("lift.txt");
    let (code, v) = json(&["lift", "--in", s(&g), "--seed", "01", "--out", s(&l), "--verify-union"]);
    assert_eq!(code, 0);
    assert_eq!(v["outputs"]["vertices"], 80);
    assert_eq!(v["outputs"]["union_holds"], true);
    assert!(std::fs::read_to_string(&l).unwrap().starts_with("80 3\n"));

    let (code, v) = json(&["hike-experiment", "--in", s(&g), "--ell", "2", "--mode", "classify"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["outputs"]["violations"].as_array().unwrap().len(), 0);
}

#[test]
fn signed_files_and_identity() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("k4.txt");
    std::fs::write(&p, "4 3\n0 1 1\n0 2 -1\n0 3 1\n1 2 1\n1 3 1\n2 3 -1\n").unwrap();
    let (code, v) = json(&["spectrum", "--in", s(&p), "--signed"]);
    assert_eq!(code, 0);
    assert_eq!(v["outputs"]["signed"], true);
    let (code, v) = json(&["hike-experiment", "--in", s(&p), "--ell", "2", "--mode", "identity"]);
    assert_eq!(code, 0, "{v}");
    let l = dir.path().join("l.txt");
    let (code, v) = json(&["lift", "--in", s(&p), "--file-signs", "--out", s(&l)]);
    assert_eq!(code, 0);
    assert_eq!(v["outputs"]["signs"], serde_json::json!([1, -1, 1, 1, 1, -1]));
}

#[test]
fn seed_falls_back_to_environment() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    let out = Command::new(BIN)
        .args(["generate", "--n", "20", "--d", "4", "--out", s(&a)])
        .env("NEARRAM_SEED", "abcd")
        .output()
        .unwrap();
    assert!(out.status.success());
    run(&["generate", "--n", "20", "--d", "4", "--seed", "abcd", "--out", s(&b)]);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn pipeline_report_drives_the_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("run.json");
    let graph = dir.path().join("g.txt");
    let cfg = dir.path().join("cfg.json");
    let csv = dir.path().join("stages.csv");
    let out = run(&[
        "--report", s(&report), "pipeline", "--N", "512", "--d", "3", "--eps", "0.3", "--s1", "0a", "--s2", "0b",
        "--out", s(&graph), "--config-out", s(&cfg), "--csv", s(&csv),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(r["outputs"]["final_vertices"], 512);
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 1 + r["outputs"]["stages"].as_array().unwrap().len());

    let text = std::fs::read_to_string(&graph).unwrap();
    let mut adj = vec![Vec::new(); 512];
    for line in text.lines().skip(1) {
        let e: Vec<usize> = line.split_whitespace().map(|x| x.parse().unwrap()).collect();
        adj[e[0]].push(e[1]);
        adj[e[1]].push(e[0]);
    }

    let mut child = Command::new(BIN)
        .args(["oracle", "--config", s(&report), "--batch"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    {
        let mut stdin = child.stdin.take().unwrap();
        for v in 0..512 {
            writeln!(stdin, "{v}").unwrap();
        }
    }
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let lines: Vec<&str> = std::str::from_utf8(&out.stdout).unwrap().lines().collect();
    assert_eq!(lines.len(), 512);
    for line in lines {
        let q: Value = serde_json::from_str(line).unwrap();
        let v = q["vertex"].as_u64().unwrap() as usize;
        let mut nb: Vec<usize> = q["neighbors"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap() as usize).collect();
        nb.sort_unstable();
        let mut want = adj[v].clone();
        want.sort_unstable();
        assert_eq!(nb, want, "vertex {v}");
    }

    // A bare configuration needs the effective seeds spelled out.
    assert_eq!(run(&["oracle", "--config", s(&cfg), "--vertex", "3"]).status.code(), Some(2));
    let base = r["seeds"]["base"].as_str().unwrap();
    let signing = r["seeds"]["signing"].as_str().unwrap();
    let out = run(&["oracle", "--config", s(&cfg), "--s1", base, "--s2", signing, "--vertex", "3", "--port", "1"]);
    assert!(out.status.success());
    let id: usize = String::from_utf8(out.stdout).unwrap().trim().parse().unwrap();
    assert!(adj[3].contains(&id));

    // Replaying the recorded argv reproduces the run.
    let argv: Vec<String> = r["argv"].as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect();
    let replay = dir.path().join("replay.txt");
    let argv: Vec<String> = argv
        .into_iter()
        .map(|a| if a == s(&graph) { s(&replay).to_string() } else { a })
        .collect();
    assert!(Command::new(BIN).args(&argv).output().unwrap().status.success());
    assert_eq!(text, std::fs::read_to_string(&replay).unwrap());
}

#[test]
fn simplicity_reports_rate() {
    let (code, v) = json(&["simplicity", "--n", "200", "--d", "3", "--trials", "2000", "--seed", "07", "--tol", "0.05"]);
    assert_eq!(code, 0, "{v}");
    let rate = v["outputs"]["estimate"]["rate"].as_f64().unwrap();
    assert!((rate - (-2.0f64).exp()).abs() < 0.05);
}
