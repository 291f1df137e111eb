//! Drives the built binary: exit codes, output schemas and determinism.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn veriblock(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_veriblock"))
        .args(args)
        .env_remove("VERIBLOCK_EXPERIMENT_P_GOOD")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn header(path: &Path) -> String {
    fs::read_to_string(path).unwrap().lines().next().unwrap_or_default().to_owned()
}

fn small_sweep(dir: &Path) -> String {
    let cfg = dir.join("sweep.toml");
    fs::write(&cfg, "[experiment]\np_good = [0.6, 0.8]\nseeds = [4]\ntotal = 100\nstep = 10\n").unwrap();
    cfg.to_string_lossy().into_owned()
}

#[test]
fn run_scenario_writes_all_artifacts() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("run");
    let o = veriblock(&["run-scenario", "--kind", "random-split", "--n", "40", "--seed", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["chain.bin", "chain.jsonl", "evidence.csv", "balances.csv", "scores.json"] {
        assert!(out.join(f).is_file(), "missing {f}");
    }
    assert_eq!(header(&out.join("evidence.csv")), "incident_id,review_id,reviewer,verdict,x,y,heading,observed_at");
    assert_eq!(header(&out.join("balances.csv")), "account_id,balance");

    let scores: serde_json::Value = serde_json::from_slice(&fs::read(out.join("scores.json")).unwrap()).unwrap();
    let algs: Vec<&str> = scores["scores"].as_array().unwrap().iter().map(|s| s["algorithm"].as_str().unwrap()).collect();
    assert_eq!(algs, ["simple", "filtered-average", "weighted"]);

    for line in fs::read_to_string(out.join("chain.jsonl")).unwrap().lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v["hash"].as_str().unwrap().len() == 64);
    }

    let v = veriblock(&["verify-chain", out.join("chain.bin").to_str().unwrap()]);
    assert_eq!(code(&v), 0);
    assert!(String::from_utf8_lossy(&v.stdout).starts_with("ok:"));
}

#[test]
fn verify_chain_reports_first_bad_height() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("run");
    let o = veriblock(&["run-scenario", "--n", "600", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let dump = out.join("chain.bin");
    let mut bytes = fs::read(&dump).unwrap();
    // Flip a byte near the end: inside the last block's transactions.
    let at = bytes.len() - 10;
    bytes[at] ^= 0x40;
    fs::write(&dump, &bytes).unwrap();
    let v = veriblock(&["verify-chain", dump.to_str().unwrap()]);
    assert_eq!(code(&v), 1);
    let stdout = String::from_utf8_lossy(&v.stdout);
    assert!(stdout.contains("first bad height"), "{stdout}");

    fs::write(&dump, b"not a chain").unwrap();
    assert_eq!(code(&veriblock(&["verify-chain", dump.to_str().unwrap()])), 3);
    assert_eq!(code(&veriblock(&["verify-chain", tmp.path().join("absent.bin").to_str().unwrap()])), 3);
}

#[test]
fn config_errors_exit_two_and_name_the_key() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("bad.toml");
    fs::write(&cfg, "[trust]\nthreshold = 1.5\n").unwrap();
    let o = veriblock(&["run-scenario", "--config", cfg.to_str().unwrap(), "--out", tmp.path().join("o").to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("trust.threshold"));

    fs::write(&cfg, "[experiment]\np_good = []\n").unwrap();
    let o = veriblock(&["run-experiment", "--config", cfg.to_str().unwrap(), "--out", tmp.path().join("o").to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("experiment.p_good"));

    fs::write(&cfg, "[ledger]\nblock_size = 3\n").unwrap();
    let o = veriblock(&["run-experiment", "--config", cfg.to_str().unwrap(), "--out", tmp.path().join("o").to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("block_size"));

    assert_eq!(code(&veriblock(&["run-scenario", "--kind", "sideways"])), 2);
}

#[test]
fn unwritable_output_exits_three() {
    let tmp = tempfile::tempdir().unwrap();
    let blocker = tmp.path().join("file");
    fs::write(&blocker, "").unwrap();
    let out = blocker.join("sub");
    let o = veriblock(&["run-scenario", "--n", "20", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    let o = veriblock(&["run-experiment", "--config", &small_sweep(tmp.path()), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
}

#[test]
fn run_experiment_is_deterministic_with_expected_schema() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_sweep(tmp.path());
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for out in [&a, &b] {
        let o = veriblock(&["run-experiment", "--config", &cfg, "--out", out.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    for name in ["series_p60_s4.csv", "series_p80_s4.csv", "summary.csv"] {
        assert_eq!(fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap(), "{name}");
    }
    assert_eq!(header(&a.join("series_p60_s4.csv")), "n,alg1,alg2,alg3");
    let summary = fs::read_to_string(a.join("summary.csv")).unwrap();
    let lines: Vec<&str> = summary.lines().collect();
    assert_eq!(lines[0], "p_good,seed,n,alg1,alg2,alg3");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("0.6,4,100,"));

    let o = veriblock(&["run-experiment", "--config", &cfg, "--seed", "9", "--out", tmp.path().join("c").to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(tmp.path().join("c/series_p80_s9.csv").is_file());
}

#[test]
fn env_overrides_apply() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("env");
    let o = Command::new(env!("CARGO_BIN_EXE_veriblock"))
        .args(["run-experiment", "--config", &small_sweep(tmp.path()), "--out", out.to_str().unwrap()])
        .env("VERIBLOCK_EXPERIMENT_P_GOOD", "[0.5]")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.join("series_p50_s4.csv").is_file());
    assert!(!out.join("series_p60_s4.csv").exists());
}
