//! CLI surface tests: help coverage, exit-code contract and byte-level
//! determinism of the file-emitting commands.

use std::path::Path;
use std::process::{Command, Output};

fn nsreg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nsreg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn help_lists_flags_for_every_command() {
    let top = nsreg(&["--help"]);
    assert!(top.status.success());
    for cmd in [
        "check-params",
        "derive",
        "region",
        "verify-lemma",
        "simulate",
        "monitor",
    ] {
        assert!(stdout(&top).contains(cmd), "top help lacks {cmd}");
        let help = nsreg(&[cmd, "--help"]);
        assert!(help.status.success(), "{cmd} --help failed");
        let text = stdout(&help);
        assert!(text.contains("--"), "{cmd} help lists no flags");
    }
    assert!(stdout(&nsreg(&["check-params", "--help"])).contains("--alpha"));
    assert!(stdout(&nsreg(&["simulate", "--help"])).contains("--config"));
    assert!(stdout(&nsreg(&["monitor", "--help"])).contains("--threshold"));
}

#[test]
fn exit_codes_follow_the_contract() {
    // 0: success.
    assert!(nsreg(&["check-params", "--theorem", "t11i", "--alpha", "3", "--beta", "3"])
        .status
        .success());
    // 1: inadmissible spec.
    let out = nsreg(&["check-params", "--theorem", "t11ii", "--alpha", "3", "--beta", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("admissible=false"));
    assert!(stdout(&out).contains("alpha<=beta"));
    // 1: unknown command, with usage text.
    let out = nsreg(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("Usage"), "no usage text: {err}");
    // 2: missing input file.
    let out = nsreg(&["simulate", "--config", "does-not-exist.cfg"]);
    assert_eq!(out.status.code(), Some(2));
    // 1: config validation failure.
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "grid.n = 16\nnu = 0.1\ndt = 0.01\nt_end = 0.1\ninit.kind = taylor\nsnapshot_every = 1\nout.dir = x\nwat = 1\n").unwrap();
    let out = nsreg(&["simulate", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("wat"));
}

#[test]
fn check_params_prints_exact_fractions() {
    let out = nsreg(&["check-params", "--theorem", "t13", "--alpha", "2", "--s", "3.5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for needle in [
        "admissible=true",
        "beta=2.666667 (8/3)",
        "p=2.666667 (8/3)",
        "scaling_sum=2",
        "r=22/7",
        "theta=1/15",
        "a=7/4",
        "t=56/3",
    ] {
        assert!(text.contains(needle), "missing '{needle}' in:\n{text}");
    }
}

#[test]
fn derive_handles_fixed_and_degenerate_contexts() {
    let out = nsreg(&["derive", "--context", "t11ii", "--alpha", "2", "--beta", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("r=2.500000 (5/2)"), "{text}");
    assert!(text.contains("t=inf"), "{text}");
    // Wrong fixed s is rejected.
    let out = nsreg(&[
        "derive", "--context", "t11i", "--alpha", "2", "--beta", "4", "--s", "3",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

fn file_bytes(path: &Path) -> Vec<u8> {
    std::fs::read(path).unwrap()
}

#[test]
fn region_and_monitor_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let run = nsreg(&[
            "region",
            "--theorem",
            "t11ii",
            "--alpha-max",
            "3",
            "--beta-max",
            "3",
            "--step",
            "0.1",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(run.status.success());
    }
    assert_eq!(file_bytes(&a.join("region.csv")), file_bytes(&b.join("region.csv")));
    assert_eq!(file_bytes(&a.join("region.svg")), file_bytes(&b.join("region.svg")));

    // simulate then monitor twice; both reports byte-identical.
    let traj = dir.path().join("traj");
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        format!(
            "grid.n = 16\nnu = 0.1\ndt = 0.01\nt_end = 0.1\ninit.kind = taylor\n\
             snapshot_every = 5\nout.dir = {}\n",
            traj.display()
        ),
    )
    .unwrap();
    assert!(nsreg(&["simulate", "--config", cfg.to_str().unwrap()])
        .status
        .success());
    let (r1, r2) = (dir.path().join("rep1.csv"), dir.path().join("rep2.csv"));
    for rep in [&r1, &r2] {
        let run = nsreg(&[
            "monitor",
            "--traj",
            traj.to_str().unwrap(),
            "--theorem",
            "t11i",
            "--alpha",
            "2",
            "--beta",
            "4",
            "--threshold",
            "1.0",
            "--out",
            rep.to_str().unwrap(),
        ]);
        assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    }
    let bytes = file_bytes(&r1);
    assert_eq!(bytes, file_bytes(&r2));
    let text = String::from_utf8(bytes).unwrap();
    assert!(text.contains("# spec: theorem=t11i alpha=2 beta=4"));
    assert!(text.contains("periodic box"));
    assert!(text.contains("aggregate,"));
}

#[test]
fn monitor_rejects_inadmissible_spec_via_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let traj = dir.path().join("traj");
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        format!(
            "grid.n = 16\nnu = 0.1\ndt = 0.01\nt_end = 0.05\ninit.kind = taylor\n\
             snapshot_every = 1\nout.dir = {}\n",
            traj.display()
        ),
    )
    .unwrap();
    assert!(nsreg(&["simulate", "--config", cfg.to_str().unwrap()])
        .status
        .success());
    let out = nsreg(&[
        "monitor",
        "--traj",
        traj.to_str().unwrap(),
        "--theorem",
        "t11ii",
        "--alpha",
        "3",
        "--beta",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    // Missing trajectory directory is an I/O failure.
    let out = nsreg(&[
        "monitor",
        "--traj",
        dir.path().join("nope").to_str().unwrap(),
        "--theorem",
        "t11i",
        "--alpha",
        "2",
        "--beta",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(2));
}
