use std::path::Path;
use std::process::{Command, Output};

fn krqt(args: &[&str], cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_krqt"))
        .args(args)
        .env("KRQT_CACHE_DIR", cache)
        .output()
        .expect("spawn krqt")
}

fn json_terms(out: &Output) -> u64 {
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    v["num_terms"].as_u64().unwrap()
}

#[test]
fn char_term_counts() {
    let tmp = tempfile::tempdir().unwrap();
    let cases: &[(&[&str], u64)] = &[
        (&["--rank", "3", "--i", "3", "--k", "1", "--j", "0"], 4),
        (&["--rank", "1", "--i", "1", "--k", "2", "--j", "0"], 3),
        (&["--rank", "3", "--i", "2", "--k", "1", "--j", "-1"], 6),
    ];
    for (args, n) in cases {
        let mut full = vec!["char", "--format", "json"];
        full.extend_from_slice(args);
        let out = krqt(&full, tmp.path());
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert_eq!(json_terms(&out), *n, "{args:?}");
    }
}

#[test]
fn zero_height_prints_one() {
    let tmp = tempfile::tempdir().unwrap();
    let out = krqt(
        &["char", "--rank", "2", "--i", "1", "--k", "0", "--j", "0"],
        tmp.path(),
    );
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "1");
}

#[test]
fn usage_errors_exit_two() {
    let tmp = tempfile::tempdir().unwrap();
    let bad: &[&[&str]] = &[
        &["char", "--rank", "1", "--i", "1", "--k", "1", "--j", "1"],
        &["char", "--rank", "2", "--i", "3", "--k", "1", "--j", "0"],
        &["char", "--rank", "0", "--i", "1", "--k", "1", "--j", "0"],
        &["char", "--rank", "1"],
        &["verify", "nonsense"],
        &["verify", "commute", "--rank", "99"],
        &["verify", "compat", "--kmax", "1"],
        &["verify", "commute", "--jobs", "0"],
        &["tables", "--rank", "2"],
        &["tables", "--rank", "1", "--n", "1"],
        &["frobnicate"],
    ];
    for args in bad {
        let out = krqt(args, tmp.path());
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn cached_result_matches_fresh_and_survives_corruption() {
    let tmp = tempfile::tempdir().unwrap();
    let args = [
        "char", "--rank", "3", "--i", "2", "--k", "2", "--j", "-1", "--format", "json",
    ];
    let fresh = krqt(&[&args[..], &["--no-cache"]].concat(), tmp.path());
    assert!(fresh.status.success());
    assert!(std::fs::read_dir(tmp.path()).unwrap().next().is_none());

    let miss = krqt(&args, tmp.path());
    let hit = krqt(&args, tmp.path());
    assert_eq!(fresh.stdout, miss.stdout);
    assert_eq!(fresh.stdout, hit.stdout);

    let entries = walk(tmp.path());
    assert_eq!(entries.len(), 1);
    for entry in entries {
        std::fs::write(&entry, b"{\"schema\":\"krqt-char-cache/1\"}").unwrap();
    }
    let after = krqt(&args, tmp.path());
    assert!(after.status.success());
    assert_eq!(fresh.stdout, after.stdout);
}

fn walk(dir: &Path) -> Vec<std::path::PathBuf> {
    let mut out = Vec::new();
    for e in std::fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        if p.is_dir() {
            out.extend(walk(&p));
        } else {
            out.push(p);
        }
    }
    out
}

#[test]
fn verify_json_is_deterministic_across_thread_counts() {
    let tmp = tempfile::tempdir().unwrap();
    let run = |jobs: &str| {
        let out = krqt(
            &[
                "verify", "commute", "--rank", "2", "--kmax", "3", "--jobs", jobs,
            ],
            tmp.path(),
        );
        assert_eq!(out.status.code(), Some(0));
        out.stdout
    };
    let one = run("1");
    assert_eq!(one, run("4"));
    assert_eq!(one, run("4"));
    for line in String::from_utf8(one).unwrap().lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["passed"], true);
        assert!(v.get("wall_ms").is_none());
    }
}

#[test]
fn timings_flag_adds_wall_time() {
    let tmp = tempfile::tempdir().unwrap();
    let out = krqt(&["verify", "counterexample", "--timings"], tmp.path());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["wall_ms"].as_f64().unwrap() >= 0.0);
}

#[test]
fn passing_sweeps_exit_zero() {
    let tmp = tempfile::tempdir().unwrap();
    let sweeps: &[&[&str]] = &[
        &["verify", "counterexample"],
        &["verify", "compat", "--rank", "1", "--kmax", "6"],
        &[
            "verify",
            "tsystem",
            "--rank",
            "2",
            "--kmax",
            "2",
            "--jwindow",
            "2",
        ],
        &[
            "verify",
            "mutation",
            "--rank",
            "2",
            "--kmax",
            "2",
            "--jwindow",
            "2",
        ],
        &["verify", "thm31", "--rank", "1", "--kmax", "2"],
    ];
    for args in sweeps {
        let out = krqt(args, tmp.path());
        assert_eq!(out.status.code(), Some(0), "{args:?}");
    }
    let out = krqt(
        &[
            "verify", "compat", "--rank", "1", "--kmax", "6", "--format", "pretty",
        ],
        tmp.path(),
    );
    assert!(String::from_utf8_lossy(&out.stdout).contains("ΛB diagonal 2"));
}

#[test]
fn failing_sweep_exits_one() {
    // Two self-pairs at rank 2 have matched exchanges that do not negate γ.
    let tmp = tempfile::tempdir().unwrap();
    let out = krqt(
        &["verify", "thm31", "--rank", "2", "--kmax", "2"],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    let failed = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .filter(|l| l.contains("\"passed\":false"))
        .count();
    assert_eq!(failed, 2);
}

#[test]
fn tables_closed_forms() {
    let tmp = tempfile::tempdir().unwrap();
    for n in ["2", "9"] {
        let out = krqt(
            &["tables", "--rank", "1", "--n", n, "--format", "json"],
            tmp.path(),
        );
        assert_eq!(out.status.code(), Some(0));
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(v["matches_closed_forms"], true);
    }
    let csv = krqt(
        &["tables", "--rank", "1", "--n", "3", "--format", "csv"],
        tmp.path(),
    );
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("# B\n"));
    assert!(text.contains("# epsilon\n"));
}
