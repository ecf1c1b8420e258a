use std::process::{Command, Output};

fn g2dt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_g2dt"))
        .args(args)
        .env_remove("G2DT_SEED")
        .output()
        .expect("binary runs")
}

#[test]
fn passing_campaign_exits_zero() {
    let out = g2dt(&["verify", "--seed", "42", "--samples", "20", "--suite", "propD1", "--suite", "corD2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let reports = v.as_array().unwrap();
    assert_eq!(reports.len(), 2);
    assert_eq!(reports[0]["suite"], "propD1");
    assert_eq!(reports[0]["failed"], 0);
    assert!(reports[0]["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn unknown_suite_is_usage_error() {
    let out = g2dt(&["verify", "--suite", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    for name in ["appendixA", "appendixB", "thmC1", "propD1", "corD2", "dhym", "product", "torus"] {
        assert!(err.contains(name), "{err}");
    }
}

#[test]
fn failing_checks_exit_nonzero() {
    // A negative bound rejects every residual.
    let out = g2dt(&["verify", "--samples", "3", "--suite", "propD1", "--tol-rel=-1"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v[0]["failed"], 3);
    assert_eq!(v[0]["witnesses"].as_array().unwrap().len(), 3);
}

#[test]
fn torus_report_lists_harmonic_dimension() {
    let out = g2dt(&["verify", "--samples", "5", "--suite", "torus", "--torus-cutoff", "1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"dim_check_H1\": 7"), "{text}");
}

#[test]
fn identical_runs_are_byte_identical() {
    let args = ["verify", "--seed", "7", "--samples", "30", "--suite", "thmC1", "--suite", "dhym", "--suite", "product"];
    assert_eq!(g2dt(&args).stdout, g2dt(&args).stdout);
}

#[test]
fn seed_from_environment() {
    let run = |seed: Option<&str>, flag: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_g2dt"));
        cmd.args(["verify", "--samples", "4", "--suite", "appendixB", "--tol-rel=-1"]).args(flag);
        match seed {
            Some(s) => cmd.env("G2DT_SEED", s),
            None => cmd.env_remove("G2DT_SEED"),
        };
        cmd.output().unwrap().stdout
    };
    assert_eq!(run(Some("9"), &[]), run(None, &["--seed", "9"]));
    assert_ne!(run(Some("9"), &[]), run(None, &["--seed", "10"]));
}

#[test]
fn text_format() {
    let out = g2dt(&["verify", "--samples", "2", "--suite", "propD1", "--format", "text"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("propD1") && text.contains("PASS"), "{text}");
}
