use std::process::{Command, Output};

fn liespec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liespec"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn sigma_inline_and_file() {
    let o = liespec(&["sigma", "--group", "su2", "--matrix", "3 0 0 0 2 0 0 0 1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("sigma: 3 2 1"));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.txt");
    std::fs::write(&path, "3\n1 0 0\n0 2 0\n0 0 3\n").unwrap();
    let o = liespec(&["sigma", "--group", "su2", "--matrix", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("sigma: 3 2 1"));
}

#[test]
fn exit_codes() {
    assert_eq!(liespec(&["sigma", "--group", "su2", "--matrix", "1,0,0,0,1,0,0,0,0"]).status.code(), Some(2));
    assert_eq!(liespec(&["lambda1", "--group", "nope"]).status.code(), Some(2));
    assert_eq!(liespec(&["scan", "--group", "t2", "--samples", "0"]).status.code(), Some(2));
    assert_eq!(liespec(&["diam", "--group", "su2xsu2"]).status.code(), Some(2));
    assert_eq!(liespec(&["frobnicate"]).status.code(), Some(2));
    let o = liespec(&[
        "lambda1", "--group", "su2", "--matrix", "100,0,0,0,1,0,0,0,0.01", "--window-cap", "5", "--require-certified",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn lambda1_examples() {
    let o = liespec(&["lambda1", "--group", "su2"]);
    assert!(stdout(&o).starts_with("lambda1=3 witness=spin(1/2) certified=true"));
    let o = liespec(&["lambda1", "--group", "so3"]);
    assert!(stdout(&o).starts_with("lambda1=8 witness=spin(1) certified=true"));
    let o = liespec(&["lambda1", "--group", "t2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert!((v["lambda1"].as_f64().unwrap() - 4.0 * std::f64::consts::PI.powi(2)).abs() < 1e-9);
}

#[test]
fn diam_examples() {
    let o = liespec(&["diam", "--group", "t2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["value"].as_f64().unwrap() - 0.5f64.sqrt()).abs() < 1e-6);
    let o = liespec(&["diam", "--group", "su2", "--net-size", "5000", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let d = v["value"].as_f64().unwrap();
    assert!((d / std::f64::consts::PI - 1.0).abs() < 0.05, "{d}");
    let o = liespec(&["diam", "--group", "so3", "--method", "bounds"]);
    assert!(stdout(&o).contains("method=analytic_bounds"));
}

#[test]
fn ell_examples() {
    assert!(stdout(&liespec(&["ell", "--group", "su2"])).starts_with("ell=2"));
    assert!(stdout(&liespec(&["ell", "--group", "t3"])).starts_with("ell=3"));
    assert!(stdout(&liespec(&["ell", "--group", "su2xsu2"])).starts_with("ell=5"));
}

#[test]
fn scan_is_deterministic_across_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (path, jobs) in [(&a, "1"), (&b, "3")] {
        let o = liespec(&[
            "scan", "--group", "t2", "--samples", "50", "--seed", "9", "--jobs", jobs, "--out", path.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    let (ca, cb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ca, cb);
    let text = String::from_utf8(ca).unwrap();
    assert!(text.starts_with("seed,group,m,sigma_1,sigma_2,lambda1,"));
    assert_eq!(text.lines().count(), 51);
    assert!(text.lines().skip(1).all(|l| l.contains(",true,true,na,na,true")));
}

#[test]
fn scan_json_report() {
    let o = liespec(&["scan", "--group", "t3", "--samples", "5", "--format", "json", "--grid-resolution", "16"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["records"].as_array().unwrap().len(), 5);
    assert_eq!(v["summary"]["violation_counts"]["li_ok"], 0);
}

#[test]
fn degenerate_and_verify() {
    let o = liespec(&[
        "degenerate", "--group", "su2", "--kind", "shrink-transverse", "--s-values", "1,0.5,0.25", "--net-size", "5000",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("trend lambda1 (increasing s): StrictlyIncreasing"), "{out}");
    assert!(out.contains("trend diam (increasing s): StrictlyDecreasing"), "{out}");
    let o = liespec(&["degenerate", "--group", "t2", "--kind", "shrink-transverse", "--s-values", "1"]);
    assert_eq!(o.status.code(), Some(2));

    let o = liespec(&["verify", "--group", "so3", "--trials", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("all checks passed"));
    assert_eq!(liespec(&["verify", "--group", "su2", "--trials", "0"]).status.code(), Some(2));
}
