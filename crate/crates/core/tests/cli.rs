use pde_thickness::harness::{ConvergenceReport, VerificationReport};
use pde_thickness::io::read_csv;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pde-thickness")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn value(text: &str, key: &str) -> f64 {
    let prefix = format!("{key} = ");
    text.lines().find_map(|l| l.strip_prefix(&prefix)).unwrap().parse().unwrap()
}

#[test]
fn analytic_text_output() {
    let o = run(&["analytic", "--family", "interval-whole", "--fl", "0", "--fr", "1", "--a", "0.04"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("T^a = 1.4\n"), "{text}");
    assert!(text.contains("bound_kind = thickness-excess"));
}

#[test]
fn analytic_json_and_csv_output() {
    let o = run(&["analytic", "--family", "annulus-whole", "--fl", "1", "--fr", "2", "--a", "0.01", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let excess = v["excess"].as_f64().unwrap();
    assert!((0.175..=0.4).contains(&excess));

    let o = run(&["analytic", "--family", "interval-whole", "--fl", "-1", "--fr", "1", "--a", "1", "--format", "csv"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("a,p_star,thickness_pde,excess,lower_bound,upper_bound"));
    let row: Vec<f64> = lines.next().unwrap().split(',').map(|s| s.parse().unwrap()).collect();
    assert_eq!(row[2], 4.0);
}

#[test]
fn configuration_errors_exit_with_two() {
    let o = run(&["analytic", "--family", "interval-general", "--fl", "0", "--fr", "1", "--a", "0.1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--bl"));

    let o = run(&["analytic", "--family", "interval-whole", "--fl", "1", "--fr", "0", "--a", "0.1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["analytic", "--family", "triangle", "--fl", "0", "--fr", "1", "--a", "0.1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["verify", "--suite", "nightly"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["solve", "--family", "interval-whole", "--fl", "0", "--fr", "1", "--a", "0.04", "--cells", "64", "--out", "/nonexistent/dir/f.csv"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"family": "interval-whole", "fl": 0, "fr": 3, "a": 0.25}"#).unwrap();
    let o = run(&["analytic", "--config", cfg.to_str().unwrap(), "--fr", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(value(&stdout(&o), "T^a"), 2.0);

    std::fs::write(&cfg, r#"{"family": "interval-whole", "thickness": 3}"#).unwrap();
    let o = run(&["analytic", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn solve_writes_field_and_thickness() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("field.csv");
    let o = run(&[
        "solve", "--family", "annulus-whole", "--fl", "1", "--fr", "2", "--a", "0.04", "--cells", "128", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let (p, exact) = (value(&text, "p*"), value(&text, "p*_closed_form"));
    assert!((p - exact).abs() / exact < 1e-3);

    let (header, rows) = read_csv(&out).unwrap();
    assert_eq!(header, ["x", "s_x"]);
    assert!(rows.len() > 128);
    let (header, rows) = read_csv(&dir.path().join("field.thickness.csv")).unwrap();
    assert_eq!(header, ["x", "inv_thickness", "thickness"]);
    assert_eq!(rows.len(), 128);
}

#[test]
fn solve_reports_non_convergence_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f.csv");
    let o = run(&[
        "solve", "--family", "band-whole", "--fl", "0", "--fr", "1", "--L", "0.5", "--a", "0.04", "--cells", "40",
        "--rel-tol", "1e-30", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn sweep_json_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("s.json");
    let csv = dir.path().join("s.csv");
    let o = run(&[
        "sweep", "--family", "interval-general", "--fl", "0", "--fr", "1", "--bl", "-1", "--br", "2", "--a-list",
        "1e-3,1e-2,1e-1", "--method", "discrete", "--json", json.to_str().unwrap(), "--csv", csv.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rep = ConvergenceReport::read_json(&json).unwrap();
    assert_eq!(rep.samples.len(), 3);
    assert!(rep.all_passed());
    assert_eq!(read_csv(&csv).unwrap().1.len(), 3);

    let o = run(&["sweep", "--family", "annulus-whole", "--fl", "1", "--fr", "2", "--a-list", "1e-4,1e-2", "--pretty"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("pass"));
}

#[test]
fn oracle_command() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o.csv");
    let o = run(&["oracle", "--family", "band-whole", "--fl", "0", "--fr", "1", "--L", "1", "--cells", "20", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(value(&stdout(&o), "max_deviation") <= 0.1);
    assert_eq!(read_csv(&out).unwrap().0, ["x", "y", "thickness"]);
}

#[test]
fn verify_fault_injection_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("v.json");
    let o = run(&["verify", "--suite", "quick", "--inject-fault", "--json", json.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL bessel-k-ratio-lower"));
    let rep = VerificationReport::read_json(&json).unwrap();
    assert_eq!(rep.failed, 1);

    let o = run(&["verify", "--suite", "quick", "--cells", "8"]);
    assert_eq!(o.status.code(), Some(1));
}
