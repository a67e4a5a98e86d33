use pde_thickness::harness::{
    fit_rate, measure, sweep_a, verify_theorems, Case, ConvergenceReport, Fault, Resolution, Suite,
    VerificationReport,
};
use pde_thickness::io::read_csv;
use pde_thickness::shape::ShapeSpec;
use pde_thickness::Error;
use proptest::prelude::*;

#[test]
fn sweep_report_round_trips_and_is_reproducible() {
    let case = Case::discrete(ShapeSpec::interval_general(0.0, 1.0, -1.0, 2.0).unwrap());
    let a = [1e-3, 1e-2, 1e-1];
    let dir = tempfile::tempdir().unwrap();
    let (p1, p2) = (dir.path().join("a.json"), dir.path().join("b.json"));
    let r1 = sweep_a(&case, &a, Resolution::Auto, 1e-10).unwrap();
    let r2 = sweep_a(&case, &a, Resolution::Auto, 1e-10).unwrap();
    r1.write_json(&p1).unwrap();
    r2.write_json(&p2).unwrap();
    assert_eq!(std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
    assert_eq!(ConvergenceReport::read_json(&p1).unwrap(), r1);
    assert!(r1.all_passed());
    assert!((r1.slope - 0.5).abs() < 0.05);

    let csv = dir.path().join("a.csv");
    r1.write_csv(&csv).unwrap();
    let (header, rows) = read_csv(&csv).unwrap();
    assert_eq!(header, ["a", "error", "bound", "slack", "passed"]);
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r[4] == 1.0));
}

#[test]
fn sweep_sorts_and_keeps_nan_fit_as_null() {
    let case = Case::analytic(ShapeSpec::annulus_whole(1.0, 2.0).unwrap());
    let r = sweep_a(&case, &[0.1, 0.01], Resolution::Auto, 1e-10).unwrap();
    assert_eq!(r.samples.iter().map(|s| s.a).collect::<Vec<_>>(), [0.01, 0.1]);
    assert!(r.slope.is_nan());
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("r.json");
    r.write_json(&p).unwrap();
    let text = std::fs::read_to_string(&p).unwrap();
    assert!(text.contains("\"slope\": null"));
    let back = ConvergenceReport::read_json(&p).unwrap();
    assert!(back.slope.is_nan() && back.samples == r.samples);
}

#[test]
fn coarse_resolution_is_refused() {
    let case = Case::discrete(ShapeSpec::band_whole(0.0, 1.0, 0.5).unwrap());
    assert!(matches!(measure(&case, 0.01, Resolution::CellsAcross(16), 1e-10), Err(Error::UnderResolved(_))));
    assert_eq!(Resolution::Auto.cells_across(1.0, 0.01).unwrap(), 80);
    assert_eq!(Resolution::CellsAcross(100).cells_across(1.0, 0.01).unwrap(), 100);
}

#[test]
fn fit_rate_recovers_power_laws() {
    let pts: Vec<(f64, f64)> = [1e-4, 1e-3, 1e-2].iter().map(|a: &f64| (*a, 3.0 * a.powf(0.75))).collect();
    let (slope, intercept) = fit_rate(&pts).unwrap();
    assert!((slope - 0.75).abs() < 1e-12 && (intercept - 3f64.ln()).abs() < 1e-10);
    assert!(matches!(fit_rate(&pts[..2]), Err(Error::DegenerateFit(_))));
    assert!(matches!(fit_rate(&[(1.0, 1.0), (1.0, 2.0), (1.0, 3.0)]), Err(Error::DegenerateFit(_))));
    assert!(matches!(fit_rate(&[(1.0, 1.0), (2.0, 0.0), (3.0, 3.0)]), Err(Error::DegenerateFit(_))));
}

#[test]
fn quick_suite_passes_and_faults_are_caught() {
    let report = verify_theorems(&Suite::named("quick").unwrap());
    let failures: Vec<_> = report.failures().map(|r| format!("{} {}", r.check, r.case)).collect();
    assert!(report.all_passed(), "{failures:?}");
    assert_eq!(report.passed, report.records.len());

    let mut faulty = Suite::named("quick").unwrap();
    faulty.fault = Some(Fault::KRatioSignFlip);
    let report = verify_theorems(&faulty);
    let failed: Vec<&str> = report.failures().map(|r| r.check.as_str()).collect();
    assert_eq!(failed, ["bessel-k-ratio-lower"]);

    let mut coarse = Suite::named("quick").unwrap();
    coarse.cells_override = Some(8);
    let report = verify_theorems(&coarse);
    assert!(report.failures().any(|r| r.note.contains("√a/8")));
    assert!(report.failures().all(|r| !r.check.starts_with("bessel")));
}

#[test]
fn verification_report_round_trips() {
    let mut suite = Suite::named("quick").unwrap();
    suite.fault = Some(Fault::KRatioSignFlip);
    suite.cells_override = Some(4);
    let report = verify_theorems(&suite);
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("v.json");
    report.write_json(&p).unwrap();
    let back = VerificationReport::read_json(&p).unwrap();
    assert_eq!(back.records.len(), report.records.len());
    assert_eq!((back.passed, back.failed), (report.passed, report.failed));
    assert!(Suite::named("slow").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn analytic_sweeps_pass_for_whole_intervals(f_l in -5.0f64..5.0, t in 0.1f64..10.0) {
        let case = Case::analytic(ShapeSpec::interval_whole(f_l, f_l + t).unwrap());
        let r = sweep_a(&case, &[1e-6, 1e-4, 1e-2, 1.0], Resolution::Auto, 1e-10).unwrap();
        prop_assert!(r.all_passed());
        prop_assert!((r.slope - 0.5).abs() < 1e-9);
    }
}
