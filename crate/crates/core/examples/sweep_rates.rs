//! Convergence of the PDE thickness in `a`, with a fitted log-log slope.

use pde_thickness::harness::{sweep_a, Case, Resolution};
use pde_thickness::shape::ShapeSpec;

fn main() -> pde_thickness::Result<()> {
    let a_values = [1e-4, 1e-3, 1e-2, 1e-1];
    let cases = [
        Case::analytic(ShapeSpec::interval_whole(0.0, 1.0)?),
        Case::analytic(ShapeSpec::annulus_whole(1.0, 2.0)?),
        Case::discrete(ShapeSpec::interval_general(0.0, 1.0, -1.0, 2.0)?),
    ];
    for case in &cases {
        let report = sweep_a(case, &a_values, Resolution::Auto, 1e-10)?;
        println!("{}: slope {:.4}, intercept {:.4}", case.label(), report.slope, report.intercept);
        for s in &report.samples {
            println!("  a = {:.0e}  T^a - T = {:.6e}  bound {:.6e}  {}", s.a, s.error, s.bound, if s.passed { "ok" } else { "FAIL" });
        }
    }
    let report = sweep_a(&cases[1], &a_values, Resolution::Auto, 1e-10)?;
    let path = std::env::temp_dir().join("annulus_sweep.json");
    report.write_json(&path)?;
    println!("wrote {}", path.display());
    Ok(())
}
