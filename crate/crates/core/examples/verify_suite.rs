//! The verification suite: every bound checked numerically, plus the
//! fault-injection and coarse-grid guards.

use pde_thickness::harness::{verify_theorems, Fault, Suite};

fn main() -> pde_thickness::Result<()> {
    let report = verify_theorems(&Suite::named("quick")?);
    println!("quick suite: {} passed, {} failed", report.passed, report.failed);
    let mut last = String::new();
    for r in &report.records {
        if r.check != last {
            println!("  {:<24} {:<36} measured {:.4e}", r.check, r.case, r.measured);
            last = r.check.clone();
        }
    }

    let mut faulty = Suite::named("quick")?;
    faulty.fault = Some(Fault::KRatioSignFlip);
    let report = verify_theorems(&faulty);
    for r in report.failures() {
        println!("with injected fault: {} fails ({})", r.check, r.note);
    }

    let mut coarse = Suite::named("quick")?;
    coarse.cells_override = Some(8);
    let report = verify_theorems(&coarse);
    println!("with 8 cells across: {} checks flagged", report.failed);
    Ok(())
}
