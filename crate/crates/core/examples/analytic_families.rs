//! Closed-form PDE thickness for every shape family, with the bound that
//! applies to it.

use pde_thickness::analytic::{self, BoundKind};
use pde_thickness::shape::{PeriodicBoundary, ShapeSpec};

fn main() -> pde_thickness::Result<()> {
    let a = 0.01;
    let shapes = [
        ShapeSpec::interval_whole(0.0, 1.0)?,
        ShapeSpec::interval_general(0.0, 1.0, -0.5, 2.0)?,
        ShapeSpec::band_whole(0.0, 1.0, 1.0)?,
        ShapeSpec::band_general(
            0.0,
            1.0,
            PeriodicBoundary::cosine(1.0, -0.5, 0.1),
            PeriodicBoundary::constant(1.0, 1.5),
        )?,
        ShapeSpec::annulus_whole(1.0, 2.0)?,
        ShapeSpec::annulus_general(1.0, 2.0, 2.5)?,
    ];
    for shape in &shapes {
        let sol = analytic::solve(shape, a)?;
        match sol.bound_kind {
            BoundKind::ThicknessExcess => println!(
                "{:<16} T^a = {:.10}  T^a - T = {:.6e} in [{:.6e}, {:.6e}]",
                shape.family().name(),
                sol.thickness_pde,
                sol.excess,
                sol.lower_bound,
                sol.upper_bound
            ),
            BoundKind::InverseL2 => println!(
                "{:<16} whole-space T^a = {:.10}  ||1/T^a - 1/T||_L2 <= {:.6e}",
                shape.family().name(),
                sol.thickness_pde,
                sol.upper_bound
            ),
        }
    }

    let sol = analytic::annulus_whole(1.0, 2.0, a)?;
    println!("\nannulus profile S(r) and p(r) = S' + S/r:");
    for r in [0.5, 1.0, 1.5, 2.0, 2.5] {
        let p = sol.profile_derivative(r, analytic::Side::Right)?;
        println!("  r = {r:.1}  S = {:+.8}  p = {:+.8}", sol.profile(r)?, p);
    }
    Ok(())
}
