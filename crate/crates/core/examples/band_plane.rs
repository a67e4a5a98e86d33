//! Bilinear elements in the plane: a band whose lower boundary of the
//! periodic domain is wavy.

use pde_thickness::analytic;
use pde_thickness::geometry::{classify_cells, fitted_grid, CellLabel};
use pde_thickness::shape::{PeriodicBoundary, ShapeSpec};
use pde_thickness::{solver, thickness};

fn main() -> pde_thickness::Result<()> {
    let shape = ShapeSpec::band_general(
        0.0,
        1.0,
        PeriodicBoundary::cosine(1.0, -0.5, 0.1),
        PeriodicBoundary::constant(1.0, 1.5),
    )?;
    for a in [0.04, 0.01] {
        let cells = (8.0 / f64::sqrt(a)).ceil() as usize;
        let grid = fitted_grid(&shape, a, cells)?;
        let labels = classify_cells(&grid, &shape)?;
        let field = solver::solve_spd(&solver::assemble_2d(&grid, &shape, a)?, solver::DEFAULT_REL_TOL)?;
        let inv = thickness::inverse_thickness(&thickness::divergence(&field), a);
        let err = thickness::error_norms(&inv, 1.0)?;
        let sol = analytic::solve(&shape, a)?;
        println!(
            "a = {a}: {}x{} cells ({} outside D), {} CG iterations",
            grid.cells()[0],
            grid.cells()[1],
            labels.count(CellLabel::Outside),
            field.outcome.iterations
        );
        println!(
            "  ||1/T^a - 1/T||_L2 = {:.4e} <= {:.4e} + {:.4e}",
            err.l2_on_omega,
            sol.upper_bound,
            2.0 * grid.h()
        );
        if a == 0.01 {
            let path = std::env::temp_dir().join("band_inverse_thickness.csv");
            inv.write_csv(&path, 1.0)?;
            println!("  wrote {}", path.display());
        }
    }
    Ok(())
}
