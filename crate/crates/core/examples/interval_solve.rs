//! P1 finite elements on an interval inside a bounded domain, checked
//! against the closed form at three resolutions.

use pde_thickness::geometry::fitted_grid;
use pde_thickness::shape::ShapeSpec;
use pde_thickness::{analytic, solver, thickness};

fn main() -> pde_thickness::Result<()> {
    let shape = ShapeSpec::interval_general(0.0, 1.0, -1.0, 2.0)?;
    let a = 0.04;
    let exact = analytic::solve(&shape, a)?;
    let mut previous: Option<f64> = None;
    for cells in [128, 256, 512] {
        let grid = fitted_grid(&shape, a, cells)?;
        let field = solver::solve_spd(&solver::assemble_1d(&grid, &shape, a)?, 1e-12)?;
        let mut err: f64 = 0.0;
        for k in 0..grid.node_count() {
            err = err.max((field.components[0][k] - exact.profile(grid.node_coord(k, 0)[0])?).abs());
        }
        let order = previous.map(|p| (p / err).log2());
        let inv = thickness::inverse_thickness(&thickness::divergence(&field), a);
        println!(
            "h = 1/{cells:<4} max nodal error {err:.3e}  order {}  1/T^a = {:.10} (closed form {:.10})",
            order.map_or("-".into(), |o| format!("{o:.3}")),
            inv.mean(),
            exact.inverse_thickness()
        );
        previous = Some(err);
    }
    Ok(())
}
