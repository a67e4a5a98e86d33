//! Radial solve for the annulus in the whole plane; `p = S' + S/r` is
//! constant on the shape.

use pde_thickness::geometry::fitted_grid;
use pde_thickness::shape::ShapeSpec;
use pde_thickness::{analytic, solver, thickness};

fn main() -> pde_thickness::Result<()> {
    let shape = ShapeSpec::annulus_whole(1.0, 2.0)?;
    let a = 0.04;
    let grid = fitted_grid(&shape, a, 1024)?;
    let field = solver::solve_spd(&solver::assemble_radial(&grid, &shape, a)?, solver::DEFAULT_REL_TOL)?;
    let p = solver::radial_p_star(&field, &shape)?;
    let exact = analytic::annulus_whole(1.0, 2.0, a)?;
    let inv = thickness::inverse_thickness(&thickness::divergence(&field), a);
    println!("R = {:.3}, h = 1/1024, {} CG iterations", grid.extent(0), field.outcome.iterations);
    println!("p*  discrete {p:.10}  closed form {:.10}  rel. diff {:.2e}", exact.p_star, (p - exact.p_star).abs() / exact.p_star);
    println!("relative spread of p on the shape {:.2e}", inv.spread() / inv.mean());
    println!("T^a = {:.8}, T = 1", 2.0 / (a.sqrt() * p));

    let path = std::env::temp_dir().join("annulus_radial.csv");
    field.write_csv(&path)?;
    println!("wrote {}", path.display());
    Ok(())
}
