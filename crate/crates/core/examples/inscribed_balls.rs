//! Geometric thickness from inscribed balls, the reference the PDE thickness
//! converges to.

use pde_thickness::geometry::{geometric_thickness_oracle, oracle_grid};
use pde_thickness::shape::ShapeSpec;

fn main() -> pde_thickness::Result<()> {
    for (shape, cells) in [
        (ShapeSpec::interval_whole(0.0, 1.0)?, 100),
        (ShapeSpec::band_whole(0.0, 1.0, 1.0)?, 20),
        (ShapeSpec::annulus_whole(1.0, 2.0)?, 50),
    ] {
        let grid = oracle_grid(&shape, cells)?;
        let field = geometric_thickness_oracle(&grid, &shape)?;
        println!(
            "{:<14} h = {:.3}  cells = {:>6}  max |T - {}| = {:.4}",
            shape.family().name(),
            grid.h(),
            grid.cell_count(),
            shape.thickness(),
            field.max_deviation(shape.thickness())
        );
    }

    let shape = ShapeSpec::annulus_whole(1.0, 2.0)?;
    let field = geometric_thickness_oracle(&oracle_grid(&shape, 25)?, &shape)?;
    let path = std::env::temp_dir().join("annulus_inscribed.csv");
    field.write_csv(&path)?;
    println!("wrote {}", path.display());
    Ok(())
}
