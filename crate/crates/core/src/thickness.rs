//! Divergence of discrete solutions, inverse thickness `√a div s / 2`, and
//! error norms on the shape.

use crate::error::{Error, Result};
use crate::geometry::{CellLabel, StructuredGrid};
use crate::io;
use crate::solver::{DiscreteField, SolverKind};
use std::f64::consts::PI;
use std::path::Path;

/// Per-cell divergence evaluated at cell centers.
#[derive(Debug, Clone)]
pub struct DivergenceField {
    pub grid: StructuredGrid,
    pub kind: SolverKind,
    pub labels: Vec<CellLabel>,
    pub values: Vec<f64>,
}

/// Inverse thickness on shape cells; other cells hold 0 and are masked out.
#[derive(Debug, Clone)]
pub struct InverseThicknessField {
    pub grid: StructuredGrid,
    pub kind: SolverKind,
    pub mask: Vec<bool>,
    pub values: Vec<f64>,
    pub a: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorNorms {
    pub l2_on_omega: f64,
    pub linf_on_omega: f64,
}

/// 1D: `S'` per cell. Radial: `p = S_r + S/r` at midpoints. Plane:
/// `∂s_x/∂x + ∂s_y/∂y` of the bilinear interpolant at cell centers.
pub fn divergence(field: &DiscreteField) -> DivergenceField {
    let g = &field.grid;
    let h = g.h();
    let values = (0..g.cell_count())
        .map(|c| {
            let (i, j) = g.cell_ij(c);
            match field.kind {
                SolverKind::Interval => {
                    let s = &field.components[0];
                    (s[i + 1] - s[i]) / h
                }
                SolverKind::Radial => {
                    let s = &field.components[0];
                    let r = g.cell_center(i, 0)[0];
                    (s[i + 1] - s[i]) / h + 0.5 * (s[i] + s[i + 1]) / r
                }
                SolverKind::Plane => {
                    let [n0, n1, n2, n3] = g.cell_nodes(i, j);
                    let (sx, sy) = (&field.components[0], &field.components[1]);
                    ((sx[n1] + sx[n2]) - (sx[n0] + sx[n3]) + (sy[n2] + sy[n3]) - (sy[n0] + sy[n1])) / (2.0 * h)
                }
            }
        })
        .collect();
    DivergenceField {
        grid: g.clone(),
        kind: field.kind,
        labels: field.labels.clone(),
        values,
    }
}

/// `√a · div / 2` on shape cells.
pub fn inverse_thickness(div: &DivergenceField, a: f64) -> InverseThicknessField {
    let mask: Vec<bool> = div.labels.iter().map(|l| *l == CellLabel::Shape).collect();
    let values = div
        .values
        .iter()
        .zip(&mask)
        .map(|(d, m)| if *m { a.sqrt() * d / 2.0 } else { 0.0 })
        .collect();
    InverseThicknessField {
        grid: div.grid.clone(),
        kind: div.kind,
        mask,
        values,
        a,
    }
}

impl InverseThicknessField {
    /// Measure of a cell in the shape's own space: `2π r h` for radial
    /// cells, `h^dim` otherwise.
    pub fn cell_measure(&self, c: usize) -> f64 {
        match self.kind {
            SolverKind::Radial => 2.0 * PI * self.grid.cell_center(c, 0)[0] * self.grid.h(),
            _ => self.grid.cell_area(),
        }
    }

    pub fn shape_cells(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.values.len()).filter(|c| self.mask[*c])
    }

    /// Largest minus smallest value over shape cells.
    pub fn spread(&self) -> f64 {
        let (lo, hi) = self
            .shape_cells()
            .map(|c| self.values[c])
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        hi - lo
    }

    pub fn mean(&self) -> f64 {
        let (sum, area) = self
            .shape_cells()
            .fold((0.0, 0.0), |(s, m), c| (s + self.values[c] * self.cell_measure(c), m + self.cell_measure(c)));
        sum / area
    }

    /// CSV `x[,y],inv_thickness,thickness` on shape cells. The thickness
    /// column is `NaN` where `|div| ≤ 1e-12 · 2/(√a T̄)`.
    pub fn write_csv(&self, path: &Path, t_bar: f64) -> Result<()> {
        let header: &[&str] = if self.grid.dim() == 1 {
            &["x", "inv_thickness", "thickness"]
        } else {
            &["x", "y", "inv_thickness", "thickness"]
        };
        let sqrt_a = self.a.sqrt();
        let div_floor = 1e-12 * 2.0 / (sqrt_a * t_bar);
        let rows = self.shape_cells().map(|c| {
            let (i, j) = self.grid.cell_ij(c);
            let p = self.grid.cell_center(i, j);
            let mut row = self.grid.point(&p).to_vec();
            let inv = self.values[c];
            let div = 2.0 * inv / sqrt_a;
            row.push(inv);
            row.push(if div.abs() > div_floor { 1.0 / inv } else { f64::NAN });
            row
        });
        io::write_csv(path, header, rows)
    }
}

/// Norms of `field - reference` over shape cells.
pub fn error_norms(field: &InverseThicknessField, reference: f64) -> Result<ErrorNorms> {
    error_norms_with(field, |_| reference)
}

/// Norms of `field - reference(c)` over shape cells `c`.
pub fn error_norms_with(field: &InverseThicknessField, reference: impl Fn(usize) -> f64) -> Result<ErrorNorms> {
    let mut sum = 0.0;
    let mut linf: f64 = 0.0;
    let mut any = false;
    for c in field.shape_cells() {
        any = true;
        let d = field.values[c] - reference(c);
        sum += d * d * field.cell_measure(c);
        linf = linf.max(d.abs());
    }
    if !any {
        return Err(Error::EmptyShape);
    }
    Ok(ErrorNorms {
        l2_on_omega: sum.sqrt(),
        linf_on_omega: linf,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::build_grid;
    use crate::solver::CgOutcome;

    fn field(grid: StructuredGrid, kind: SolverKind, components: Vec<Vec<f64>>, shape_all: bool) -> DiscreteField {
        let label = if shape_all { CellLabel::Shape } else { CellLabel::Void };
        DiscreteField {
            labels: vec![label; grid.cell_count()],
            dirichlet_mask: vec![false; components.len() * grid.node_count()],
            grid,
            kind,
            components,
            outcome: CgOutcome {
                iterations: 0,
                relative_residual: 0.0,
            },
        }
    }

    #[test]
    fn divergence_examples() {
        let g = build_grid(&[(0.0, 1.0)], &[8], false).unwrap();
        let s: Vec<f64> = (0..9).map(|i| 3.0 * g.node_coord(i, 0)[0]).collect();
        let d = divergence(&field(g.clone(), SolverKind::Interval, vec![s], true));
        assert!(d.values.iter().all(|v| (v - 3.0).abs() < 1e-12));

        let s: Vec<f64> = (0..9).map(|i| g.node_coord(i, 0)[0] / 2.0).collect();
        let d = divergence(&field(g.clone(), SolverKind::Radial, vec![s], true));
        assert!(d.values.iter().all(|v| (v - 1.0).abs() < 1e-12));

        let g = build_grid(&[(-1.0, 1.0), (0.0, 1.0)], &[8, 4], false).unwrap();
        let nodes = 0..g.node_count();
        let sx = nodes.clone().map(|k| { let (i, j) = g.node_ij(k); g.node_coord(i, j)[0] / 2.0 }).collect();
        let sy = nodes.map(|k| { let (i, j) = g.node_ij(k); g.node_coord(i, j)[1] / 2.0 }).collect();
        let d = divergence(&field(g, SolverKind::Plane, vec![sx, sy], true));
        assert!(d.values.iter().all(|v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn inverse_and_norms() {
        let g = build_grid(&[(0.0, 1.0)], &[4], false).unwrap();
        let div = DivergenceField {
            grid: g.clone(),
            kind: SolverKind::Interval,
            labels: vec![CellLabel::Shape; 4],
            values: vec![7.142857, 7.142857, 0.0, 7.142857],
        };
        let inv = inverse_thickness(&div, 0.04);
        assert!((inv.values[0] - 0.7142857).abs() < 1e-12);
        assert_eq!(inv.values[2], 0.0);

        let ones = InverseThicknessField { values: vec![1.5; 4], ..inv.clone() };
        let n = error_norms(&ones, 1.5).unwrap();
        assert_eq!((n.l2_on_omega, n.linf_on_omega), (0.0, 0.0));
        let n = error_norms(&ones, 1.25).unwrap();
        assert!((n.l2_on_omega - 0.25).abs() < 1e-15 && (n.linf_on_omega - 0.25).abs() < 1e-15);

        let empty = InverseThicknessField { mask: vec![false; 4], ..inv };
        assert!(matches!(error_norms(&empty, 1.0), Err(Error::EmptyShape)));
    }
}
