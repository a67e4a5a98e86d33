//! Finite element solution of the weak form
//! `a ∫_D ∇s:∇u + ∫_{D∖Ω} s·u = ∫_Ω div u`
//! with P1 elements on lines, weighted P1 elements for the radial annulus
//! equation, and bilinear elements for the vector problem in the plane.

mod cg;
mod sparse;

pub use cg::{pcg, CgOutcome};
pub use sparse::{dot, norm, CsrMatrix};

use crate::error::{Error, Result};
use crate::geometry::{classify_cells, CellLabel, StructuredGrid};
use crate::io;
use crate::shape::{Family, ShapeSpec};
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const DEFAULT_REL_TOL: f64 = 1e-10;

const Q1_STIFFNESS: [[f64; 4]; 4] = [
    [4.0, -1.0, -2.0, -1.0],
    [-1.0, 4.0, -1.0, -2.0],
    [-2.0, -1.0, 4.0, -1.0],
    [-1.0, -2.0, -1.0, 4.0],
];
const Q1_MASS: [[f64; 4]; 4] = [
    [4.0, 2.0, 1.0, 2.0],
    [2.0, 4.0, 2.0, 1.0],
    [1.0, 2.0, 4.0, 2.0],
    [2.0, 1.0, 2.0, 4.0],
];
/// Sign of `∫ ∂φ_k/∂x` and `∫ ∂φ_k/∂y` over a cell, in units of `h/2`.
const Q1_GRAD_X: [f64; 4] = [-1.0, 1.0, 1.0, -1.0];
const Q1_GRAD_Y: [f64; 4] = [-1.0, -1.0, 1.0, 1.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverKind {
    /// P1 on a line; one scalar component.
    Interval,
    /// Weighted P1 for `S(r)`; the field is `s = S(r) x/r`.
    Radial,
    /// Bilinear, two components.
    Plane,
}

impl SolverKind {
    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Interval => "interval",
            SolverKind::Radial => "radial",
            SolverKind::Plane => "plane",
        }
    }

    /// Solver used for a shape: intervals on a line, the whole-plane annulus
    /// radially, everything else in the plane.
    pub fn for_shape(shape: &ShapeSpec) -> Self {
        match shape.family() {
            Family::IntervalWhole | Family::IntervalGeneral => SolverKind::Interval,
            Family::AnnulusWhole => SolverKind::Radial,
            _ => SolverKind::Plane,
        }
    }
}

/// Linear system after Dirichlet elimination. Unknowns are nodal, component
/// by component.
#[derive(Debug, Clone)]
pub struct SparseSystem {
    pub n: usize,
    pub matrix: CsrMatrix,
    pub rhs: Vec<f64>,
    pub dirichlet_mask: Vec<bool>,
    pub grid: StructuredGrid,
    pub kind: SolverKind,
    pub labels: Vec<CellLabel>,
}

impl SparseSystem {
    pub fn components(&self) -> usize {
        if self.kind == SolverKind::Plane {
            2
        } else {
            1
        }
    }

    pub fn default_max_iterations(&self) -> usize {
        match self.kind {
            SolverKind::Plane => (50.0 * (self.n as f64).sqrt()).ceil() as usize,
            _ => 10 * self.n,
        }
    }
}

/// Nodal solution; `components[c][node]`.
#[derive(Debug, Clone)]
pub struct DiscreteField {
    pub grid: StructuredGrid,
    pub kind: SolverKind,
    pub labels: Vec<CellLabel>,
    pub components: Vec<Vec<f64>>,
    /// Per unknown, same layout as the system.
    pub dirichlet_mask: Vec<bool>,
    pub outcome: CgOutcome,
}

impl DiscreteField {
    /// Whether node `k` carries Dirichlet data.
    pub fn is_dirichlet(&self, k: usize) -> bool {
        self.dirichlet_mask[k]
    }

    /// Euclidean norm of the nodal vector at node `k`.
    pub fn norm_at(&self, k: usize) -> f64 {
        self.components.iter().map(|c| c[k] * c[k]).sum::<f64>().sqrt()
    }

    /// Largest nodal `|s|` (Euclidean norm over components).
    pub fn max_norm(&self) -> f64 {
        (0..self.grid.node_count()).map(|k| self.norm_at(k)).fold(0.0, f64::max)
    }

    /// CSV `x,s_x` on a line, `x,y,s_x,s_y` in the plane; one row per node.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let header: &[&str] = if self.components.len() == 1 {
            &["x", "s_x"]
        } else {
            &["x", "y", "s_x", "s_y"]
        };
        let g = &self.grid;
        let rows = (0..g.node_count()).map(|k| {
            let (i, j) = g.node_ij(k);
            let p = g.node_coord(i, j);
            let mut row = g.point(&p).to_vec();
            row.extend(self.components.iter().map(|c| c[k]));
            row
        });
        io::write_csv(path, header, rows)
    }
}

struct RawSystem {
    n: usize,
    triplets: Vec<(usize, usize, f64)>,
    rhs: Vec<f64>,
    mask: Vec<bool>,
    grid: StructuredGrid,
    kind: SolverKind,
    labels: Vec<CellLabel>,
}

impl RawSystem {
    /// Eliminates Dirichlet unknowns with values `g`, keeping symmetry:
    /// free rows lose their Dirichlet columns (moved to the right-hand side)
    /// and Dirichlet rows become identity rows.
    fn finish(self, g: Option<&[f64]>) -> SparseSystem {
        let RawSystem {
            n,
            triplets,
            mut rhs,
            mask,
            grid,
            kind,
            labels,
        } = self;
        let full = CsrMatrix::from_triplets(n, triplets);
        let mut kept = Vec::with_capacity(full.nnz());
        for i in 0..n {
            if mask[i] {
                kept.push((i, i, 1.0));
                rhs[i] = g.map_or(0.0, |g| g[i]);
                continue;
            }
            for (j, v) in full.row(i) {
                if mask[j] {
                    if let Some(g) = g {
                        rhs[i] -= v * g[j];
                    }
                } else {
                    kept.push((i, j, v));
                }
            }
        }
        SparseSystem {
            n,
            matrix: CsrMatrix::from_triplets(n, kept),
            rhs,
            dirichlet_mask: mask,
            grid,
            kind,
            labels,
        }
    }
}

fn check_a(a: f64) -> Result<()> {
    if a > 0.0 && a.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("diffusion parameter must be positive, got {a}")))
    }
}

fn check_resolution(grid: &StructuredGrid, shape: &ShapeSpec) -> Result<()> {
    let across = shape.thickness() / grid.h();
    if across < 4.0 - 1e-9 {
        return Err(Error::UnderResolved(format!(
            "{across:.3} cells across the thickness, need at least 4"
        )));
    }
    Ok(())
}

fn raw_1d(grid: &StructuredGrid, shape: &ShapeSpec, a: f64) -> Result<RawSystem> {
    check_a(a)?;
    if !matches!(shape.family(), Family::IntervalWhole | Family::IntervalGeneral) {
        return Err(Error::InvalidShape(format!("{} is not an interval", shape.family())));
    }
    let labels = classify_cells(grid, shape)?.labels;
    let node_l = grid.nodal_index_x(shape.f_l())?;
    let node_r = grid.nodal_index_x(shape.f_r())?;
    check_resolution(grid, shape)?;
    let n = grid.node_count();
    let h = grid.h();
    let mut mask = vec![false; n];
    mask[0] = true;
    mask[n - 1] = true;
    let mut triplets = Vec::with_capacity(6 * grid.cell_count());
    for (c, label) in labels.iter().enumerate() {
        let nodes = [c, c + 1];
        if *label == CellLabel::Outside {
            mask[c] = true;
            mask[c + 1] = true;
            continue;
        }
        let mass = if *label == CellLabel::Void { h / 6.0 } else { 0.0 };
        for (p, &ip) in nodes.iter().enumerate() {
            for (q, &iq) in nodes.iter().enumerate() {
                let stiff = if p == q { a / h } else { -a / h };
                let m = if p == q { 2.0 * mass } else { mass };
                triplets.push((ip, iq, stiff + m));
            }
        }
    }
    let mut rhs = vec![0.0; n];
    rhs[node_r] += 1.0;
    rhs[node_l] -= 1.0;
    Ok(RawSystem {
        n,
        triplets,
        rhs,
        mask,
        grid: grid.clone(),
        kind: SolverKind::Interval,
        labels,
    })
}

fn raw_radial(grid: &StructuredGrid, shape: &ShapeSpec, a: f64) -> Result<RawSystem> {
    check_a(a)?;
    if shape.family() != Family::AnnulusWhole {
        return Err(Error::InvalidShape(format!(
            "radial assembly needs the whole-plane annulus, got {}",
            shape.family()
        )));
    }
    if grid.dim() != 1 || grid.origin()[0] != 0.0 {
        return Err(Error::Coverage("radial grid must be one-dimensional and start at r = 0".into()));
    }
    let (f_l, f_r) = (shape.f_l(), shape.f_r());
    let h = grid.h();
    if f_l <= h {
        return Err(Error::UnderResolved(format!("inner radius {f_l} within one cell of the axis (h = {h})")));
    }
    if grid.extent(0) <= f_r {
        return Err(Error::Coverage(format!("radial grid ends at {} inside the shape", grid.extent(0))));
    }
    let node_l = grid.nodal_index_x(f_l)?;
    let node_r = grid.nodal_index_x(f_r)?;
    check_resolution(grid, shape)?;

    let n = grid.node_count();
    let labels: Vec<CellLabel> = (0..grid.cell_count())
        .map(|c| {
            let r = grid.cell_center(c, 0)[0];
            if f_l < r && r < f_r {
                CellLabel::Shape
            } else {
                CellLabel::Void
            }
        })
        .collect();
    let mut mask = vec![false; n];
    mask[0] = true;
    mask[1] = true;
    mask[n - 1] = true;

    let gauss = 0.5 / 3f64.sqrt();
    let mut triplets = Vec::with_capacity(4 * grid.cell_count());
    // The cell touching the axis only couples Dirichlet nodes.
    for (c, label) in labels.iter().enumerate().skip(1) {
        let r0 = grid.node_coord(c, 0)[0];
        let void = *label == CellLabel::Void;
        let mut k = [[0.0; 2]; 2];
        for xi in [0.5 - gauss, 0.5 + gauss] {
            let r = r0 + xi * h;
            let phi = [1.0 - xi, xi];
            let dphi = [-1.0 / h, 1.0 / h];
            for p in 0..2 {
                for q in p..2 {
                    let mut v = a * (r * (dphi[p] * dphi[q]) + phi[p] * phi[q] / r);
                    if void {
                        v += r * (phi[p] * phi[q]);
                    }
                    k[p][q] += 0.5 * h * v;
                }
            }
        }
        k[1][0] = k[0][1];
        for p in 0..2 {
            for q in 0..2 {
                triplets.push((c + p, c + q, k[p][q]));
            }
        }
    }
    let mut rhs = vec![0.0; n];
    rhs[node_r] += f_r;
    rhs[node_l] -= f_l;
    Ok(RawSystem {
        n,
        triplets,
        rhs,
        mask,
        grid: grid.clone(),
        kind: SolverKind::Radial,
        labels,
    })
}

fn raw_2d(grid: &StructuredGrid, shape: &ShapeSpec, a: f64) -> Result<RawSystem> {
    check_a(a)?;
    if grid.dim() != 2 {
        return Err(Error::Coverage("plane assembly needs a 2D grid".into()));
    }
    let labels = classify_cells(grid, shape)?.labels;
    check_resolution(grid, shape)?;
    let nn = grid.node_count();
    let n = 2 * nn;
    let h = grid.h();
    let [cx, cy] = grid.cells();

    let mut mask = vec![false; n];
    let clamp = |node: usize, mask: &mut Vec<bool>| {
        mask[node] = true;
        mask[nn + node] = true;
    };
    for i in 0..grid.nodes_x() {
        clamp(grid.node_index(i, 0), &mut mask);
        clamp(grid.node_index(i, cy), &mut mask);
    }
    if !grid.periodic_x() {
        for j in 0..=cy {
            clamp(grid.node_index(0, j), &mut mask);
            clamp(grid.node_index(cx, j), &mut mask);
        }
    }

    let mut triplets = Vec::with_capacity(32 * grid.cell_count());
    let mut rhs = vec![0.0; n];
    let mass = h * h / 36.0;
    for (c, label) in labels.iter().enumerate() {
        let (i, j) = grid.cell_ij(c);
        let nodes = grid.cell_nodes(i, j);
        match label {
            CellLabel::Outside => {
                for &k in &nodes {
                    clamp(k, &mut mask);
                }
                continue;
            }
            CellLabel::Shape => {
                for (p, &k) in nodes.iter().enumerate() {
                    rhs[k] += 0.5 * h * Q1_GRAD_X[p];
                    rhs[nn + k] += 0.5 * h * Q1_GRAD_Y[p];
                }
            }
            CellLabel::Void => {}
        }
        let void = *label == CellLabel::Void;
        for p in 0..4 {
            for q in 0..4 {
                let mut v = a * Q1_STIFFNESS[p][q] / 6.0;
                if void {
                    v += mass * Q1_MASS[p][q];
                }
                triplets.push((nodes[p], nodes[q], v));
                triplets.push((nn + nodes[p], nn + nodes[q], v));
            }
        }
    }
    Ok(RawSystem {
        n,
        triplets,
        rhs,
        mask,
        grid: grid.clone(),
        kind: SolverKind::Plane,
        labels,
    })
}

fn raw_for(grid: &StructuredGrid, shape: &ShapeSpec, a: f64) -> Result<RawSystem> {
    match (shape.family(), grid.dim()) {
        (Family::IntervalWhole | Family::IntervalGeneral, _) => raw_1d(grid, shape, a),
        (Family::AnnulusWhole, 1) => raw_radial(grid, shape, a),
        _ => raw_2d(grid, shape, a),
    }
}

/// P1 system for an interval shape: stiffness `a/h`, consistent mass on void
/// cells, right-hand side `u(f_r) - u(f_l)`, zero Dirichlet data at the grid
/// ends and on nodes of cells outside `D`.
pub fn assemble_1d(grid: &StructuredGrid, shape: &ShapeSpec, a: f64) -> Result<SparseSystem> {
    Ok(raw_1d(grid, shape, a)?.finish(None))
}

/// Weighted P1 system for the radial profile `S` of the whole-plane annulus
/// on `[0, R]`. `S` is clamped to zero at `r = 0`, `r = h` and `r = R`.
pub fn assemble_radial(grid: &StructuredGrid, shape: &ShapeSpec, a: f64) -> Result<SparseSystem> {
    Ok(raw_radial(grid, shape, a)?.finish(None))
}

/// Bilinear system for the vector field on a structured grid, periodic in x
/// for bands, clamped on the box edges and on nodes of cells outside `D`.
pub fn assemble_2d(grid: &StructuredGrid, shape: &ShapeSpec, a: f64) -> Result<SparseSystem> {
    Ok(raw_2d(grid, shape, a)?.finish(None))
}

/// Picks the assembly matching the shape and grid dimension.
pub fn assemble(grid: &StructuredGrid, shape: &ShapeSpec, a: f64) -> Result<SparseSystem> {
    Ok(raw_for(grid, shape, a)?.finish(None))
}

fn split(system: &SparseSystem, x: Vec<f64>) -> Vec<Vec<f64>> {
    let nn = system.grid.node_count();
    x.chunks(nn).map(<[f64]>::to_vec).collect::<Vec<_>>()[..system.components()].to_vec()
}

/// Solves with Jacobi-preconditioned CG up to the default iteration cap.
pub fn solve_spd(system: &SparseSystem, rel_tol: f64) -> Result<DiscreteField> {
    solve_spd_capped(system, rel_tol, system.default_max_iterations())
}

pub fn solve_spd_capped(system: &SparseSystem, rel_tol: f64, max_iterations: usize) -> Result<DiscreteField> {
    let (x, outcome) = pcg(&system.matrix, &system.rhs, rel_tol, max_iterations)?;
    Ok(DiscreteField {
        grid: system.grid.clone(),
        kind: system.kind,
        labels: system.labels.clone(),
        components: split(system, x),
        dirichlet_mask: system.dirichlet_mask.clone(),
        outcome,
    })
}

/// Solves the homogeneous equation (zero right-hand side) with the given
/// nodal values imposed on the Dirichlet nodes. `boundary_data[c][node]`
/// holds one array per component; interior entries are ignored.
pub fn homogeneous_boundary_probe(
    grid: &StructuredGrid,
    shape: &ShapeSpec,
    a: f64,
    boundary_data: &[Vec<f64>],
    rel_tol: f64,
) -> Result<DiscreteField> {
    let mut raw = raw_for(grid, shape, a)?;
    let nn = grid.node_count();
    let comps = raw.n / nn;
    if boundary_data.len() != comps || boundary_data.iter().any(|c| c.len() != nn) {
        return Err(Error::Domain(format!(
            "boundary data must be {comps} arrays of {nn} nodal values"
        )));
    }
    raw.rhs.iter_mut().for_each(|v| *v = 0.0);
    let g: Vec<f64> = boundary_data.concat();
    let system = raw.finish(Some(&g));
    solve_spd(&system, rel_tol)
}

/// Discrete `p*` of a radial solve, `2 (f_r S(f_r) - f_l S(f_l)) / (f_r² - f_l²)`.
pub fn radial_p_star(field: &DiscreteField, shape: &ShapeSpec) -> Result<f64> {
    let (f_l, f_r) = (shape.f_l(), shape.f_r());
    let s = &field.components[0];
    let s_l = s[field.grid.nodal_index_x(f_l)?];
    let s_r = s[field.grid.nodal_index_x(f_r)?];
    Ok(2.0 * (f_r * s_r - f_l * s_l) / (f_r * f_r - f_l * f_l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_grid, fitted_grid};

    #[test]
    fn interval_rhs_is_boundary_functional() {
        let g = build_grid(&[(-1.0, 2.0)], &[12], false).unwrap();
        let s = ShapeSpec::interval_whole(0.0, 1.0).unwrap();
        let sys = assemble_1d(&g, &s, 0.04).unwrap();
        let nz: Vec<(usize, f64)> = sys.rhs.iter().copied().enumerate().filter(|(_, v)| *v != 0.0).collect();
        assert_eq!(nz, vec![(4, -1.0), (8, 1.0)]);
        assert_eq!(sys.matrix.asymmetry(), 0.0);
    }

    #[test]
    fn radial_rhs_entries() {
        let s = ShapeSpec::annulus_whole(1.0, 2.0).unwrap();
        let g = fitted_grid(&s, 0.04, 16).unwrap();
        let sys = assemble_radial(&g, &s, 0.04).unwrap();
        let nz: Vec<(usize, f64)> = sys.rhs.iter().copied().enumerate().filter(|(_, v)| *v != 0.0).collect();
        assert_eq!(nz, vec![(16, -1.0), (32, 2.0)]);
        assert_eq!(sys.matrix.asymmetry(), 0.0);
    }

    #[test]
    fn flat_band_has_no_x_forcing() {
        let s = ShapeSpec::band_whole(0.0, 1.0, 0.5).unwrap();
        let g = fitted_grid(&s, 0.04, 8).unwrap();
        let sys = assemble_2d(&g, &s, 0.04).unwrap();
        let nn = g.node_count();
        assert!(sys.rhs[..nn].iter().all(|v| *v == 0.0));
        assert!(sys.rhs[nn..].iter().any(|v| *v != 0.0));
    }

    #[test]
    fn solve_radial_matches_closed_form() {
        let s = ShapeSpec::annulus_whole(1.0, 2.0).unwrap();
        let g = fitted_grid(&s, 0.04, 256).unwrap();
        let f = solve_spd(&assemble(&g, &s, 0.04).unwrap(), DEFAULT_REL_TOL).unwrap();
        let p = radial_p_star(&f, &s).unwrap();
        let exact = crate::analytic::annulus_whole(1.0, 2.0, 0.04).unwrap().p_star;
        assert!((p - exact).abs() < 1e-3 * exact, "{p} vs {exact}");
    }

    #[test]
    fn zero_probe_is_zero() {
        let s = ShapeSpec::interval_general(0.0, 1.0, -1.0, 2.0).unwrap();
        let g = fitted_grid(&s, 0.04, 16).unwrap();
        let f = homogeneous_boundary_probe(&g, &s, 0.04, &[vec![0.0; g.node_count()]], 1e-12).unwrap();
        assert!(f.components[0].iter().all(|v| *v == 0.0));
    }
}
