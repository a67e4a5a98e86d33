//! Uniform structured grids, cell classification against a shape, and the
//! brute-force inscribed-ball thickness used as a geometric reference.

use crate::error::{Error, Result};
use crate::io;
use crate::shape::{Family, ShapeSpec};
use rayon::prelude::*;
use std::path::Path;

/// Relative tolerance on `hx == hy` and on interface snapping.
const SPACING_TOL: f64 = 1e-12;
const NODAL_TOL: f64 = 1e-8;

/// Distance from the interfaces to the truncated boundary of whole-space
/// problems, in units of `√a`.
pub const TRUNCATION_WIDTHS: f64 = 28.0;

/// Largest grid accepted by [`geometric_thickness_oracle`].
pub const ORACLE_MAX_CELLS: usize = 1024 * 1024;

#[derive(Debug, Clone, PartialEq)]
pub struct StructuredGrid {
    dim: usize,
    origin: [f64; 2],
    h: f64,
    cells: [usize; 2],
    periodic_x: bool,
}

impl StructuredGrid {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn origin(&self) -> [f64; 2] {
        self.origin
    }

    pub fn cells(&self) -> [usize; 2] {
        self.cells
    }

    pub fn periodic_x(&self) -> bool {
        self.periodic_x
    }

    /// Nodes along x; a periodic axis identifies the last node with the first.
    pub fn nodes_x(&self) -> usize {
        if self.periodic_x {
            self.cells[0]
        } else {
            self.cells[0] + 1
        }
    }

    pub fn nodes_y(&self) -> usize {
        if self.dim == 1 {
            1
        } else {
            self.cells[1] + 1
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes_x() * self.nodes_y()
    }

    pub fn cell_count(&self) -> usize {
        if self.dim == 1 {
            self.cells[0]
        } else {
            self.cells[0] * self.cells[1]
        }
    }

    pub fn cell_area(&self) -> f64 {
        self.h.powi(self.dim as i32)
    }

    pub fn extent(&self, axis: usize) -> f64 {
        self.cells[axis] as f64 * self.h
    }

    /// Index of node `(i, j)`; `i` wraps on a periodic axis.
    pub fn node_index(&self, i: usize, j: usize) -> usize {
        let nx = self.nodes_x();
        j * nx + if self.periodic_x { i % nx } else { i }
    }

    pub fn cell_index(&self, i: usize, j: usize) -> usize {
        j * self.cells[0] + i
    }

    /// `(i, j)` of a cell index.
    pub fn cell_ij(&self, c: usize) -> (usize, usize) {
        (c % self.cells[0], c / self.cells[0])
    }

    pub fn node_ij(&self, n: usize) -> (usize, usize) {
        let nx = self.nodes_x();
        (n % nx, n / nx)
    }

    pub fn node_coord(&self, i: usize, j: usize) -> [f64; 2] {
        [
            self.origin[0] + i as f64 * self.h,
            if self.dim == 1 {
                0.0
            } else {
                self.origin[1] + j as f64 * self.h
            },
        ]
    }

    pub fn cell_center(&self, i: usize, j: usize) -> [f64; 2] {
        [
            self.origin[0] + (i as f64 + 0.5) * self.h,
            if self.dim == 1 {
                0.0
            } else {
                self.origin[1] + (j as f64 + 0.5) * self.h
            },
        ]
    }

    /// Point in the coordinates a shape expects (`[x]` or `[x, y]`).
    pub fn point<'a>(&self, p: &'a [f64; 2]) -> &'a [f64] {
        &p[..self.dim]
    }

    /// Node indices of a cell, counterclockwise from the lower-left corner
    /// (two nodes in 1D).
    pub fn cell_nodes(&self, i: usize, j: usize) -> [usize; 4] {
        if self.dim == 1 {
            [i, i + 1, usize::MAX, usize::MAX]
        } else {
            [
                self.node_index(i, j),
                self.node_index(i + 1, j),
                self.node_index(i + 1, j + 1),
                self.node_index(i, j + 1),
            ]
        }
    }

    /// Nodal index of coordinate `t` along x, if it is on a node.
    pub fn nodal_index_x(&self, t: f64) -> Result<usize> {
        nodal_index(self.origin[0], self.h, t, self.cells[0])
    }

    pub fn nodal_index_y(&self, t: f64) -> Result<usize> {
        nodal_index(self.origin[1], self.h, t, self.cells[1])
    }
}

fn nodal_index(origin: f64, h: f64, t: f64, cells: usize) -> Result<usize> {
    let k = (t - origin) / h;
    let r = k.round();
    if (k - r).abs() > NODAL_TOL || r < 0.0 || r > cells as f64 {
        return Err(Error::NonNodalInterface { position: t, h });
    }
    Ok(r as usize)
}

/// Uniform grid on a box with the given number of cells per axis.
pub fn build_grid(domain_box: &[(f64, f64)], resolution: &[usize], periodic_x: bool) -> Result<StructuredGrid> {
    let dim = domain_box.len();
    if !(dim == 1 || dim == 2) || resolution.len() != dim {
        return Err(Error::DegenerateBox(format!(
            "need 1 or 2 axes with matching resolution, got {dim} axes and {} resolutions",
            resolution.len()
        )));
    }
    for (axis, (&(lo, hi), &n)) in domain_box.iter().zip(resolution).enumerate() {
        if !(lo.is_finite() && hi.is_finite() && hi > lo) {
            return Err(Error::DegenerateBox(format!("axis {axis}: [{lo}, {hi}]")));
        }
        if n < 4 {
            return Err(Error::UnderResolved(format!("axis {axis}: {n} cells, need at least 4")));
        }
    }
    let hx = (domain_box[0].1 - domain_box[0].0) / resolution[0] as f64;
    if dim == 2 {
        let hy = (domain_box[1].1 - domain_box[1].0) / resolution[1] as f64;
        if (hx - hy).abs() > SPACING_TOL * hx.max(hy) {
            return Err(Error::AnisotropicSpacing { hx, hy });
        }
    }
    Ok(StructuredGrid {
        dim,
        origin: [domain_box[0].0, if dim == 2 { domain_box[1].0 } else { 0.0 }],
        h: hx,
        cells: [resolution[0], if dim == 2 { resolution[1] } else { 1 }],
        periodic_x,
    })
}

fn ratio_to_count(len: f64, h: f64) -> Result<usize> {
    let k = len / h;
    let r = k.round();
    if (k - r).abs() > NODAL_TOL * k.max(1.0) {
        return Err(Error::NonNodalInterface { position: len, h });
    }
    Ok(r as usize)
}

/// Grid fitted to a shape, with the interfaces on nodes where the solver
/// needs them and `cells_across` cells across the thickness.
///
/// - intervals: 1D grid on `[b_l, b_r]`, or on `Ω` widened by
///   `TRUNCATION_WIDTHS √a` for the whole line;
/// - bands: periodic 2D grid with one period in x;
/// - whole-plane annulus: radial 1D grid on `[0, R]`;
/// - annulus in a bounded domain: 2D grid on `(-b_r, b_r)²` (interfaces are
///   not snapped, the classification is cell-center).
pub fn fitted_grid(shape: &ShapeSpec, a: f64, cells_across: usize) -> Result<StructuredGrid> {
    shape.validate()?;
    if cells_across < 4 {
        return Err(Error::UnderResolved(format!(
            "{cells_across} cells across the thickness, need at least 4"
        )));
    }
    let t = shape.thickness();
    let h = t / cells_across as f64;
    let (f_l, f_r) = (shape.f_l(), shape.f_r());
    let tail = || (TRUNCATION_WIDTHS * a.sqrt() / h).ceil().max(1.0) * h;
    match shape {
        ShapeSpec::IntervalWhole { .. } => {
            let m = tail();
            build_grid(&[(f_l - m, f_r + m)], &[cells_across + 2 * ratio_to_count(m, h)?], false)
        }
        ShapeSpec::IntervalGeneral { b_l, b_r, .. } => {
            let n = ratio_to_count(f_l - b_l, h)? + cells_across + ratio_to_count(b_r - f_r, h)?;
            build_grid(&[(*b_l, *b_r)], &[n], false)
        }
        ShapeSpec::BandWhole { period, .. } => {
            let nx = ratio_to_count(*period, h)?;
            let m = tail();
            let ny = cells_across + 2 * ratio_to_count(m, h)?;
            build_grid(&[(0.0, *period), (f_l - m, f_r + m)], &[nx, ny], true)
        }
        ShapeSpec::BandGeneral { lower, upper, .. } => {
            let nx = ratio_to_count(lower.period, h)?;
            let below = ((f_l - lower.min()) / h).ceil() as usize + 1;
            let above = ((upper.max() - f_r) / h).ceil() as usize + 1;
            let lo = f_l - below as f64 * h;
            let hi = f_r + above as f64 * h;
            build_grid(&[(0.0, lower.period), (lo, hi)], &[nx, below + cells_across + above], true)
        }
        ShapeSpec::AnnulusWhole { .. } => {
            ratio_to_count(f_l, h)?;
            let r_max = f_r + tail();
            build_grid(&[(0.0, r_max)], &[ratio_to_count(r_max, h)?], false)
        }
        ShapeSpec::AnnulusGeneral { b_r, .. } => {
            let n = (2.0 * b_r / h).ceil() as usize;
            build_grid(&[(-b_r, *b_r), (-b_r, *b_r)], &[n, n], false)
        }
    }
}

/// Grid for the inscribed-ball oracle with `cells_across` cells across the
/// thickness: the shape (or `D` for general families) plus a quarter of the
/// thickness on every open side, one period in x for bands.
pub fn oracle_grid(shape: &ShapeSpec, cells_across: usize) -> Result<StructuredGrid> {
    shape.validate()?;
    if cells_across < 4 {
        return Err(Error::UnderResolved(format!(
            "{cells_across} cells across the thickness, need at least 4"
        )));
    }
    let h = shape.thickness() / cells_across as f64;
    let pad = (cells_across / 4).max(1);
    let padded = |lo: f64, hi: f64| {
        let n = ((hi - lo) / h - NODAL_TOL).ceil() as usize + 2 * pad;
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * n as f64 * h;
        ((mid - half, mid + half), n)
    };
    match shape {
        ShapeSpec::IntervalWhole { f_l, f_r } => {
            let (b, n) = padded(*f_l, *f_r);
            build_grid(&[b], &[n], false)
        }
        ShapeSpec::IntervalGeneral { b_l, b_r, .. } => {
            build_grid(&[(*b_l, *b_r)], &[((b_r - b_l) / h).ceil() as usize], false)
        }
        ShapeSpec::BandWhole { f_l, f_r, period } => {
            let nx = ratio_to_count(*period, h)?;
            let (b, n) = padded(*f_l, *f_r);
            build_grid(&[(0.0, *period), b], &[nx, n], true)
        }
        ShapeSpec::BandGeneral { lower, upper, .. } => {
            let nx = ratio_to_count(lower.period, h)?;
            let (b, n) = padded(lower.min(), upper.max());
            build_grid(&[(0.0, lower.period), b], &[nx, n], true)
        }
        ShapeSpec::AnnulusWhole { f_r, .. } => {
            let (b, n) = padded(-f_r, *f_r);
            build_grid(&[b, b], &[n, n], false)
        }
        ShapeSpec::AnnulusGeneral { b_r, .. } => {
            let n = (2.0 * b_r / h).ceil() as usize;
            build_grid(&[(-b_r, *b_r), (-b_r, *b_r)], &[n, n], false)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellLabel {
    /// Center inside `Ω`, `χ = 1`.
    Shape,
    /// Center inside `D \ Ω̄`.
    Void,
    /// Center outside `D`; its nodes are clamped to zero.
    Outside,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellClassification {
    pub labels: Vec<CellLabel>,
}

impl CellClassification {
    pub fn chi(&self, c: usize) -> f64 {
        if self.labels[c] == CellLabel::Shape {
            1.0
        } else {
            0.0
        }
    }

    pub fn count(&self, label: CellLabel) -> usize {
        self.labels.iter().filter(|l| **l == label).count()
    }
}

fn check_coverage(grid: &StructuredGrid, shape: &ShapeSpec) -> Result<()> {
    let o = grid.origin();
    let (f_l, f_r) = (shape.f_l(), shape.f_r());
    let x_hi = o[0] + grid.extent(0);
    let slack = SPACING_TOL * grid.h();
    let covers = |lo: f64, hi: f64, a: f64, b: f64| lo <= a + slack && b - slack <= hi;
    let strictly = |lo: f64, hi: f64| lo < f_l && f_r < hi;
    match shape.family() {
        Family::IntervalWhole | Family::IntervalGeneral => {
            if grid.dim() != 1 {
                return Err(Error::Coverage("interval shapes need a 1D grid".into()));
            }
            if !strictly(o[0], x_hi) {
                return Err(Error::Coverage(format!("Ω = ({f_l}, {f_r}) not inside [{}, {x_hi}]", o[0])));
            }
            if let ShapeSpec::IntervalGeneral { b_l, b_r, .. } = shape {
                if !covers(o[0], x_hi, *b_l, *b_r) {
                    return Err(Error::Coverage(format!("D = ({b_l}, {b_r}) not covered")));
                }
            }
        }
        Family::BandWhole | Family::BandGeneral => {
            if grid.dim() != 2 || !grid.periodic_x() {
                return Err(Error::Coverage("band shapes need a 2D grid periodic in x".into()));
            }
            let period = shape.period().expect("band period");
            if (grid.extent(0) - period).abs() > SPACING_TOL * period.max(1.0) * 1e3 {
                return Err(Error::Coverage(format!(
                    "x extent {} differs from the period {period}",
                    grid.extent(0)
                )));
            }
            let y_hi = o[1] + grid.extent(1);
            if !strictly(o[1], y_hi) {
                return Err(Error::Coverage(format!("band ({f_l}, {f_r}) not inside [{}, {y_hi}]", o[1])));
            }
            if let ShapeSpec::BandGeneral { lower, upper, .. } = shape {
                if !covers(o[1], y_hi, lower.min(), upper.max()) {
                    return Err(Error::Coverage("periodic boundaries leave the grid".into()));
                }
            }
        }
        Family::AnnulusWhole | Family::AnnulusGeneral => {
            if grid.dim() != 2 {
                return Err(Error::Coverage("2D annulus classification needs a 2D grid".into()));
            }
            let y_hi = o[1] + grid.extent(1);
            let inside = o[0] < -f_r && f_r < x_hi && o[1] < -f_r && f_r < y_hi;
            if !inside {
                return Err(Error::Coverage(format!("disk of radius {f_r} not inside the grid box")));
            }
            if let ShapeSpec::AnnulusGeneral { b_r, .. } = shape {
                if !(covers(o[0], x_hi, -b_r, *b_r) && covers(o[1], y_hi, -b_r, *b_r)) {
                    return Err(Error::Coverage(format!("square (-{b_r}, {b_r})² not covered")));
                }
            }
        }
    }
    Ok(())
}

/// Labels each cell by its center: `Shape` in `Ω`, `Void` in `D \ Ω̄`,
/// `Outside` otherwise.
pub fn classify_cells(grid: &StructuredGrid, shape: &ShapeSpec) -> Result<CellClassification> {
    check_coverage(grid, shape)?;
    let labels = (0..grid.cell_count())
        .map(|c| {
            let (i, j) = grid.cell_ij(c);
            let p = grid.cell_center(i, j);
            let p = grid.point(&p);
            if shape.contains(p) {
                CellLabel::Shape
            } else if shape.in_domain(p) {
                CellLabel::Void
            } else {
                CellLabel::Outside
            }
        })
        .collect();
    Ok(CellClassification { labels })
}

/// Signed distance from `point` to `Γ`, positive in `Ω`.
pub fn signed_distance(shape: &ShapeSpec, point: &[f64]) -> f64 {
    shape.signed_distance(point)
}

/// Per-cell thickness values, defined where `mask` is set.
#[derive(Debug, Clone, PartialEq)]
pub struct ThicknessField {
    pub grid: StructuredGrid,
    pub values: Vec<f64>,
    pub mask: Vec<bool>,
}

impl ThicknessField {
    /// Largest `|value - reference|` over masked cells.
    pub fn max_deviation(&self, reference: f64) -> f64 {
        self.values
            .iter()
            .zip(&self.mask)
            .filter(|(_, m)| **m)
            .map(|(v, _)| (v - reference).abs())
            .fold(0.0, f64::max)
    }

    /// CSV with header `x,thickness` or `x,y,thickness`, masked cells only,
    /// row-major.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let header: &[&str] = if self.grid.dim() == 1 {
            &["x", "thickness"]
        } else {
            &["x", "y", "thickness"]
        };
        let rows = (0..self.grid.cell_count()).filter(|c| self.mask[*c]).map(|c| {
            let (i, j) = self.grid.cell_ij(c);
            let p = self.grid.cell_center(i, j);
            let mut row = self.grid.point(&p).to_vec();
            row.push(self.values[c]);
            row
        });
        io::write_csv(path, header, rows)
    }
}

/// For every shape cell `x`, the largest `2ρ(c)` over cell centers `c` with
/// `|x - c| <= ρ(c)`, where `ρ(c)` is the distance from `c` to `Γ`.
///
/// Cost is proportional to the number of shape cells times the cells per
/// ball, so grids are capped at [`ORACLE_MAX_CELLS`].
pub fn geometric_thickness_oracle(grid: &StructuredGrid, shape: &ShapeSpec) -> Result<ThicknessField> {
    let n = grid.cell_count();
    if n > ORACLE_MAX_CELLS {
        return Err(Error::OracleTooLarge(n));
    }
    let classes = classify_cells(grid, shape)?;
    let mask: Vec<bool> = classes.labels.iter().map(|l| *l == CellLabel::Shape).collect();
    let sources: Vec<usize> = (0..n).filter(|c| mask[*c]).collect();
    if sources.is_empty() {
        return Err(Error::EmptyShape);
    }
    let h = grid.h();
    let [nx, ny] = grid.cells();
    let period = grid.extent(0);

    // Max is exact, so the reduction order does not affect the result.
    let values = sources
        .par_iter()
        .fold(
            || vec![0.0f64; n],
            |mut acc, &c| {
                let (ci, cj) = grid.cell_ij(c);
                let center = grid.cell_center(ci, cj);
                let rho = shape.signed_distance(grid.point(&center));
                if rho <= 0.0 {
                    return acc;
                }
                let candidate = 2.0 * rho;
                let reach = (rho / h).ceil() as isize;
                let j_range = if grid.dim() == 1 {
                    0..=0
                } else {
                    -reach..=reach
                };
                for dj in j_range {
                    let tj = cj as isize + dj;
                    if tj < 0 || tj >= ny as isize {
                        continue;
                    }
                    for di in -reach..=reach {
                        let mut ti = ci as isize + di;
                        if grid.periodic_x() {
                            ti = ti.rem_euclid(nx as isize);
                        } else if ti < 0 || ti >= nx as isize {
                            continue;
                        }
                        let target = grid.cell_index(ti as usize, tj as usize);
                        if !mask[target] {
                            continue;
                        }
                        let mut dx = di as f64 * h;
                        if grid.periodic_x() {
                            dx -= period * (dx / period).round();
                        }
                        let dy = dj as f64 * h;
                        if dx * dx + dy * dy <= rho * rho && candidate > acc[target] {
                            acc[target] = candidate;
                        }
                    }
                }
                acc
            },
        )
        .reduce(
            || vec![0.0f64; n],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x = x.max(y);
                }
                a
            },
        );

    Ok(ThicknessField {
        grid: grid.clone(),
        values,
        mask,
    })
}
