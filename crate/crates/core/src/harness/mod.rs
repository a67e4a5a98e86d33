//! Sweeps over the diffusion parameter, rate fitting, and automated
//! checks of every thickness bound.

pub mod report;
mod verify;

pub use verify::{verify_theorems, CheckRecord, Fault, Suite, VerificationReport};

use crate::analytic::{self, AnalyticSolution, BoundKind};
use crate::error::{Error, Result};
use crate::geometry::fitted_grid;
use crate::io;
use crate::shape::ShapeSpec;
use crate::solver::{self, DiscreteField, SolverKind};
use crate::thickness::{self, InverseThicknessField};
use rayon::prelude::*;
use report::nullable;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Boundary layers have width `√a`; grids must resolve them with 8 cells.
pub const CELLS_PER_LAYER: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Analytic,
    Interval,
    Radial,
    Plane,
}

impl From<SolverKind> for Method {
    fn from(k: SolverKind) -> Self {
        match k {
            SolverKind::Interval => Method::Interval,
            SolverKind::Radial => Method::Radial,
            SolverKind::Plane => Method::Plane,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Case {
    pub shape: ShapeSpec,
    pub method: Method,
}

impl Case {
    pub fn analytic(shape: ShapeSpec) -> Self {
        Case {
            shape,
            method: Method::Analytic,
        }
    }

    /// The discrete solver matching the shape.
    pub fn discrete(shape: ShapeSpec) -> Self {
        let method = SolverKind::for_shape(&shape).into();
        Case { shape, method }
    }

    pub fn label(&self) -> String {
        format!("{}/{}", self.shape.family(), serde_json::to_value(self.method).unwrap().as_str().unwrap())
    }
}

/// Cells across the thickness for a discrete solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resolution {
    /// Smallest count with `h <= √a / 8`.
    Auto,
    /// Fixed count; rejected when it violates `h <= √a / 8`.
    CellsAcross(usize),
}

impl Resolution {
    pub fn cells_across(self, thickness: f64, a: f64) -> Result<usize> {
        let needed = (CELLS_PER_LAYER * thickness / a.sqrt() * (1.0 - 1e-12)).ceil().max(4.0) as usize;
        match self {
            Resolution::Auto => Ok(needed),
            Resolution::CellsAcross(n) if n >= needed => Ok(n),
            Resolution::CellsAcross(n) => Err(Error::UnderResolved(format!(
                "h = {:.3e} exceeds √a/8 = {:.3e} ({n} cells across, need {needed})",
                thickness / n as f64,
                a.sqrt() / CELLS_PER_LAYER
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    #[serde(with = "nullable")]
    pub a: f64,
    /// `T^a - T̄` for pointwise families (largest over cells for discrete
    /// solves), `‖1/T^a - 1/T̄‖_{L²(Ω)}` otherwise.
    #[serde(with = "nullable")]
    pub error: f64,
    #[serde(with = "nullable")]
    pub bound: f64,
    #[serde(with = "nullable")]
    pub slack: f64,
    /// `error <= bound + slack`, and for two-sided bounds also the lower
    /// side of the bound.
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub case: Case,
    pub samples: Vec<Sample>,
    #[serde(with = "nullable")]
    pub slope: f64,
    #[serde(with = "nullable")]
    pub intercept: f64,
}

impl ConvergenceReport {
    pub fn all_passed(&self) -> bool {
        self.samples.iter().all(|s| s.passed)
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        report::write_json(path, self)
    }

    pub fn read_json(path: &Path) -> Result<Self> {
        report::read_json(path)
    }

    /// CSV `a,error,bound,slack,passed` with `passed` as 1 or 0.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let rows = self
            .samples
            .iter()
            .map(|s| vec![s.a, s.error, s.bound, s.slack, if s.passed { 1.0 } else { 0.0 }]);
        io::write_csv(path, &["a", "error", "bound", "slack", "passed"], rows)
    }
}

/// Measured quantity of one discrete or analytic run, with both sides of
/// the matching bound.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    pub error: f64,
    /// Smallest `T - T̄` over cells for pointwise families, else `error`.
    pub error_low: f64,
    pub lower: f64,
    pub upper: f64,
    pub slack: f64,
    pub h: Option<f64>,
}

impl Measurement {
    pub fn passed(&self) -> bool {
        self.error <= self.upper + self.slack && self.error_low >= self.lower - self.slack
    }
}

/// Discrete solve on the fitted grid for `case.shape`.
pub fn discrete_solve(shape: &ShapeSpec, a: f64, cells_across: usize, rel_tol: f64) -> Result<DiscreteField> {
    let grid = fitted_grid(shape, a, cells_across)?;
    let system = solver::assemble(&grid, shape, a)?;
    solver::solve_spd(&system, rel_tol)
}

fn pointwise_extremes(inv: &InverseThicknessField, t_bar: f64) -> (f64, f64) {
    inv.shape_cells()
        .map(|c| 1.0 / inv.values[c] - t_bar)
        .fold((f64::NEG_INFINITY, f64::INFINITY), |(hi, lo), e| (hi.max(e), lo.min(e)))
}

/// Error measure and bound for one `a`.
pub fn measure(case: &Case, a: f64, resolution: Resolution, rel_tol: f64) -> Result<Measurement> {
    let shape = &case.shape;
    let reference: AnalyticSolution = analytic::solve(shape, a)?;
    let t_bar = shape.thickness();
    let pointwise = reference.bound_kind == BoundKind::ThicknessExcess;
    if case.method == Method::Analytic {
        if !pointwise {
            return Err(Error::Config(format!(
                "{} has no closed form; use the discrete solver",
                shape.family()
            )));
        }
        return Ok(Measurement {
            error: reference.excess,
            error_low: reference.excess,
            lower: reference.lower_bound,
            upper: reference.upper_bound,
            slack: 0.0,
            h: None,
        });
    }
    let expected: Method = SolverKind::for_shape(shape).into();
    if case.method != expected {
        return Err(Error::Config(format!(
            "{} is solved with the {expected:?} solver, not {:?}",
            shape.family(),
            case.method
        )));
    }
    let cells = resolution.cells_across(t_bar, a)?;
    let field = discrete_solve(shape, a, cells, rel_tol)?;
    let h = field.grid.h();
    let inv = thickness::inverse_thickness(&thickness::divergence(&field), a);
    // 2h/T² on the inverse thickness is 2h on the thickness itself.
    let (error, error_low, slack) = if pointwise {
        if field.kind == SolverKind::Radial {
            let p = solver::radial_p_star(&field, shape)?;
            let e = 2.0 / (a.sqrt() * p) - t_bar;
            (e, e, 2.0 * h)
        } else {
            let (hi, lo) = pointwise_extremes(&inv, t_bar);
            (hi, lo, 2.0 * h)
        }
    } else {
        let e = thickness::error_norms(&inv, 1.0 / t_bar)?.l2_on_omega;
        (e, e, 2.0 * h / (t_bar * t_bar))
    };
    Ok(Measurement {
        error,
        error_low,
        lower: reference.lower_bound,
        upper: reference.upper_bound,
        slack,
        h: Some(h),
    })
}

/// Runs `case` for every `a` (in parallel, reported in ascending `a`) and
/// fits the log-log rate over samples with positive error.
pub fn sweep_a(case: &Case, a_values: &[f64], resolution: Resolution, rel_tol: f64) -> Result<ConvergenceReport> {
    if a_values.is_empty() || a_values.iter().any(|a| !(*a > 0.0 && a.is_finite())) {
        return Err(Error::Config(format!("a-values must be positive and finite, got {a_values:?}")));
    }
    let mut a_sorted = a_values.to_vec();
    a_sorted.sort_by(f64::total_cmp);
    if case.method != Method::Analytic {
        for a in &a_sorted {
            resolution.cells_across(case.shape.thickness(), *a)?;
        }
    }
    let samples = a_sorted
        .par_iter()
        .map(|&a| {
            let m = measure(case, a, resolution, rel_tol)?;
            Ok(Sample {
                a,
                error: m.error,
                bound: m.upper,
                slack: m.slack,
                passed: m.passed(),
            })
        })
        .collect::<Result<Vec<Sample>>>()?;
    let points: Vec<(f64, f64)> = samples.iter().filter(|s| s.error > 0.0).map(|s| (s.a, s.error)).collect();
    let (slope, intercept) = fit_rate(&points).unwrap_or((f64::NAN, f64::NAN));
    Ok(ConvergenceReport {
        case: case.clone(),
        samples,
        slope,
        intercept,
    })
}

/// Least squares line through `(ln a, ln error)`.
pub fn fit_rate(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    if points.len() < 3 {
        return Err(Error::DegenerateFit(format!("need at least 3 points, got {}", points.len())));
    }
    if points.iter().any(|(a, e)| !(*a > 0.0 && *e > 0.0)) {
        return Err(Error::DegenerateFit("a and error must be positive".into()));
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx <= 1e-24 * (1.0 + mx * mx) {
        return Err(Error::DegenerateFit("all a values are equal".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}
