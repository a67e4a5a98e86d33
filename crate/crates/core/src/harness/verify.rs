use super::report::{self, nullable};
use super::{discrete_solve, fit_rate, measure, Case, Resolution};
use crate::analytic::{self, AnalyticSolution};
use crate::bessel::{self, check_ratio_inequalities};
use crate::error::{Error, Result};
use crate::geometry::{fitted_grid, CellLabel, StructuredGrid};
use crate::shape::{PeriodicBoundary, ShapeSpec};
use crate::solver::{self, homogeneous_boundary_probe, DiscreteField};
use crate::thickness;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Deliberate defects for exercising the report's failure path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// `x / (-1/2 + √(1/4 + x²))` in place of the lower bound on `K₀/K₁`.
    KRatioSignFlip,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Suite {
    pub name: String,
    pub fault: Option<Fault>,
    /// Cells across the thickness for every discrete check; counts that
    /// violate `h <= √a/8` are reported as under-resolved failures.
    pub cells_override: Option<usize>,
    pub rel_tol: f64,
}

impl Suite {
    /// `default` runs every check; `quick` drops the heaviest plane solves.
    pub fn named(name: &str) -> Result<Self> {
        match name {
            "default" | "quick" => Ok(Suite {
                name: name.to_string(),
                fault: None,
                cells_override: None,
                rel_tol: 1e-10,
            }),
            other => Err(Error::Config(format!("unknown suite {other:?} (expected default or quick)"))),
        }
    }

    fn quick(&self) -> bool {
        self.name == "quick"
    }

    /// Cells across for a discrete check that would otherwise use `preferred`.
    fn cells(&self, thickness: f64, a: f64, preferred: usize) -> Result<usize> {
        match self.cells_override {
            Some(n) => Resolution::CellsAcross(n).cells_across(thickness, a),
            None => Ok(preferred.max(Resolution::Auto.cells_across(thickness, a)?)),
        }
    }
}

/// One comparison, with both sides stated: passes when
/// `lower - slack <= measured <= upper + slack`. Missing sides are `null`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check: String,
    pub case: String,
    #[serde(with = "nullable")]
    pub a: f64,
    #[serde(with = "nullable")]
    pub measured: f64,
    #[serde(with = "nullable")]
    pub lower: f64,
    #[serde(with = "nullable")]
    pub upper: f64,
    #[serde(with = "nullable")]
    pub slack: f64,
    pub passed: bool,
    pub note: String,
}

impl CheckRecord {
    fn new(check: &str, case: &str, a: f64, measured: f64, lower: f64, upper: f64, slack: f64) -> Self {
        let above = lower.is_nan() || measured >= lower - slack;
        let below = upper.is_nan() || measured <= upper + slack;
        CheckRecord {
            check: check.to_string(),
            case: case.to_string(),
            a,
            measured,
            lower,
            upper,
            slack,
            passed: measured.is_finite() && above && below,
            note: String::new(),
        }
    }

    fn failed(check: &str, case: &str, a: f64, err: &Error) -> Self {
        CheckRecord {
            check: check.to_string(),
            case: case.to_string(),
            a,
            measured: f64::NAN,
            lower: f64::NAN,
            upper: f64::NAN,
            slack: f64::NAN,
            passed: false,
            note: err.to_string(),
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: Suite,
    pub records: Vec<CheckRecord>,
    pub passed: usize,
    pub failed: usize,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| !r.passed)
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        report::write_json(path, self)
    }

    pub fn read_json(path: &Path) -> Result<Self> {
        report::read_json(path)
    }
}

fn geometric(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (l, h) = (lo.ln(), hi.ln());
    (0..n).map(|k| (l + (h - l) * k as f64 / (n - 1) as f64).exp()).collect()
}

fn interval_whole_checks(_: &Suite) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for f_l in [-1.5, -0.25, 0.0, 0.7] {
        for t in [0.1, 1.0, 3.7, 12.0, 50.0] {
            let f_r = f_l + t;
            let case = format!("interval-whole({f_l},{f_r})");
            for a in geometric(1e-8, 1.0, 5) {
                out.push(match analytic::interval_whole(f_l, f_r, a) {
                    Ok(s) => {
                        let t_bar = f_r - f_l;
                        let dev = (s.thickness_pde - t_bar - 2.0 * a.sqrt()).abs();
                        CheckRecord::new("interval-whole-excess", &case, a, dev, f64::NAN, 1e-12 * t_bar, 0.0)
                    }
                    Err(e) => CheckRecord::failed("interval-whole-excess", &case, a, &e),
                });
            }
        }
    }
    out
}

fn excess_record(check: &str, case: &str, a: f64, sol: Result<AnalyticSolution>) -> CheckRecord {
    match sol {
        Ok(s) => CheckRecord::new(check, case, a, s.excess, s.lower_bound, s.upper_bound, 0.0),
        Err(e) => CheckRecord::failed(check, case, a, &e),
    }
}

fn interval_general_checks(_: &Suite) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for t in [0.5, 1.0, 2.0] {
        for (ml, mr) in [(0.5, 0.5), (0.5, 2.0), (2.0, 1.0)] {
            let (f_l, f_r) = (0.0, t);
            let (b_l, b_r) = (f_l - ml, f_r + mr);
            let case = format!("interval-general({f_l},{f_r},{b_l},{b_r})");
            for a in geometric(1e-6, 1.0, 4) {
                out.push(excess_record(
                    "interval-general-bounds",
                    &case,
                    a,
                    analytic::interval_general(f_l, f_r, b_l, b_r, a),
                ));
            }
        }
    }
    out
}

fn band_whole_checks(_: &Suite) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for (f_l, f_r) in [(0.0, 1.0), (-2.0, 0.5)] {
        let case = format!("band-whole({f_l},{f_r})");
        for a in geometric(1e-8, 1.0, 5) {
            out.push(excess_record("band-whole-excess", &case, a, analytic::band_whole(f_l, f_r, a, 1.0)));
        }
    }
    out
}

fn annulus_whole_checks(_: &Suite) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for (f_l, f_r) in [(1.0, 2.0), (0.1, 2.0), (1.0, 1.1), (0.05, 1.0), (3.0, 10.0)] {
        let case = format!("annulus-whole({f_l},{f_r})");
        let t2 = (f_r - f_l) * (f_r - f_l);
        for s in geometric(1e-8, 1.0, 5) {
            let a = s * t2;
            out.push(excess_record("annulus-whole-bounds", &case, a, analytic::annulus_whole(f_l, f_r, a)));
        }
    }
    out
}

fn wavy_band() -> ShapeSpec {
    ShapeSpec::band_general(
        0.0,
        1.0,
        PeriodicBoundary::cosine(1.0, -0.5, 0.1),
        PeriodicBoundary::constant(1.0, 1.5),
    )
    .expect("valid band")
}

fn square_annulus() -> ShapeSpec {
    ShapeSpec::annulus_general(1.0, 2.0, 2.5).expect("valid annulus")
}

fn l2_envelope_checks(check: &str, shape: ShapeSpec, a_values: &[f64], suite: &Suite) -> Vec<CheckRecord> {
    let case = Case::discrete(shape);
    let label = case.label();
    a_values
        .iter()
        .map(|&a| {
            let res = match suite.cells(case.shape.thickness(), a, 0) {
                Ok(n) => Resolution::CellsAcross(n),
                Err(e) => return CheckRecord::failed(check, &label, a, &e),
            };
            match measure(&case, a, res, suite.rel_tol) {
                Ok(m) => CheckRecord::new(check, &label, a, m.error, f64::NAN, m.upper, m.slack)
                    .with_note(format!("h = {}", m.h.unwrap_or(f64::NAN))),
                Err(e) => CheckRecord::failed(check, &label, a, &e),
            }
        })
        .collect()
}

fn band_general_checks(suite: &Suite) -> Vec<CheckRecord> {
    let mut out = l2_envelope_checks("band-general-l2", wavy_band(), &[0.04, 0.02, 0.01], suite);
    let points: Vec<(f64, f64)> = out.iter().filter(|r| r.passed).map(|r| (r.a, r.measured)).collect();
    out.push(match fit_rate(&points) {
        Ok((slope, _)) => CheckRecord::new("band-general-rate", &out[0].case, f64::NAN, slope, 0.4, 0.6, 0.0),
        Err(e) => CheckRecord::failed("band-general-rate", &out[0].case, f64::NAN, &e),
    });
    out
}

fn annulus_general_checks(suite: &Suite) -> Vec<CheckRecord> {
    let a_values: &[f64] = if suite.quick() { &[0.04] } else { &[0.04, 0.02] };
    l2_envelope_checks("annulus-general-l2", square_annulus(), a_values, suite)
}

fn interval_solver_checks(suite: &Suite) -> Vec<CheckRecord> {
    let check = "interval-nodal-error";
    let shape = ShapeSpec::interval_general(0.0, 1.0, -1.0, 2.0).expect("valid interval");
    let case = "interval-general(0,1,-1,2)";
    let a = 0.04;
    let run = || -> Result<CheckRecord> {
        let cells = suite.cells(1.0, a, 512)?;
        let field = discrete_solve(&shape, a, cells, 1e-12)?;
        let exact = analytic::solve(&shape, a)?;
        let g = &field.grid;
        let mut err: f64 = 0.0;
        for k in 0..g.node_count() {
            err = err.max((field.components[0][k] - exact.profile(g.node_coord(k, 0)[0])?).abs());
        }
        Ok(CheckRecord::new(check, case, a, err, f64::NAN, 5e-5, 0.0).with_note(format!("h = {}", g.h())))
    };
    vec![run().unwrap_or_else(|e| CheckRecord::failed(check, case, a, &e))]
}

fn radial_checks(suite: &Suite) -> Vec<CheckRecord> {
    let shape = ShapeSpec::annulus_whole(1.0, 2.0).expect("valid annulus");
    let case = "annulus-whole(1,2)/radial";
    let a = 0.04;
    let run = || -> Result<Vec<CheckRecord>> {
        let cells = suite.cells(1.0, a, 1024)?;
        let field = discrete_solve(&shape, a, cells, suite.rel_tol)?;
        let exact = analytic::annulus_whole(1.0, 2.0, a)?.p_star;
        let p = solver::radial_p_star(&field, &shape)?;
        let inv = thickness::inverse_thickness(&thickness::divergence(&field), a);
        Ok(vec![
            CheckRecord::new("radial-p-star", case, a, (p - exact).abs() / exact, f64::NAN, 1e-4, 0.0),
            CheckRecord::new("radial-p-spread", case, a, inv.spread() / inv.mean(), f64::NAN, 1e-3, 0.0),
        ])
    };
    run().unwrap_or_else(|e| {
        vec![
            CheckRecord::failed("radial-p-star", case, a, &e),
            CheckRecord::failed("radial-p-spread", case, a, &e),
        ]
    })
}

fn band_reduction_checks(suite: &Suite) -> Vec<CheckRecord> {
    let case = "band-whole(0,1)/plane";
    let a = 0.04;
    let run = || -> Result<Vec<CheckRecord>> {
        let cells = suite.cells(1.0, a, 64)?;
        let band = ShapeSpec::band_whole(0.0, 1.0, 0.25)?;
        let line = ShapeSpec::interval_whole(0.0, 1.0)?;
        let f2 = discrete_solve(&band, a, cells, 1e-13)?;
        let f1 = discrete_solve(&line, a, cells, 1e-13)?;
        let scale = f1.max_norm();
        let (mut ex, mut ey): (f64, f64) = (0.0, 0.0);
        for k in 0..f2.grid.node_count() {
            let (_, j) = f2.grid.node_ij(k);
            ex = ex.max(f2.components[0][k].abs());
            ey = ey.max((f2.components[1][k] - f1.components[0][j]).abs());
        }
        Ok(vec![
            CheckRecord::new("band-reduction-sx", case, a, ex / scale, f64::NAN, 1e-8, 0.0),
            CheckRecord::new("band-reduction-sy", case, a, ey / scale, f64::NAN, 1e-8, 0.0),
        ])
    };
    run().unwrap_or_else(|e| {
        vec![
            CheckRecord::failed("band-reduction-sx", case, a, &e),
            CheckRecord::failed("band-reduction-sy", case, a, &e),
        ]
    })
}

/// `x` samples for the Bessel ratio properties.
pub(crate) fn bessel_samples() -> Vec<f64> {
    geometric(1e-3, 1e3, 1000)
}

fn bessel_checks(suite: &Suite) -> Vec<CheckRecord> {
    let xs = bessel_samples();
    let mut k_worst = f64::INFINITY;
    let mut i_worst = f64::NEG_INFINITY;
    let mut d_worst = f64::NEG_INFINITY;
    let mut violations = [0usize; 3];
    for &x in &xs {
        let (k0, k1) = bessel::k01e(x);
        let k_bound = match suite.fault {
            Some(Fault::KRatioSignFlip) => x / (-0.5 + (0.25 + x * x).sqrt()),
            None => bessel::k_ratio_lower_bound(x),
        };
        let k = (k0 / k1) / k_bound;
        let i = (bessel::i0e(x) / bessel::i1e(x)) / bessel::i_ratio_upper_bound(x);
        let y = x * bessel::K1_DECAY_STEP;
        let d = (y.sqrt() * bessel::k1e(y)) / (x.sqrt() * k1);
        k_worst = k_worst.min(k);
        i_worst = i_worst.max(i);
        d_worst = d_worst.max(d);
        let checks = check_ratio_inequalities(x).map(|c| [c.k_lower_holds, c.i_upper_holds, c.k1_decay_holds]);
        let flags = checks.unwrap_or([false; 3]);
        let k_ok = if suite.fault.is_some() { k >= 1.0 } else { flags[0] };
        for (v, ok) in violations.iter_mut().zip([k_ok, flags[1], flags[2]]) {
            if !ok {
                *v += 1;
            }
        }
    }
    let note = |n: usize| format!("{} samples in [1e-3, 1e3], {n} violations", xs.len());
    vec![
        CheckRecord::new("bessel-k-ratio-lower", "K0/K1 over bound", f64::NAN, k_worst, 1.0, f64::NAN, 0.0)
            .with_note(note(violations[0])),
        CheckRecord::new("bessel-i-ratio-upper", "I0/I1 over bound", f64::NAN, i_worst, f64::NAN, 1.0, 0.0)
            .with_note(note(violations[1])),
        CheckRecord::new("bessel-k1-decay", "sqrt(x)e^x K1 at 1.01x over x", f64::NAN, d_worst, f64::NAN, 1.0, 0.0)
            .with_note(note(violations[2])),
    ]
}

/// Probe grid for `shape`: fitted at `cells` across, radial for the
/// whole-plane annulus.
fn probe_field(
    shape: &ShapeSpec,
    a: f64,
    cells: usize,
    data: impl Fn([f64; 2]) -> [f64; 2],
    rel_tol: f64,
) -> Result<DiscreteField> {
    let grid = fitted_grid(shape, a, cells)?;
    let comps = if grid.dim() == 2 { 2 } else { 1 };
    let mut g = vec![vec![0.0; grid.node_count()]; comps];
    for k in 0..grid.node_count() {
        let (i, j) = grid.node_ij(k);
        let v = data(grid.node_coord(i, j));
        for (c, gc) in g.iter_mut().enumerate() {
            gc[k] = v[c];
        }
    }
    homogeneous_boundary_probe(&grid, shape, a, &g, rel_tol)
}

/// `(max interior |d|, max boundary |d|)` over nodes.
pub fn probe_extremes(field: &DiscreteField) -> (f64, f64) {
    let mut interior: f64 = 0.0;
    let mut boundary: f64 = 0.0;
    for k in 0..field.grid.node_count() {
        let v = field.norm_at(k);
        if field.is_dirichlet(k) {
            boundary = boundary.max(v);
        } else {
            interior = interior.max(v);
        }
    }
    (interior, boundary)
}

type ProbeData = Box<dyn Fn([f64; 2]) -> [f64; 2] + Sync>;

fn whole_space_trace(shape: &ShapeSpec, a: f64) -> Result<ProbeData> {
    let sol = match shape {
        ShapeSpec::IntervalGeneral { f_l, f_r, .. } => analytic::interval_whole(*f_l, *f_r, a)?,
        _ => analytic::solve(shape, a)?,
    };
    Ok(match shape.dim() {
        1 => Box::new(move |p| [sol.profile(p[0]).unwrap_or(0.0), 0.0]),
        _ if shape.period().is_some() => Box::new(move |p| [0.0, sol.profile(p[1]).unwrap_or(0.0)]),
        _ => Box::new(move |p| {
            let r = p[0].hypot(p[1]);
            let s = sol.profile(r).unwrap_or(0.0);
            if r > 0.0 {
                [s * p[0] / r, s * p[1] / r]
            } else {
                [0.0, 0.0]
            }
        }),
    })
}

/// Probes for the maximum principle: shape, data, and a short label.
pub(crate) fn probe_cases(a: f64) -> Result<Vec<(String, ShapeSpec, ProbeData)>> {
    let ig = ShapeSpec::interval_general(0.0, 1.0, -1.0, 2.0)?;
    let ig2 = ShapeSpec::interval_general(0.0, 1.0, -0.5, 3.0)?;
    let iw = ShapeSpec::interval_whole(0.0, 1.0)?;
    let aw = ShapeSpec::annulus_whole(1.0, 2.0)?;
    let bw = ShapeSpec::band_whole(0.0, 1.0, 0.5)?;
    let bg = wavy_band();
    let ag = square_annulus();
    let tau = std::f64::consts::TAU;
    let ends = |lo: f64, left: f64, right: f64| -> ProbeData {
        Box::new(move |p| [if p[0] <= lo { left } else { right }, 0.0])
    };
    Ok(vec![
        ("interval-general constant 1".into(), ig.clone(), Box::new(|_| [1.0, 0.0])),
        ("interval-general whole-line trace".into(), ig.clone(), whole_space_trace(&ig, a)?),
        ("interval-general (2, -3)".into(), ig2, ends(0.0, 2.0, -3.0)),
        ("interval-whole truncated (1, -0.5)".into(), iw, ends(0.0, 1.0, -0.5)),
        ("annulus-whole radial S(R) = 1".into(), aw, Box::new(|p| [if p[0] > 2.0 { 1.0 } else { 0.0 }, 0.0])),
        (
            "band-whole edges".into(),
            bw,
            Box::new(|p| [0.5, if p[1] > 0.5 { 1.0 } else { -1.0 }]),
        ),
        ("band-general whole-space trace".into(), bg.clone(), whole_space_trace(&bg, a)?),
        (
            "band-general oscillating".into(),
            bg,
            Box::new(move |p| [(tau * p[0]).sin(), (tau * p[0]).cos() * p[1]]),
        ),
        ("annulus-general whole-space trace".into(), ag.clone(), whole_space_trace(&ag, a)?),
        ("annulus-general linear".into(), ag, Box::new(|p| [p[0] / 2.5, -p[1] / 2.5])),
    ])
}

const PROBE_A: f64 = 0.04;

fn max_principle_checks(suite: &Suite) -> Vec<CheckRecord> {
    let check = "max-principle";
    let cases = match probe_cases(PROBE_A) {
        Ok(c) => c,
        Err(e) => return vec![CheckRecord::failed(check, "probe setup", PROBE_A, &e)],
    };
    cases
        .par_iter()
        .map(|(label, shape, data)| {
            let run = || -> Result<CheckRecord> {
                let cells = suite.cells(shape.thickness(), PROBE_A, 0)?;
                let field = probe_field(shape, PROBE_A, cells, data, suite.rel_tol)?;
                let (inner, outer) = probe_extremes(&field);
                let slack = 10.0 * suite.rel_tol * outer.max(f64::MIN_POSITIVE);
                Ok(CheckRecord::new(check, label, PROBE_A, inner, f64::NAN, outer, slack))
            };
            run().unwrap_or_else(|e| CheckRecord::failed(check, label, PROBE_A, &e))
        })
        .collect()
}

/// `∫_Ω |∇d|²` of a plane probe, exact for the bilinear interpolant.
pub fn shape_gradient_energy(field: &DiscreteField) -> f64 {
    const K: [[f64; 4]; 4] = [
        [4.0, -1.0, -2.0, -1.0],
        [-1.0, 4.0, -1.0, -2.0],
        [-2.0, -1.0, 4.0, -1.0],
        [-1.0, -2.0, -1.0, 4.0],
    ];
    let g = &field.grid;
    let mut total = 0.0;
    for c in 0..g.cell_count() {
        if field.labels[c] != CellLabel::Shape {
            continue;
        }
        let (i, j) = g.cell_ij(c);
        let nodes = g.cell_nodes(i, j);
        for comp in &field.components {
            let d: Vec<f64> = nodes.iter().map(|&k| comp[k]).collect();
            for p in 0..4 {
                for q in 0..4 {
                    total += d[p] * K[p][q] * d[q] / 6.0;
                }
            }
        }
    }
    total
}

/// `½ ∫_D |Δc| |d|²` by the midpoint rule, for a cutoff with `|Δc|`
/// given at cell centers.
fn cutoff_energy(field: &DiscreteField, grid: &StructuredGrid, laplacian: impl Fn([f64; 2]) -> f64) -> f64 {
    let mut total = 0.0;
    for c in 0..grid.cell_count() {
        let (i, j) = grid.cell_ij(c);
        let lap = laplacian(grid.cell_center(i, j));
        if lap == 0.0 {
            continue;
        }
        let nodes = grid.cell_nodes(i, j);
        let d2: f64 = field
            .components
            .iter()
            .map(|comp| {
                let mid = nodes.iter().map(|&k| comp[k]).sum::<f64>() / 4.0;
                mid * mid
            })
            .sum();
        total += 0.5 * lap * d2 * grid.cell_area();
    }
    total
}

/// Interior H¹ estimate on the wavy band and the square annulus, with the
/// whole-space trace as probe data. The cutoff energy is a midpoint sum, so
/// the comparison allows a relative slack of `4h/m`.
fn interior_h1_checks(suite: &Suite) -> Vec<CheckRecord> {
    let check = "interior-h1";
    let a = PROBE_A;
    let band = |shape: ShapeSpec| -> Result<CheckRecord> {
        let ShapeSpec::BandGeneral { f_l, f_r, lower, upper } = &shape else {
            unreachable!()
        };
        let (lo, hi) = (lower.max(), upper.min());
        let (ml, mr) = (f_l - lo, hi - f_r);
        let cells = suite.cells(shape.thickness(), a, 0)?;
        let field = probe_field(&shape, a, cells, whole_space_trace(&shape, a)?, suite.rel_tol)?;
        let lhs = shape_gradient_energy(&field);
        let (f_l, f_r) = (*f_l, *f_r);
        let rhs = cutoff_energy(&field, &field.grid, |p| {
            if lo < p[1] && p[1] < f_l {
                4.0 / (ml * ml)
            } else if f_r < p[1] && p[1] < hi {
                4.0 / (mr * mr)
            } else {
                0.0
            }
        });
        let slack = 4.0 * field.grid.h() / ml.min(mr) * rhs;
        Ok(CheckRecord::new(check, "band-general wavy", a, lhs, f64::NAN, rhs, slack))
    };
    let annulus = |shape: ShapeSpec| -> Result<CheckRecord> {
        let (f, b) = (shape.f_r(), shape.margin().expect("general annulus") + shape.f_r());
        let p2 = 0.5 * (f * f + b * b);
        let k = 2.0 / (f * f * f.ln() + b * b * b.ln() - p2 * p2.ln());
        let cells = suite.cells(shape.thickness(), a, 0)?;
        let field = probe_field(&shape, a, cells, whole_space_trace(&shape, a)?, suite.rel_tol)?;
        let lhs = shape_gradient_energy(&field);
        let rhs = cutoff_energy(&field, &field.grid, |p| {
            let r = p[0].hypot(p[1]);
            if f < r && r < b {
                k
            } else {
                0.0
            }
        });
        let slack = 4.0 * field.grid.h() / (b - f) * rhs;
        Ok(CheckRecord::new(check, "annulus-general square", a, lhs, f64::NAN, rhs, slack)
            .with_note(format!("K = {k}")))
    };
    vec![
        band(wavy_band()).unwrap_or_else(|e| CheckRecord::failed(check, "band-general wavy", a, &e)),
        annulus(square_annulus()).unwrap_or_else(|e| CheckRecord::failed(check, "annulus-general square", a, &e)),
    ]
}

type Group = fn(&Suite) -> Vec<CheckRecord>;

/// Runs every check of the suite. Groups run in parallel; records keep a
/// fixed order, and failures never stop the run.
pub fn verify_theorems(suite: &Suite) -> VerificationReport {
    let groups: [Group; 12] = [
        interval_whole_checks,
        interval_general_checks,
        band_whole_checks,
        annulus_whole_checks,
        bessel_checks,
        interval_solver_checks,
        radial_checks,
        band_reduction_checks,
        band_general_checks,
        annulus_general_checks,
        max_principle_checks,
        interior_h1_checks,
    ];
    let records: Vec<CheckRecord> = groups.par_iter().map(|g| g(suite)).collect::<Vec<_>>().concat();
    let passed = records.iter().filter(|r| r.passed).count();
    VerificationReport {
        suite: suite.clone(),
        failed: records.len() - passed,
        passed,
        records,
    }
}
