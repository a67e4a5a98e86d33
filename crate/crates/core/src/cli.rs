//! Command-line front end. Every flag can also come from a JSON file given
//! with `--config`; flags win over the file.

use crate::analytic::{self, AnalyticSolution};
use crate::error::{Error, Result};
use crate::geometry::{geometric_thickness_oracle, oracle_grid};
use crate::harness::{self, report, Case, Fault, Resolution, Suite};
use crate::shape::{Family, PeriodicBoundary, ShapeSpec};
use crate::solver::{self, SolverKind};
use crate::thickness;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use std::ffi::OsString;
use std::fs::File;
use std::path::{Path, PathBuf};

#[derive(Debug, Parser)]
#[command(name = "pde-thickness", version, about = "PDE-based thickness of shapes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form solution and its thickness bounds.
    Analytic(Options),
    /// Discrete solve; writes the field and the inverse thickness as CSV.
    Solve(Options),
    /// Error against the geometric thickness over a list of `a`.
    Sweep(Options),
    /// Inscribed-ball thickness on a grid.
    Oracle(Options),
    /// Runs the verification suite.
    Verify(Options),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodArg {
    Analytic,
    Discrete,
}

/// Flags shared by all subcommands. The same keys (kebab-case) are accepted
/// in the `--config` file.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct Options {
    /// JSON file with any of these options.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub family: Option<Family>,
    #[arg(long = "fl", allow_hyphen_values = true)]
    #[serde(rename = "fl")]
    pub f_l: Option<f64>,
    #[arg(long = "fr", allow_hyphen_values = true)]
    #[serde(rename = "fr")]
    pub f_r: Option<f64>,
    /// Left end of D; mean of the lower boundary for band-general.
    #[arg(long = "bl", allow_hyphen_values = true)]
    #[serde(rename = "bl")]
    pub b_l: Option<f64>,
    /// Right end or radius of D; mean of the upper boundary for band-general.
    #[arg(long = "br", allow_hyphen_values = true)]
    #[serde(rename = "br")]
    pub b_r: Option<f64>,
    /// Period of band shapes.
    #[arg(long = "L")]
    #[serde(rename = "L")]
    pub period: Option<f64>,
    /// Cosine amplitude of the lower boundary (band-general).
    #[arg(long)]
    pub lower_amp: Option<f64>,
    /// Cosine amplitude of the upper boundary (band-general).
    #[arg(long)]
    pub upper_amp: Option<f64>,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    pub a_list: Vec<f64>,
    /// Cells across the thickness.
    #[arg(long)]
    pub cells: Option<usize>,
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Inverse thickness CSV of `solve` (default: next to `--out`).
    #[arg(long)]
    pub thickness_out: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub suite: Option<String>,
    /// Replace the K-ratio bound with a sign-flipped one (`verify`).
    #[arg(long)]
    pub inject_fault: bool,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Human-readable summary instead of full-precision records.
    #[arg(long)]
    pub pretty: bool,
}

impl Options {
    /// `self` over `file`, field by field.
    fn merged_over(self, file: Options) -> Options {
        Options {
            config: self.config,
            family: self.family.or(file.family),
            f_l: self.f_l.or(file.f_l),
            f_r: self.f_r.or(file.f_r),
            b_l: self.b_l.or(file.b_l),
            b_r: self.b_r.or(file.b_r),
            period: self.period.or(file.period),
            lower_amp: self.lower_amp.or(file.lower_amp),
            upper_amp: self.upper_amp.or(file.upper_amp),
            a: self.a.or(file.a),
            a_list: if self.a_list.is_empty() { file.a_list } else { self.a_list },
            cells: self.cells.or(file.cells),
            method: self.method.or(file.method),
            rel_tol: self.rel_tol.or(file.rel_tol),
            out: self.out.or(file.out),
            thickness_out: self.thickness_out.or(file.thickness_out),
            json: self.json.or(file.json),
            csv: self.csv.or(file.csv),
            suite: self.suite.or(file.suite),
            inject_fault: self.inject_fault || file.inject_fault,
            format: self.format.or(file.format),
            pretty: self.pretty || file.pretty,
        }
    }

    fn resolve(self) -> Result<Options> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let text = std::fs::read_to_string(&path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        let file: Options = serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("config {}: {e}", path.display())))?;
        Ok(self.merged_over(file))
    }

    fn require<T: Copy>(value: Option<T>, flag: &str, what: &str) -> Result<T> {
        value.ok_or_else(|| Error::Config(format!("missing required parameter --{flag} ({what})")))
    }

    fn a(&self) -> Result<f64> {
        Self::require(self.a, "a", "diffusion parameter")
    }

    fn rel_tol(&self) -> f64 {
        self.rel_tol.unwrap_or(solver::DEFAULT_REL_TOL)
    }

    pub fn shape(&self) -> Result<ShapeSpec> {
        let family = self
            .family
            .ok_or_else(|| Error::Config("missing required parameter --family".into()))?;
        let need = |v: Option<f64>, flag: &str| Self::require(v, flag, family.name());
        let f_l = need(self.f_l, "fl")?;
        let f_r = need(self.f_r, "fr")?;
        match family {
            Family::IntervalWhole => ShapeSpec::interval_whole(f_l, f_r),
            Family::IntervalGeneral => ShapeSpec::interval_general(f_l, f_r, need(self.b_l, "bl")?, need(self.b_r, "br")?),
            Family::BandWhole => ShapeSpec::band_whole(f_l, f_r, need(self.period, "L")?),
            Family::BandGeneral => {
                let period = need(self.period, "L")?;
                let lower = PeriodicBoundary::cosine(period, need(self.b_l, "bl")?, self.lower_amp.unwrap_or(0.0));
                let upper = PeriodicBoundary::cosine(period, need(self.b_r, "br")?, self.upper_amp.unwrap_or(0.0));
                ShapeSpec::band_general(f_l, f_r, lower, upper)
            }
            Family::AnnulusWhole => ShapeSpec::annulus_whole(f_l, f_r),
            Family::AnnulusGeneral => ShapeSpec::annulus_general(f_l, f_r, need(self.b_r, "br")?),
        }
    }
}

/// Creates (truncates) an output file up front so an unwritable path fails
/// before any computation.
fn ensure_writable(path: &Path) -> Result<()> {
    File::create(path)
        .map(drop)
        .map_err(|e| Error::Config(format!("cannot write output {}: {e}", path.display())))
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotConverged { .. } => 1,
        _ => 2,
    }
}

/// Parses `args` (including the program name), runs the command, and returns
/// the process exit code: 0 on success, 1 when a verification fails, 2 on
/// configuration errors.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Analytic(o) => o.resolve().and_then(|o| cmd_analytic(&o)),
        Command::Solve(o) => o.resolve().and_then(|o| cmd_solve(&o)),
        Command::Sweep(o) => o.resolve().and_then(|o| cmd_sweep(&o)),
        Command::Oracle(o) => o.resolve().and_then(|o| cmd_oracle(&o)),
        Command::Verify(o) => o.resolve().and_then(|o| cmd_verify(&o)),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn print_analytic_text(sol: &AnalyticSolution) {
    println!("family = {}", sol.shape.family());
    println!("a = {}", sol.a);
    println!("p* = {}", sol.p_star);
    println!("T^a = {}", sol.thickness_pde);
    println!("T = {}", sol.shape.thickness());
    println!("excess = {}", sol.excess);
    println!("inverse_thickness = {}", sol.inverse_thickness());
    let kind = serde_json::to_value(sol.bound_kind).unwrap_or_default();
    println!("bound_kind = {}", kind.as_str().unwrap_or_default());
    println!("lower_bound = {}", sol.lower_bound);
    println!("upper_bound = {}", sol.upper_bound);
}

fn cmd_analytic(o: &Options) -> Result<i32> {
    let shape = o.shape()?;
    let sol = analytic::solve(&shape, o.a()?)?;
    if o.pretty {
        println!("{} with a = {}", shape.family(), sol.a);
        println!("  PDE thickness T^a  {:.6}", sol.thickness_pde);
        println!("  geometric T        {:.6}", shape.thickness());
        println!("  T^a - T            {:.6e}  in [{:.6e}, {:.6e}]", sol.excess, sol.lower_bound, sol.upper_bound);
        return Ok(0);
    }
    match o.format.unwrap_or(Format::Text) {
        Format::Text => print_analytic_text(&sol),
        Format::Json => print!("{}", report::to_json(&sol)?),
        Format::Csv => {
            println!("a,p_star,thickness_pde,excess,lower_bound,upper_bound");
            let row = [sol.a, sol.p_star, sol.thickness_pde, sol.excess, sol.lower_bound, sol.upper_bound];
            println!("{}", row.map(crate::io::fmt_float).join(","));
        }
    }
    Ok(0)
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}{suffix}"))
}

fn cmd_solve(o: &Options) -> Result<i32> {
    let shape = o.shape()?;
    let a = o.a()?;
    let cells = Options::require(o.cells, "cells", "cells across the thickness")?;
    let out = o.out.clone().ok_or_else(|| Error::Config("missing required parameter --out".into()))?;
    let thickness_out = o.thickness_out.clone().unwrap_or_else(|| sibling(&out, ".thickness.csv"));
    ensure_writable(&out)?;
    ensure_writable(&thickness_out)?;

    let field = harness::discrete_solve(&shape, a, cells, o.rel_tol())?;
    let inv = thickness::inverse_thickness(&thickness::divergence(&field), a);
    field.write_csv(&out)?;
    inv.write_csv(&thickness_out, shape.thickness())?;

    let reference = analytic::solve(&shape, a)?;
    let discrete_inverse = if field.kind == SolverKind::Radial {
        0.5 * a.sqrt() * solver::radial_p_star(&field, &shape)?
    } else {
        inv.mean()
    };
    let l2 = thickness::error_norms(&inv, 1.0 / shape.thickness())?.l2_on_omega;
    if o.pretty {
        println!("{} solve, a = {a}, h = {:.4e}, {} CG iterations", field.kind.name(), field.grid.h(), field.outcome.iterations);
        println!("  mean 1/T^a   {:.8}", discrete_inverse);
        println!("  closed form  {:.8}", reference.inverse_thickness());
        println!("  L2 error vs 1/T  {:.6e}", l2);
    } else {
        println!("solver = {}", field.kind.name());
        println!("h = {}", field.grid.h());
        println!("iterations = {}", field.outcome.iterations);
        println!("relative_residual = {}", field.outcome.relative_residual);
        if field.kind == SolverKind::Radial {
            println!("p* = {}", solver::radial_p_star(&field, &shape)?);
            println!("p*_closed_form = {}", reference.p_star);
        }
        println!("inverse_thickness_mean = {discrete_inverse}");
        println!("inverse_thickness_reference = {}", reference.inverse_thickness());
        println!("l2_error_vs_geometric = {l2}");
        println!("field = {}", out.display());
        println!("thickness = {}", thickness_out.display());
    }
    Ok(0)
}

fn cmd_sweep(o: &Options) -> Result<i32> {
    let shape = o.shape()?;
    if o.a_list.is_empty() {
        return Err(Error::Config("missing required parameter --a-list".into()));
    }
    for p in [&o.json, &o.csv].into_iter().flatten() {
        ensure_writable(p)?;
    }
    let method = o.method.unwrap_or(if shape.family().has_pointwise_bound() {
        MethodArg::Analytic
    } else {
        MethodArg::Discrete
    });
    let case = match method {
        MethodArg::Analytic => Case::analytic(shape),
        MethodArg::Discrete => Case::discrete(shape),
    };
    let resolution = o.cells.map_or(Resolution::Auto, Resolution::CellsAcross);
    let rep = harness::sweep_a(&case, &o.a_list, resolution, o.rel_tol())?;
    if let Some(p) = &o.json {
        rep.write_json(p)?;
    }
    if let Some(p) = &o.csv {
        rep.write_csv(p)?;
    }
    if o.pretty {
        println!("{}  slope {:.4}", case.label(), rep.slope);
        for s in &rep.samples {
            let verdict = if s.passed { "pass" } else { "FAIL" };
            println!("  a = {:<10.3e} error {:.4e}  bound {:.4e} + {:.2e}  {verdict}", s.a, s.error, s.bound, s.slack);
        }
    } else if o.json.is_none() {
        print!("{}", report::to_json(&rep)?);
    }
    Ok(if rep.all_passed() { 0 } else { 1 })
}

fn cmd_oracle(o: &Options) -> Result<i32> {
    let shape = o.shape()?;
    let cells = Options::require(o.cells, "cells", "cells across the thickness")?;
    let out = o.out.clone().ok_or_else(|| Error::Config("missing required parameter --out".into()))?;
    ensure_writable(&out)?;
    let grid = oracle_grid(&shape, cells)?;
    let field = geometric_thickness_oracle(&grid, &shape)?;
    field.write_csv(&out)?;
    let dev = field.max_deviation(shape.thickness());
    if o.pretty {
        println!("inscribed-ball thickness, h = {:.4e}: max |T - {}| = {:.4e}", grid.h(), shape.thickness(), dev);
    } else {
        println!("h = {}", grid.h());
        println!("max_deviation = {dev}");
        println!("out = {}", out.display());
    }
    Ok(0)
}

fn cmd_verify(o: &Options) -> Result<i32> {
    let mut suite = Suite::named(o.suite.as_deref().unwrap_or("default"))?;
    if o.inject_fault {
        suite.fault = Some(Fault::KRatioSignFlip);
    }
    suite.cells_override = o.cells;
    if let Some(t) = o.rel_tol {
        suite.rel_tol = t;
    }
    if let Some(p) = &o.json {
        ensure_writable(p)?;
    }
    let rep = harness::verify_theorems(&suite);
    if let Some(p) = &o.json {
        rep.write_json(p)?;
    }
    println!("verify {}: {} passed, {} failed", suite.name, rep.passed, rep.failed);
    for r in rep.failures() {
        println!("  FAIL {} [{}] a = {}: {} not in [{}, {}] ± {} {}", r.check, r.case, r.a, r.measured, r.lower, r.upper, r.slack, r.note);
    }
    if o.pretty {
        for r in rep.records.iter().filter(|r| r.passed) {
            println!("  ok   {} [{}] a = {:.3e}: {:.4e}", r.check, r.case, r.a, r.measured);
        }
    }
    Ok(if rep.all_passed() { 0 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_config_file() {
        let file = Options {
            family: Some(Family::IntervalWhole),
            f_l: Some(0.0),
            f_r: Some(2.0),
            a: Some(0.01),
            ..Options::default()
        };
        let flags = Options {
            f_r: Some(1.0),
            ..Options::default()
        };
        let m = flags.merged_over(file);
        assert_eq!(m.shape().unwrap(), ShapeSpec::interval_whole(0.0, 1.0).unwrap());
        assert_eq!(m.a, Some(0.01));
    }

    #[test]
    fn missing_parameters_are_config_errors() {
        let o = Options {
            family: Some(Family::IntervalGeneral),
            f_l: Some(0.0),
            f_r: Some(1.0),
            ..Options::default()
        };
        match o.shape() {
            Err(Error::Config(msg)) => assert!(msg.contains("--bl")),
            other => panic!("{other:?}"),
        }
    }
}
