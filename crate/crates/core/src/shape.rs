//! Parametric shapes and their fictitious domains.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

/// Relative width below which a shape is treated as degenerate.
pub const DEGENERATE_WIDTH: f64 = 1e-14;

/// Samples per period used to locate the extrema of a periodic boundary.
const EXTREMUM_SAMPLES: usize = 8192;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    IntervalWhole,
    IntervalGeneral,
    BandWhole,
    BandGeneral,
    AnnulusWhole,
    AnnulusGeneral,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::IntervalWhole,
        Family::IntervalGeneral,
        Family::BandWhole,
        Family::BandGeneral,
        Family::AnnulusWhole,
        Family::AnnulusGeneral,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::IntervalWhole => "interval-whole",
            Family::IntervalGeneral => "interval-general",
            Family::BandWhole => "band-whole",
            Family::BandGeneral => "band-general",
            Family::AnnulusWhole => "annulus-whole",
            Family::AnnulusGeneral => "annulus-general",
        }
    }

    /// True for the families whose estimate bounds `T^a - T̄` pointwise; the
    /// others are bounded in the L² norm of the inverse thickness.
    pub fn has_pointwise_bound(self) -> bool {
        !matches!(self, Family::BandGeneral | Family::AnnulusGeneral)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .iter()
            .copied()
            .find(|f| f.name() == s || f.name().replace('-', "_") == s)
            .ok_or_else(|| Error::Config(format!("unknown family '{s}'")))
    }
}

/// Truncated Fourier series describing an `L`-periodic boundary curve
/// `y = b(x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicBoundary {
    pub period: f64,
    pub mean: f64,
    #[serde(default)]
    pub cosine_coeffs: Vec<f64>,
    #[serde(default)]
    pub sine_coeffs: Vec<f64>,
}

impl PeriodicBoundary {
    pub fn constant(period: f64, value: f64) -> Self {
        PeriodicBoundary {
            period,
            mean: value,
            cosine_coeffs: Vec::new(),
            sine_coeffs: Vec::new(),
        }
    }

    /// `mean + amplitude * cos(2πx/L)`.
    pub fn cosine(period: f64, mean: f64, amplitude: f64) -> Self {
        PeriodicBoundary {
            period,
            mean,
            cosine_coeffs: vec![amplitude],
            sine_coeffs: Vec::new(),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let w = 2.0 * PI / self.period;
        let mut v = self.mean;
        for (k, c) in self.cosine_coeffs.iter().enumerate() {
            v += c * (w * (k + 1) as f64 * x).cos();
        }
        for (k, s) in self.sine_coeffs.iter().enumerate() {
            v += s * (w * (k + 1) as f64 * x).sin();
        }
        v
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let w = 2.0 * PI / self.period;
        let mut v = 0.0;
        for (k, c) in self.cosine_coeffs.iter().enumerate() {
            let wk = w * (k + 1) as f64;
            v -= c * wk * (wk * x).sin();
        }
        for (k, s) in self.sine_coeffs.iter().enumerate() {
            let wk = w * (k + 1) as f64;
            v += s * wk * (wk * x).cos();
        }
        v
    }

    pub fn is_constant(&self) -> bool {
        self.cosine_coeffs.iter().chain(&self.sine_coeffs).all(|c| *c == 0.0)
    }

    fn extremum(&self, sign: f64) -> f64 {
        if self.is_constant() {
            return self.mean;
        }
        let dx = self.period / EXTREMUM_SAMPLES as f64;
        let (mut best_x, mut best) = (0.0, sign * self.eval(0.0));
        for i in 1..EXTREMUM_SAMPLES {
            let x = i as f64 * dx;
            let v = sign * self.eval(x);
            if v > best {
                best = v;
                best_x = x;
            }
        }
        // Golden-section refinement around the best sample.
        let (mut lo, mut hi) = (best_x - dx, best_x + dx);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..80 {
            let x1 = hi - g * (hi - lo);
            let x2 = lo + g * (hi - lo);
            if sign * self.eval(x1) > sign * self.eval(x2) {
                hi = x2;
            } else {
                lo = x1;
            }
        }
        let refined = sign * self.eval(0.5 * (lo + hi));
        sign * refined.max(best)
    }

    pub fn max(&self) -> f64 {
        self.extremum(1.0)
    }

    pub fn min(&self) -> f64 {
        self.extremum(-1.0)
    }
}

/// The shape `Ω` together with its fictitious domain `D`.
///
/// Whole-space families carry no outer boundary; the solvers truncate them.
/// `AnnulusGeneral` uses the square `(-b_r, b_r)²` as `D`, so `b_r` is the
/// radius of the largest centered disk inside `D`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum ShapeSpec {
    IntervalWhole {
        f_l: f64,
        f_r: f64,
    },
    IntervalGeneral {
        f_l: f64,
        f_r: f64,
        b_l: f64,
        b_r: f64,
    },
    BandWhole {
        f_l: f64,
        f_r: f64,
        period: f64,
    },
    BandGeneral {
        f_l: f64,
        f_r: f64,
        lower: PeriodicBoundary,
        upper: PeriodicBoundary,
    },
    AnnulusWhole {
        f_l: f64,
        f_r: f64,
    },
    AnnulusGeneral {
        f_l: f64,
        f_r: f64,
        b_r: f64,
    },
}

fn check_width(f_l: f64, f_r: f64) -> Result<()> {
    if !f_l.is_finite() || !f_r.is_finite() {
        return Err(Error::InvalidShape("non-finite boundary position".into()));
    }
    if f_l >= f_r {
        return Err(Error::InvalidShape(format!("need f_l < f_r, got {f_l} >= {f_r}")));
    }
    let scale = f_l.abs().max(f_r.abs());
    if f_r - f_l < DEGENERATE_WIDTH * scale {
        return Err(Error::InvalidShape(format!(
            "degenerate width {} relative to |f| = {scale}",
            f_r - f_l
        )));
    }
    Ok(())
}

impl ShapeSpec {
    pub fn interval_whole(f_l: f64, f_r: f64) -> Result<Self> {
        let s = ShapeSpec::IntervalWhole { f_l, f_r };
        s.validate()?;
        Ok(s)
    }

    pub fn interval_general(f_l: f64, f_r: f64, b_l: f64, b_r: f64) -> Result<Self> {
        let s = ShapeSpec::IntervalGeneral { f_l, f_r, b_l, b_r };
        s.validate()?;
        Ok(s)
    }

    pub fn band_whole(f_l: f64, f_r: f64, period: f64) -> Result<Self> {
        let s = ShapeSpec::BandWhole { f_l, f_r, period };
        s.validate()?;
        Ok(s)
    }

    pub fn band_general(
        f_l: f64,
        f_r: f64,
        lower: PeriodicBoundary,
        upper: PeriodicBoundary,
    ) -> Result<Self> {
        let s = ShapeSpec::BandGeneral {
            f_l,
            f_r,
            lower,
            upper,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn annulus_whole(f_l: f64, f_r: f64) -> Result<Self> {
        let s = ShapeSpec::AnnulusWhole { f_l, f_r };
        s.validate()?;
        Ok(s)
    }

    pub fn annulus_general(f_l: f64, f_r: f64, b_r: f64) -> Result<Self> {
        let s = ShapeSpec::AnnulusGeneral { f_l, f_r, b_r };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        check_width(self.f_l(), self.f_r())?;
        match self {
            ShapeSpec::IntervalWhole { .. } | ShapeSpec::AnnulusWhole { .. } => {}
            ShapeSpec::IntervalGeneral { f_l, f_r, b_l, b_r } => {
                if !(b_l < f_l && f_r < b_r) {
                    return Err(Error::InvalidShape(format!(
                        "need b_l < f_l < f_r < b_r, got {b_l}, {f_l}, {f_r}, {b_r}"
                    )));
                }
            }
            ShapeSpec::BandWhole { period, .. } => {
                if !(*period > 0.0) || !period.is_finite() {
                    return Err(Error::InvalidShape(format!("period must be positive, got {period}")));
                }
            }
            ShapeSpec::BandGeneral {
                f_l,
                f_r,
                lower,
                upper,
            } => {
                if !(lower.period > 0.0) || lower.period != upper.period {
                    return Err(Error::InvalidShape(
                        "boundaries need a common positive period".into(),
                    ));
                }
                if !(lower.max() < *f_l && *f_r < upper.min()) {
                    return Err(Error::InvalidShape(format!(
                        "need max b_l < f_l < f_r < min b_r, got {} < {f_l} < {f_r} < {}",
                        lower.max(),
                        upper.min()
                    )));
                }
            }
            ShapeSpec::AnnulusGeneral { f_l, f_r, b_r } => {
                if !(*f_l > 0.0 && f_r < b_r) {
                    return Err(Error::InvalidShape(format!(
                        "need 0 < f_l < f_r < b_r, got {f_l}, {f_r}, {b_r}"
                    )));
                }
            }
        }
        if let ShapeSpec::AnnulusWhole { f_l, .. } = self {
            if !(*f_l > 0.0) {
                return Err(Error::InvalidShape(format!("annulus needs f_l > 0, got {f_l}")));
            }
        }
        Ok(())
    }

    pub fn family(&self) -> Family {
        match self {
            ShapeSpec::IntervalWhole { .. } => Family::IntervalWhole,
            ShapeSpec::IntervalGeneral { .. } => Family::IntervalGeneral,
            ShapeSpec::BandWhole { .. } => Family::BandWhole,
            ShapeSpec::BandGeneral { .. } => Family::BandGeneral,
            ShapeSpec::AnnulusWhole { .. } => Family::AnnulusWhole,
            ShapeSpec::AnnulusGeneral { .. } => Family::AnnulusGeneral,
        }
    }

    pub fn f_l(&self) -> f64 {
        match self {
            ShapeSpec::IntervalWhole { f_l, .. }
            | ShapeSpec::IntervalGeneral { f_l, .. }
            | ShapeSpec::BandWhole { f_l, .. }
            | ShapeSpec::BandGeneral { f_l, .. }
            | ShapeSpec::AnnulusWhole { f_l, .. }
            | ShapeSpec::AnnulusGeneral { f_l, .. } => *f_l,
        }
    }

    pub fn f_r(&self) -> f64 {
        match self {
            ShapeSpec::IntervalWhole { f_r, .. }
            | ShapeSpec::IntervalGeneral { f_r, .. }
            | ShapeSpec::BandWhole { f_r, .. }
            | ShapeSpec::BandGeneral { f_r, .. }
            | ShapeSpec::AnnulusWhole { f_r, .. }
            | ShapeSpec::AnnulusGeneral { f_r, .. } => *f_r,
        }
    }

    /// Geometric thickness `T̄ = f_r - f_l`, constant on every family.
    pub fn thickness(&self) -> f64 {
        self.f_r() - self.f_l()
    }

    /// Distance from `Ω` to `∂D`, `None` for whole-space families.
    pub fn margin(&self) -> Option<f64> {
        match self {
            ShapeSpec::IntervalGeneral { f_l, f_r, b_l, b_r } => Some((b_r - f_r).min(f_l - b_l)),
            ShapeSpec::BandGeneral {
                f_l,
                f_r,
                lower,
                upper,
            } => Some((upper.min() - f_r).min(f_l - lower.max())),
            ShapeSpec::AnnulusGeneral { f_r, b_r, .. } => Some(b_r - f_r),
            _ => None,
        }
    }

    pub fn period(&self) -> Option<f64> {
        match self {
            ShapeSpec::BandWhole { period, .. } => Some(*period),
            ShapeSpec::BandGeneral { lower, .. } => Some(lower.period),
            _ => None,
        }
    }

    /// 1 for intervals, 2 for bands and annuli.
    pub fn dim(&self) -> usize {
        match self.family() {
            Family::IntervalWhole | Family::IntervalGeneral => 1,
            _ => 2,
        }
    }

    pub fn is_whole_space(&self) -> bool {
        matches!(
            self,
            ShapeSpec::IntervalWhole { .. } | ShapeSpec::BandWhole { .. } | ShapeSpec::AnnulusWhole { .. }
        )
    }

    /// `|Ω|` (length in 1D, area of one period `Ω_L` for bands).
    pub fn shape_measure(&self) -> f64 {
        let t = self.thickness();
        match self {
            ShapeSpec::IntervalWhole { .. } | ShapeSpec::IntervalGeneral { .. } => t,
            ShapeSpec::BandWhole { period, .. } => period * t,
            ShapeSpec::BandGeneral { lower, .. } => lower.period * t,
            ShapeSpec::AnnulusWhole { f_l, f_r } | ShapeSpec::AnnulusGeneral { f_l, f_r, .. } => {
                PI * (f_r * f_r - f_l * f_l)
            }
        }
    }

    /// The coordinate across the shape: `x` for intervals, `y` for bands,
    /// `r` for annuli.
    pub fn normal_coordinate(&self, point: &[f64]) -> f64 {
        match self.family() {
            Family::IntervalWhole | Family::IntervalGeneral => point[0],
            Family::BandWhole | Family::BandGeneral => point[1],
            Family::AnnulusWhole | Family::AnnulusGeneral => point[0].hypot(point[1]),
        }
    }

    pub fn contains(&self, point: &[f64]) -> bool {
        let t = self.normal_coordinate(point);
        self.f_l() < t && t < self.f_r()
    }

    /// Membership in the open fictitious domain `D`. Whole-space families
    /// always return true.
    pub fn in_domain(&self, point: &[f64]) -> bool {
        match self {
            ShapeSpec::IntervalGeneral { b_l, b_r, .. } => *b_l < point[0] && point[0] < *b_r,
            ShapeSpec::BandGeneral { lower, upper, .. } => {
                lower.eval(point[0]) < point[1] && point[1] < upper.eval(point[0])
            }
            ShapeSpec::AnnulusGeneral { b_r, .. } => point[0].abs() < *b_r && point[1].abs() < *b_r,
            _ => true,
        }
    }

    /// Signed distance to `Γ = ∂Ω`, positive inside `Ω`.
    pub fn signed_distance(&self, point: &[f64]) -> f64 {
        let t = self.normal_coordinate(point);
        (t - self.f_l()).min(self.f_r() - t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_names_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert!("triangle".parse::<Family>().is_err());
    }

    #[test]
    fn invalid_shapes_rejected() {
        assert!(ShapeSpec::interval_whole(1.0, 0.0).is_err());
        assert!(ShapeSpec::interval_whole(1.0, 1.0).is_err());
        assert!(ShapeSpec::interval_whole(1.0, 1.0 + 1e-16).is_err());
        assert!(ShapeSpec::interval_general(0.0, 1.0, 0.5, 2.0).is_err());
        assert!(ShapeSpec::annulus_whole(0.0, 1.0).is_err());
        assert!(ShapeSpec::annulus_general(1.0, 2.0, 1.5).is_err());
        assert!(ShapeSpec::band_whole(0.0, 1.0, 0.0).is_err());
        let lower = PeriodicBoundary::cosine(1.0, -0.05, 0.1);
        let upper = PeriodicBoundary::constant(1.0, 2.0);
        assert!(ShapeSpec::band_general(0.0, 1.0, lower, upper).is_err());
    }

    #[test]
    fn signed_distance_examples() {
        let ann = ShapeSpec::annulus_whole(1.0, 2.0).unwrap();
        assert_eq!(ann.signed_distance(&[1.5, 0.0]), 0.5);
        let int = ShapeSpec::interval_whole(0.0, 1.0).unwrap();
        assert_eq!(int.signed_distance(&[0.25]), 0.25);
        let band = ShapeSpec::band_whole(0.0, 1.0, 1.0).unwrap();
        assert!((band.signed_distance(&[7.3, -0.2]) + 0.2).abs() < 1e-15);
    }

    #[test]
    fn signed_distance_vanishes_on_boundary() {
        let ann = ShapeSpec::annulus_whole(1.0, 2.0).unwrap();
        for k in 0..64 {
            let th = 2.0 * PI * k as f64 / 64.0;
            for r in [1.0, 2.0] {
                let d = ann.signed_distance(&[r * th.cos(), r * th.sin()]);
                assert!(d.abs() < 1e-12);
            }
        }
        let band = ShapeSpec::band_whole(-0.3, 0.7, 2.0).unwrap();
        assert!(band.signed_distance(&[1.1, -0.3]).abs() < 1e-12);
        assert!(band.signed_distance(&[0.4, 0.7]).abs() < 1e-12);
    }

    #[test]
    fn periodic_boundary_extrema() {
        let b = PeriodicBoundary {
            period: 2.0,
            mean: 1.0,
            cosine_coeffs: vec![0.3],
            sine_coeffs: vec![0.0, 0.1],
        };
        let mut hi = f64::MIN;
        let mut lo = f64::MAX;
        for i in 0..200_000 {
            let v = b.eval(2.0 * i as f64 / 200_000.0);
            hi = hi.max(v);
            lo = lo.min(v);
        }
        assert!((b.max() - hi).abs() < 1e-9);
        assert!((b.min() - lo).abs() < 1e-9);
        assert!((b.eval(0.3) - b.eval(2.3)).abs() < 1e-12);
        let eps = 1e-6;
        let fd = (b.eval(0.4 + eps) - b.eval(0.4 - eps)) / (2.0 * eps);
        assert!((fd - b.derivative(0.4)).abs() < 1e-8);
    }

    #[test]
    fn margins() {
        let s = ShapeSpec::interval_general(0.0, 1.0, -1.0, 2.5).unwrap();
        assert_eq!(s.margin(), Some(1.0));
        let lower = PeriodicBoundary::cosine(1.0, -0.5, 0.1);
        let upper = PeriodicBoundary::constant(1.0, 1.5);
        let b = ShapeSpec::band_general(0.0, 1.0, lower, upper).unwrap();
        assert!((b.margin().unwrap() - 0.4).abs() < 1e-12);
        assert_eq!(ShapeSpec::annulus_whole(1.0, 2.0).unwrap().margin(), None);
    }
}
