//! Closed-form solutions of the thickness equation for the interval, band
//! and annulus families, with the matching error bounds.
//!
//! Every expression is arranged so that `exp` only ever sees nonpositive
//! arguments: hyperbolic ratios go through `tanh` and `exp(-2α)`, Bessel
//! products through the scaled functions with the common factor
//! `exp(-(f_r - f_l)/√a)` cancelled by hand. Coefficients whose raw value can
//! overflow are stored as [`ScaledCoefficient`].

use crate::bessel::{i0e, i1e, k01e};
use crate::error::{Error, Result};
use crate::shape::{Family, ShapeSpec};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// A real number kept as `mantissa * exp(exponent)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledCoefficient {
    pub mantissa: f64,
    pub exponent: f64,
}

impl ScaledCoefficient {
    pub fn new(mantissa: f64, exponent: f64) -> Self {
        ScaledCoefficient { mantissa, exponent }
    }

    /// Raw value; may overflow to infinity or underflow to zero.
    pub fn value(&self) -> f64 {
        self.mantissa * self.exponent.exp()
    }
}

/// Integration constants of the piecewise solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Coefficients {
    /// `s(x) = C exp(-x/√a)` right of `f_r`, odd about the midpoint.
    IntervalWhole { c: ScaledCoefficient },
    /// `s(x) = -C_l sinh((x-b_l)/√a)` on `[b_l, f_l]`,
    /// `s(x) = -C_r sinh((x-b_r)/√a)` on `[f_r, b_r]`.
    IntervalGeneral {
        c_l: ScaledCoefficient,
        c_r: ScaledCoefficient,
    },
    /// `S(r) = C I_1(r/√a)` inside, `p* r/2 + E/r` on the shape,
    /// `D K_1(r/√a)` outside.
    Annulus {
        c: ScaledCoefficient,
        d: ScaledCoefficient,
        e: f64,
    },
}

/// Which quantity the bounds of a solution refer to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    /// `lower <= T^a - T̄ <= upper` pointwise on the shape.
    ThicknessExcess,
    /// `‖1/T^a - 1/T̄‖_{L²(Ω)} <= upper`, with `lower = 0`.
    InverseL2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticSolution {
    pub shape: ShapeSpec,
    pub a: f64,
    /// Constant slope (intervals, bands) or `S_r + S/r` (annuli) on the shape.
    pub p_star: f64,
    pub coefficients: Coefficients,
    /// `T^a = 2 / (√a p*)`, evaluated as `T̄ + excess`.
    pub thickness_pde: f64,
    /// `T^a - T̄`, evaluated without cancellation.
    pub excess: f64,
    pub bound_kind: BoundKind,
    pub lower_bound: f64,
    pub upper_bound: f64,
}

impl AnalyticSolution {
    /// `1/T^a`, the quantity compared in L² for the general-domain families.
    pub fn inverse_thickness(&self) -> f64 {
        0.5 * self.a.sqrt() * self.p_star
    }

    /// Whether the stored bounds hold for the closed form itself. Only
    /// meaningful for [`BoundKind::ThicknessExcess`].
    pub fn bounds_hold(&self) -> bool {
        self.lower_bound <= self.excess && self.excess <= self.upper_bound
    }
}

fn check_a(a: f64) -> Result<()> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::InvalidShape(format!("diffusion parameter must be positive, got {a}")));
    }
    Ok(())
}

/// `1 - tanh(x)` for `x >= 0`, accurate for large `x`.
fn one_minus_tanh(x: f64) -> f64 {
    let e = (-2.0 * x).exp();
    2.0 * e / (1.0 + e)
}

/// Closed form for the whole-space solution of the family, or for the
/// general-domain families the whole-space reference solution with the L²
/// envelope attached.
pub fn solve(shape: &ShapeSpec, a: f64) -> Result<AnalyticSolution> {
    shape.validate()?;
    match shape {
        ShapeSpec::IntervalWhole { f_l, f_r } => interval_whole(*f_l, *f_r, a),
        ShapeSpec::IntervalGeneral { f_l, f_r, b_l, b_r } => interval_general(*f_l, *f_r, *b_l, *b_r, a),
        ShapeSpec::BandWhole { f_l, f_r, period } => band_whole(*f_l, *f_r, a, *period),
        ShapeSpec::BandGeneral { f_l, f_r, .. } => {
            let mut sol = interval_whole(*f_l, *f_r, a)?;
            let period = shape.period().expect("band has a period");
            let m = shape.margin().expect("general band has a margin");
            sol.shape = shape.clone();
            sol.bound_kind = BoundKind::InverseL2;
            sol.lower_bound = 0.0;
            sol.upper_bound = band_general_bound(period, *f_l, *f_r, m, a)?;
            Ok(sol)
        }
        ShapeSpec::AnnulusWhole { f_l, f_r } => annulus_whole(*f_l, *f_r, a),
        ShapeSpec::AnnulusGeneral { f_l, f_r, b_r } => {
            let mut sol = annulus_whole(*f_l, *f_r, a)?;
            sol.shape = shape.clone();
            sol.bound_kind = BoundKind::InverseL2;
            sol.lower_bound = 0.0;
            sol.upper_bound = annulus_general_bound(*f_l, *f_r, *b_r, a)?;
            Ok(sol)
        }
    }
}

/// Interval `(f_l, f_r)` in the whole line: `T^a = T̄ + 2√a`.
pub fn interval_whole(f_l: f64, f_r: f64, a: f64) -> Result<AnalyticSolution> {
    let shape = ShapeSpec::interval_whole(f_l, f_r)?;
    check_a(a)?;
    let t = f_r - f_l;
    let sa = a.sqrt();
    let p_star = 2.0 / (sa * (t + 2.0 * sa));
    let excess = 2.0 * sa;
    Ok(AnalyticSolution {
        shape,
        a,
        p_star,
        coefficients: Coefficients::IntervalWhole {
            c: ScaledCoefficient::new(0.5 * p_star * t, f_r / sa),
        },
        thickness_pde: t + excess,
        excess,
        bound_kind: BoundKind::ThicknessExcess,
        lower_bound: 2.0 * sa,
        upper_bound: 2.0 * sa,
    })
}

/// Interval `(f_l, f_r)` inside `(b_l, b_r)` with Dirichlet ends.
pub fn interval_general(f_l: f64, f_r: f64, b_l: f64, b_r: f64, a: f64) -> Result<AnalyticSolution> {
    let shape = ShapeSpec::interval_general(f_l, f_r, b_l, b_r)?;
    check_a(a)?;
    let t = f_r - f_l;
    let sa = a.sqrt();
    let alpha = (f_l - b_l) / sa;
    let beta = (b_r - f_r) / sa;
    let k = t / sa;
    let (ta, tb) = (alpha.tanh(), beta.tanh());
    // C_l = G / cosh α, C_r = G / cosh β with G = k / (√a (tanh α + tanh β + k)).
    let g = k / (sa * (ta + tb + k));
    let inv_cosh = |x: f64| ScaledCoefficient::new(2.0 * g / (1.0 + (-2.0 * x).exp()), -x);
    let p_star = g * (ta + tb) / t;
    let excess = 2.0 * sa + (one_minus_tanh(alpha) + one_minus_tanh(beta)) / (ta + tb) * t;
    let m = (b_r - f_r).min(f_l - b_l);
    Ok(AnalyticSolution {
        shape,
        a,
        p_star,
        coefficients: Coefficients::IntervalGeneral {
            c_l: inv_cosh(alpha),
            c_r: inv_cosh(beta),
        },
        thickness_pde: t + excess,
        excess,
        bound_kind: BoundKind::ThicknessExcess,
        lower_bound: 2.0 * sa,
        upper_bound: 2.0 * sa + 4.0 * t * (-2.0 * m / sa).exp(),
    })
}

/// Band `R × (f_l, f_r)` in the plane. The solution is `(0, S(y))` with `S`
/// the whole-line interval solution, so the numbers are those of
/// [`interval_whole`].
pub fn band_whole(f_l: f64, f_r: f64, a: f64, period: f64) -> Result<AnalyticSolution> {
    let shape = ShapeSpec::band_whole(f_l, f_r, period)?;
    let mut sol = interval_whole(f_l, f_r, a)?;
    sol.shape = shape;
    Ok(sol)
}

/// Envelope `2 √|Ω_L| / T² √a + 2 √(L/m) exp(-m/√a)` on the L² error of the
/// inverse thickness for a band in a periodic domain, `|Ω_L| = L T`.
pub fn band_general_bound(period: f64, f_l: f64, f_r: f64, m: f64, a: f64) -> Result<f64> {
    if !(period > 0.0 && m > 0.0 && a > 0.0 && f_l < f_r) {
        return Err(Error::Domain(format!(
            "band bound needs L, m, a > 0 and f_l < f_r, got L={period}, f_l={f_l}, f_r={f_r}, m={m}, a={a}"
        )));
    }
    let t = f_r - f_l;
    let sa = a.sqrt();
    let area = period * t;
    Ok(2.0 * area.sqrt() / (t * t) * sa + 2.0 * (period / m).sqrt() * (-m / sa).exp())
}

/// Scaled Bessel data for the annulus: `I_n` at `f_l/√a`, `K_n` at `f_r/√a`.
struct AnnulusBessel {
    i0: f64,
    i1: f64,
    k0: f64,
    k1: f64,
}

impl AnnulusBessel {
    fn new(f_l: f64, f_r: f64, sa: f64) -> Self {
        let xl = f_l / sa;
        let (k0, k1) = k01e(f_r / sa);
        AnnulusBessel {
            i0: i0e(xl),
            i1: i1e(xl),
            k0,
            k1,
        }
    }
}

/// Annulus `f_l < |x| < f_r` in the whole plane.
pub fn annulus_whole(f_l: f64, f_r: f64, a: f64) -> Result<AnalyticSolution> {
    let shape = ShapeSpec::annulus_whole(f_l, f_r)?;
    check_a(a)?;
    let t = f_r - f_l;
    let sa = a.sqrt();
    let k = t / sa;
    let sum = f_r + f_l;
    let AnnulusBessel { i0, i1, k0, k1 } = AnnulusBessel::new(f_l, f_r, sa);

    // All products I_n K_m below carry the factor exp(-k), dropped on both
    // sides of every ratio.
    let mixed = f_r * i0 * k1 + f_l * i1 * k0;
    let den = k * sum * i0 * k0 + 2.0 * mixed;
    let p_star = 2.0 / sa * k * mixed / den / t;
    let excess = 2.0 * sa + (f_r * i0 * (k0 - k1) + f_l * (i0 - i1) * k0) / mixed * t;

    // d = exp(-k) * det_scaled; C = c_hat exp(-f_l/√a), D = d_hat exp(f_r/√a).
    let det_scaled = k * k * sum * sum * i0 * k0 + 2.0 * k * sum * mixed;
    let num = k * k * sum * sum / (sa * det_scaled);
    let c = ScaledCoefficient::new(-num * k0, -f_l / sa);
    let d = ScaledCoefficient::new(num * i0, f_r / sa);
    let s_fr = d.mantissa * k1;
    let e = f_r * (s_fr - 0.5 * p_star * f_r);

    Ok(AnalyticSolution {
        shape,
        a,
        p_star,
        coefficients: Coefficients::Annulus { c, d, e },
        thickness_pde: t + excess,
        excess,
        bound_kind: BoundKind::ThicknessExcess,
        lower_bound: (3.0 * f_r + f_l) / (2.0 * f_r) * sa,
        upper_bound: 2.0 * f_r / f_l * sa,
    })
}

/// Envelope `2 (f_r/f_l) √|Ω| / T² √a + 2 √π √(f_r/m) exp(-m/√a)` on the L²
/// error of the inverse thickness for an annulus in a bounded domain,
/// `|Ω| = π (f_r² - f_l²)`, `m = b_r - f_r`.
pub fn annulus_general_bound(f_l: f64, f_r: f64, b_r: f64, a: f64) -> Result<f64> {
    if !(f_l > 0.0 && f_l < f_r && f_r < b_r && a > 0.0) {
        return Err(Error::Domain(format!(
            "annulus bound needs 0 < f_l < f_r < b_r and a > 0, got {f_l}, {f_r}, {b_r}, a={a}"
        )));
    }
    let t = f_r - f_l;
    let sa = a.sqrt();
    let area = PI * (f_r * f_r - f_l * f_l);
    let m = b_r - f_r;
    Ok(2.0 * f_r / f_l * area.sqrt() / (t * t) * sa + 2.0 * PI.sqrt() * (f_r / m).sqrt() * (-m / sa).exp())
}

/// Side of an interface for one-sided derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Value of the solution at a point: the scalar profile and the vector field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointValue {
    /// `s` in 1D, `S(y)` for bands, `S(r)` for annuli.
    pub scalar: f64,
    /// `(s, 0)` in 1D, `(0, S(y))` for bands, `S(r) (cos θ, sin θ)` for annuli.
    pub vector: [f64; 2],
}

impl AnalyticSolution {
    /// Scalar profile as a function of the coordinate across the shape
    /// (`x`, `y` or `r`).
    pub fn profile(&self, t: f64) -> Result<f64> {
        self.check_profile_domain(t)?;
        let sa = self.a.sqrt();
        let (f_l, f_r) = (self.shape.f_l(), self.shape.f_r());
        Ok(match self.coefficients {
            Coefficients::IntervalWhole { c } => {
                let amp = c.mantissa;
                if t >= f_r {
                    amp * (-(t - f_r) / sa).exp()
                } else if t <= f_l {
                    -amp * ((t - f_l) / sa).exp()
                } else {
                    self.p_star * (t - 0.5 * (f_l + f_r))
                }
            }
            Coefficients::IntervalGeneral { .. } => {
                let (b_l, b_r, g, alpha, beta) = self.general_interval_parts();
                if t <= f_l {
                    let xi = (t - b_l) / sa;
                    -g * sinh_over_cosh(xi, alpha)
                } else if t >= f_r {
                    let eta = (b_r - t) / sa;
                    g * sinh_over_cosh(eta, beta)
                } else {
                    -g * alpha.tanh() + self.p_star * (t - f_l)
                }
            }
            Coefficients::Annulus { c, d, e } => {
                if t <= f_l {
                    let x = t / sa;
                    c.mantissa * i1e(x) * ((t - f_l) / sa).exp()
                } else if t >= f_r {
                    let (_, k1) = k01e(t / sa);
                    d.mantissa * k1 * (-(t - f_r) / sa).exp()
                } else {
                    0.5 * self.p_star * t + e / t
                }
            }
        })
    }

    /// One-sided derivative of the profile (`s'` in 1D and for bands).
    /// For annuli this returns `p(r) = S_r + S/r`, the quantity whose jump
    /// carries the interface condition.
    pub fn profile_derivative(&self, t: f64, side: Side) -> Result<f64> {
        self.check_profile_domain(t)?;
        let sa = self.a.sqrt();
        let (f_l, f_r) = (self.shape.f_l(), self.shape.f_r());
        let left_of = |x: f64| t < x || (t == x && side == Side::Left);
        let right_of = |x: f64| t > x || (t == x && side == Side::Right);
        Ok(match self.coefficients {
            Coefficients::IntervalWhole { c } => {
                let amp = c.mantissa;
                if right_of(f_r) {
                    -amp / sa * (-(t - f_r) / sa).exp()
                } else if left_of(f_l) {
                    -amp / sa * ((t - f_l) / sa).exp()
                } else {
                    self.p_star
                }
            }
            Coefficients::IntervalGeneral { .. } => {
                let (b_l, b_r, g, alpha, beta) = self.general_interval_parts();
                if left_of(f_l) {
                    let xi = (t - b_l) / sa;
                    -g / sa * cosh_over_cosh(xi, alpha)
                } else if right_of(f_r) {
                    let eta = (b_r - t) / sa;
                    -g / sa * cosh_over_cosh(eta, beta)
                } else {
                    self.p_star
                }
            }
            Coefficients::Annulus { c, d, .. } => {
                if left_of(f_l) {
                    c.mantissa * i0e(t / sa) * ((t - f_l) / sa).exp() / sa
                } else if right_of(f_r) {
                    let (k0, _) = k01e(t / sa);
                    -d.mantissa * k0 * (-(t - f_r) / sa).exp() / sa
                } else {
                    self.p_star
                }
            }
        })
    }

    fn general_interval_parts(&self) -> (f64, f64, f64, f64, f64) {
        let ShapeSpec::IntervalGeneral { f_l, f_r, b_l, b_r } = self.shape else {
            unreachable!("general interval coefficients on a non-interval shape")
        };
        let sa = self.a.sqrt();
        let alpha = (f_l - b_l) / sa;
        let beta = (b_r - f_r) / sa;
        let k = (f_r - f_l) / sa;
        let g = k / (sa * (alpha.tanh() + beta.tanh() + k));
        (b_l, b_r, g, alpha, beta)
    }

    fn check_profile_domain(&self, t: f64) -> Result<()> {
        if !t.is_finite() {
            return Err(Error::OutOfDomain(t));
        }
        match self.shape {
            ShapeSpec::IntervalGeneral { b_l, b_r, .. } if t < b_l || t > b_r => Err(Error::OutOfDomain(t)),
            ShapeSpec::AnnulusWhole { .. } | ShapeSpec::AnnulusGeneral { .. } if t < 0.0 => {
                Err(Error::OutOfDomain(t))
            }
            _ => Ok(()),
        }
    }
}

/// `sinh(x) / cosh(y)` for `0 <= x <= y`.
fn sinh_over_cosh(x: f64, y: f64) -> f64 {
    ((x - y).exp() - (-x - y).exp()) / (1.0 + (-2.0 * y).exp())
}

/// `cosh(x) / cosh(y)` for `0 <= x <= y`.
fn cosh_over_cosh(x: f64, y: f64) -> f64 {
    ((x - y).exp() + (-x - y).exp()) / (1.0 + (-2.0 * y).exp())
}

/// Evaluates the closed form at a point of the relevant space: `[x]` for
/// intervals, `[x, y]` for bands and annuli.
pub fn eval_solution(sol: &AnalyticSolution, point: &[f64]) -> Result<PointValue> {
    let dim = sol.shape.dim();
    if point.len() != dim || point.iter().any(|v| !v.is_finite()) {
        return Err(Error::OutOfDomain(point.first().copied().unwrap_or(f64::NAN)));
    }
    match sol.shape.family() {
        Family::IntervalWhole | Family::IntervalGeneral => {
            let s = sol.profile(point[0])?;
            Ok(PointValue {
                scalar: s,
                vector: [s, 0.0],
            })
        }
        Family::BandWhole | Family::BandGeneral => {
            if let ShapeSpec::BandGeneral { lower, upper, .. } = &sol.shape {
                let y = point[1];
                if y < lower.eval(point[0]) || y > upper.eval(point[0]) {
                    return Err(Error::OutOfDomain(y));
                }
            }
            let s = sol.profile(point[1])?;
            Ok(PointValue {
                scalar: s,
                vector: [0.0, s],
            })
        }
        Family::AnnulusWhole | Family::AnnulusGeneral => {
            let r = point[0].hypot(point[1]);
            let s = sol.profile(r)?;
            let vector = if r > 0.0 {
                [s * point[0] / r, s * point[1] / r]
            } else {
                [0.0, 0.0]
            };
            Ok(PointValue { scalar: s, vector })
        }
    }
}
