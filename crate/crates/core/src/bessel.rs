//! Exponentially scaled modified Bessel functions of orders 0 and 1.
//!
//! The scaled values `exp(-x) I_n(x)` and `exp(x) K_n(x)` are the canonical
//! form. They stay within double range for every positive argument, which is
//! what the annulus formulas need: products `I_n(f_l/√a) K_m(f_r/√a)` carry a
//! factor `exp(-(f_r - f_l)/√a)` that is cancelled analytically instead of
//! being formed from overflowing raw values.
//!
//! Branches:
//! - `I_n`: ascending power series for `x <= I_SERIES_LIMIT`, Hankel
//!   asymptotic expansion above.
//! - `K_n`: ascending series with the logarithmic term for
//!   `x <= K_SERIES_LIMIT`, Steed's continued fraction (CF2) above.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Euler-Mascheroni constant.
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Crossover between the power series and the asymptotic expansion of `I_n`.
/// The neglected terms of the asymptotic series are `O(exp(-2x))`, about
/// `1e-26` here, and the positive-term series is still well conditioned.
pub const I_SERIES_LIMIT: f64 = 30.0;

/// Crossover between the logarithmic series and CF2 for `K_n`. The series
/// loses roughly `2x / ln 10` digits to cancellation, CF2 converges fast for
/// `x >= 2`.
pub const K_SERIES_LIMIT: f64 = 2.0;

const SERIES_EPS: f64 = 1e-17;
const MAX_TERMS: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BesselKind {
    /// First kind, `I_n`.
    I,
    /// Second kind, `K_n`.
    K,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BesselOrder {
    Zero,
    One,
}

impl BesselOrder {
    pub fn as_u32(self) -> u32 {
        match self {
            BesselOrder::Zero => 0,
            BesselOrder::One => 1,
        }
    }

    pub fn from_u32(n: u32) -> Result<Self> {
        match n {
            0 => Ok(BesselOrder::Zero),
            1 => Ok(BesselOrder::One),
            _ => Err(Error::Domain(format!("unsupported Bessel order {n}"))),
        }
    }
}

/// A scaled Bessel value together with the argument it was evaluated at.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledBessel {
    pub kind: BesselKind,
    pub order: BesselOrder,
    pub x: f64,
    /// `exp(-x) I_n(x)` for `kind = I`, `exp(x) K_n(x)` for `kind = K`.
    pub scaled_value: f64,
}

impl ScaledBessel {
    pub fn new(kind: BesselKind, order: BesselOrder, x: f64) -> Result<Self> {
        let scaled_value = bessel_scaled(kind, order, x)?;
        Ok(ScaledBessel {
            kind,
            order,
            x,
            scaled_value,
        })
    }

    /// Unscaled `I_n(x)` or `K_n(x)`. Overflows to infinity for `I` beyond
    /// `x ≈ 709` and underflows to zero for `K` beyond `x ≈ 705`.
    pub fn unscaled(&self) -> f64 {
        match self.kind {
            BesselKind::I => self.scaled_value * self.x.exp(),
            BesselKind::K => self.scaled_value * (-self.x).exp(),
        }
    }
}

/// `exp(-x) I_n(x)` or `exp(x) K_n(x)`.
pub fn bessel_scaled(kind: BesselKind, order: BesselOrder, x: f64) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::Domain(format!("Bessel argument must be finite and >= 0, got {x}")));
    }
    match kind {
        BesselKind::I => Ok(match order {
            BesselOrder::Zero => i0e(x),
            BesselOrder::One => i1e(x),
        }),
        BesselKind::K => {
            if x == 0.0 {
                return Err(Error::Domain("K_n is singular at x = 0".into()));
            }
            let (k0, k1) = k01e(x);
            Ok(match order {
                BesselOrder::Zero => k0,
                BesselOrder::One => k1,
            })
        }
    }
}

/// `exp(-x) I_0(x)` for `x >= 0`.
pub fn i0e(x: f64) -> f64 {
    if x <= I_SERIES_LIMIT {
        i_series(0, x) * (-x).exp()
    } else {
        i_asymptotic(0, x)
    }
}

/// `exp(-x) I_1(x)` for `x >= 0`.
pub fn i1e(x: f64) -> f64 {
    if x <= I_SERIES_LIMIT {
        i_series(1, x) * (-x).exp()
    } else {
        i_asymptotic(1, x)
    }
}

/// `exp(x) K_0(x)` for `x > 0`.
pub fn k0e(x: f64) -> f64 {
    k01e(x).0
}

/// `exp(x) K_1(x)` for `x > 0`.
pub fn k1e(x: f64) -> f64 {
    k01e(x).1
}

/// `(exp(x) K_0(x), exp(x) K_1(x))`, both from one evaluation.
pub fn k01e(x: f64) -> (f64, f64) {
    if x <= K_SERIES_LIMIT {
        let (k0, k1) = k_series(x);
        let s = x.exp();
        (k0 * s, k1 * s)
    } else {
        k_steed(x)
    }
}

/// Unscaled `I_n(x) = Σ (x/2)^(2m+n) / (m! (m+n)!)`.
fn i_series(n: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let q = half * half;
    let mut term = if n == 0 { 1.0 } else { half };
    let mut sum = term;
    for m in 1..MAX_TERMS {
        let m = m as f64;
        term *= q / (m * (m + n as f64));
        sum += term;
        if term <= SERIES_EPS * sum {
            break;
        }
    }
    sum
}

/// Hankel expansion `exp(-x) I_n(x) ~ (2πx)^(-1/2) Σ (-1)^k a_k(n) / x^k`,
/// truncated at the smallest term.
fn i_asymptotic(n: u32, x: f64) -> f64 {
    let mu = 4.0 * (n * n) as f64;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..MAX_TERMS {
        let odd = (2 * k - 1) as f64;
        let next = -term * (mu - odd * odd) / (k as f64 * 8.0 * x);
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() <= SERIES_EPS * sum.abs() {
            break;
        }
    }
    sum / (2.0 * PI * x).sqrt()
}

/// Unscaled `(K_0(x), K_1(x))` from the ascending series with the log term.
fn k_series(x: f64) -> (f64, f64) {
    let half = 0.5 * x;
    let q = half * half;
    let log_half = half.ln();

    let i0 = i_series(0, x);
    let i1 = i_series(1, x);

    // K_0 = -(ln(x/2) + γ) I_0 + Σ_{m>=1} q^m / (m!)^2 H_m
    // K_1 = 1/x + ln(x/2) I_1 - (x/4) Σ_{m>=0} q^m / (m!(m+1)!) (ψ(m+1) + ψ(m+2))
    let mut k0_sum = 0.0;
    let mut t0 = 1.0; // q^m / (m!)^2
    let mut t1 = 1.0; // q^m / (m!(m+1)!)
    let mut harmonic = 0.0; // H_m
    let mut k1_sum = 1.0 - 2.0 * EULER_GAMMA;
    for m in 1..MAX_TERMS {
        let mf = m as f64;
        harmonic += 1.0 / mf;
        t0 *= q / (mf * mf);
        t1 *= q / (mf * (mf + 1.0));
        let d0 = t0 * harmonic;
        let d1 = t1 * (2.0 * harmonic + 1.0 / (mf + 1.0) - 2.0 * EULER_GAMMA);
        k0_sum += d0;
        k1_sum += d1;
        if d0.abs() <= SERIES_EPS * k0_sum.abs() && d1.abs() <= SERIES_EPS * k1_sum.abs() {
            break;
        }
    }
    let k0 = -(log_half + EULER_GAMMA) * i0 + k0_sum;
    let k1 = 1.0 / x + log_half * i1 - 0.25 * x * k1_sum;
    (k0, k1)
}

/// Steed's method for the second continued fraction (Temme's normalization),
/// order zero. Returns scaled `(K_0, K_1)` directly.
fn k_steed(x: f64) -> (f64, f64) {
    const EPS: f64 = 1e-17;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 1..100_000 {
        let fi = i as f64;
        a -= 2.0 * fi;
        c = -a * c / (fi + 1.0);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < EPS {
            break;
        }
    }
    h *= a1;
    let k0 = (PI / (2.0 * x)).sqrt() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    (k0, k1)
}

/// Outcome of the three ratio inequalities at one argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RatioChecks {
    /// `K_0(x)/K_1(x) >= x / (1/2 + sqrt(1/4 + x^2))`.
    pub k_lower_holds: bool,
    /// `I_0(x)/I_1(x) <= (1/2 + sqrt(9/4 + x^2)) / x`.
    pub i_upper_holds: bool,
    /// `sqrt(y) e^y K_1(y) <= sqrt(x) e^x K_1(x)` at `y = 1.01 x`.
    pub k1_decay_holds: bool,
}

impl RatioChecks {
    pub fn all(&self) -> bool {
        self.k_lower_holds && self.i_upper_holds && self.k1_decay_holds
    }
}

/// Ratio of the step used by the discrete monotonicity probe of `√x e^x K_1(x)`.
pub const K1_DECAY_STEP: f64 = 1.01;

pub fn k_ratio_lower_bound(x: f64) -> f64 {
    x / (0.5 + (0.25 + x * x).sqrt())
}

pub fn i_ratio_upper_bound(x: f64) -> f64 {
    (0.5 + (2.25 + x * x).sqrt()) / x
}

/// Evaluates the ratio inequalities using scaled values only, so the
/// exponential factors cancel exactly.
pub fn check_ratio_inequalities(x: f64) -> Result<RatioChecks> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("ratio checks need x > 0, got {x}")));
    }
    let (k0, k1) = k01e(x);
    let k_ratio = k0 / k1;
    let i_ratio = i0e(x) / i1e(x);
    let y = x * K1_DECAY_STEP;
    let lhs = y.sqrt() * k1e(y);
    let rhs = x.sqrt() * k1;
    Ok(RatioChecks {
        k_lower_holds: k_ratio >= k_ratio_lower_bound(x),
        i_upper_holds: i_ratio <= i_ratio_upper_bound(x),
        k1_decay_holds: lhs <= rhs,
    })
}
