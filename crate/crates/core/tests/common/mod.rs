//! Independent references for the scaled Bessel functions: the power series
//! for small arguments and trapezoidal quadrature of the integral
//! representations otherwise.

#![allow(dead_code)]

use std::f64::consts::PI;

/// `e^{-x} I_n(x)` from `Σ (x/2)^{2k+n} / (k! (k+n)!)`. Only for `x <= 2`.
pub fn i_series(n: u32, x: f64) -> f64 {
    assert!(x <= 2.0);
    let q = 0.25 * x * x;
    let mut term = (0.5 * x).powi(n as i32) / (1..=n).map(f64::from).product::<f64>();
    let mut sum = term;
    for k in 1..200 {
        term *= q / (k as f64 * (k + n) as f64);
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
    }
    sum * (-x).exp()
}

/// `e^{-x} I_n(x) = (1/π) ∫_0^π exp(-2x sin²(θ/2)) cos(nθ) dθ`. The integrand
/// is periodic and even, so the trapezoid rule converges geometrically.
pub fn i_quadrature(n: u32, x: f64) -> f64 {
    let steps = 64 + (12.0 * x.sqrt()) as usize;
    let h = PI / steps as f64;
    let f = |theta: f64| {
        let s = (0.5 * theta).sin();
        (-2.0 * x * s * s).exp() * (n as f64 * theta).cos()
    };
    let mut sum = 0.5 * (f(0.0) + f(PI));
    for k in 1..steps {
        sum += f(k as f64 * h);
    }
    sum * h / PI
}

/// `e^x K_n(x) = ∫_0^∞ exp(-2x sinh²(t/2)) cosh(nt) dt`, truncated where the
/// exponent reaches -40.
pub fn k_quadrature(n: u32, x: f64) -> f64 {
    let h = 0.1 / x.max(1.0).sqrt();
    let t_max = (1.0 + 40.0 / x).acosh();
    let f = |t: f64| {
        let s = (0.5 * t).sinh();
        (-2.0 * x * s * s).exp() * (n as f64 * t).cosh()
    };
    let mut sum = 0.5 * f(0.0);
    let mut k = 1;
    loop {
        let t = k as f64 * h;
        if t > t_max {
            break;
        }
        sum += f(t);
        k += 1;
    }
    sum * h
}

pub fn i_oracle(n: u32, x: f64) -> f64 {
    if x <= 1.0 {
        i_series(n, x)
    } else {
        i_quadrature(n, x)
    }
}

pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (l, h) = (lo.ln(), hi.ln());
    (0..n).map(|k| (l + (h - l) * k as f64 / (n - 1) as f64).exp()).collect()
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}
