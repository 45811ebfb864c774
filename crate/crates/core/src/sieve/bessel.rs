use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{precondition, Result};

/// Relative size of the remainder estimate above which a partial sum is
/// flagged as inaccurate.
pub const ACCURACY_THRESHOLD: f64 = 1e-12;

/// A truncated series together with a bound on what was left out.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub value: f64,
    pub terms: usize,
    /// Estimate of the omitted tail; infinite when the terms were still
    /// growing at the cut.
    pub remainder: f64,
    /// `remainder <= ACCURACY_THRESHOLD * |value|`.
    pub accurate: bool,
}

impl SeriesValue {
    fn new(value: f64, terms: usize, remainder: f64) -> Self {
        SeriesValue {
            value,
            terms,
            remainder,
            accurate: remainder <= ACCURACY_THRESHOLD * value.abs(),
        }
    }
}

pub fn ln_factorial(n: u64) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

fn check_args(order: u32, x: f64, terms: usize) -> Result<()> {
    if order == 0 {
        return precondition("Bessel order must be >= 1");
    }
    if !(x >= 0.0) || !x.is_finite() {
        return precondition(format!("Bessel argument must be finite and >= 0, got {x}"));
    }
    if terms == 0 {
        return precondition("at least one series term is needed");
    }
    Ok(())
}

/// Partial sum of `J_nu(x) = sum_l (-1)^l (x/2)^(nu+2l) / (l! (nu+l)!)`
/// over `l < terms`. The remainder is the first omitted term, which bounds
/// the alternating tail once the terms decrease.
pub fn bessel_j_series(order: u32, x: f64, terms: usize) -> Result<SeriesValue> {
    check_args(order, x, terms)?;
    if x == 0.0 {
        return Ok(SeriesValue::new(0.0, terms, 0.0));
    }
    let nu = order as f64;
    let half = x / 2.0;
    let y = half * half;
    let mut t = (nu * half.ln() - ln_factorial(order as u64)).exp();
    let mut sum = 0.0;
    for l in 0..terms {
        sum += t;
        let l = l as f64;
        t *= -y / ((l + 1.0) * (nu + l + 1.0));
    }
    let decreasing = y < terms as f64 * (nu + terms as f64);
    let remainder = if decreasing { t.abs() } else { f64::INFINITY };
    Ok(SeriesValue::new(sum, terms, remainder))
}

/// `J_nu(x)` for `x >= 0`.
///
/// The power series is used where its terms shrink from the start (or `x`
/// is small); elsewhere it cancels badly, and the trapezoid rule on
/// `J_nu(x) = (1/2pi) int_0^2pi cos(nu t - x sin t) dt` is used instead. The
/// integrand is smooth and periodic, so the error is of the size of
/// `J_(N - nu)(x)` for `N` nodes.
pub fn bessel_j(order: u32, x: f64) -> Result<f64> {
    check_args(order, x, 1)?;
    let nu = order as f64;
    if x <= 8.0 || (x / 2.0).powi(2) <= nu + 1.0 {
        let mut terms = 8;
        loop {
            let s = bessel_j_series(order, x, terms)?;
            if s.remainder <= 1e-17 * s.value.abs() || s.remainder < 1e-300 || terms > 400 {
                return Ok(s.value);
            }
            terms *= 2;
        }
    }
    let nodes = 2 * (order as usize + x.ceil() as usize) + 64;
    let h = TAU / nodes as f64;
    let sum: f64 = (0..nodes)
        .map(|j| {
            let t = j as f64 * h;
            (nu * t - x * t.sin()).cos()
        })
        .sum();
    Ok(sum / nodes as f64)
}

fn curly_terms(order: u32, x: f64) -> (f64, f64) {
    // returns (u_0, x^2) with u_l = x^(nu+2l) / (l! (nu+l)!)
    let nu = order as f64;
    ((nu * x.ln() - ln_factorial(order as u64)).exp(), x * x)
}

/// Partial sum of `sum_l (x^(nu+2l) / (l! (nu+l)!))^2` over `l < terms`.
///
/// All terms are positive and their ratio decreases with `l`, so once the
/// ratio `rho` at the cut is below one the tail is at most
/// `t_cut / (1 - rho)`.
pub fn curly_j(order: u32, x: f64, terms: usize) -> Result<SeriesValue> {
    check_args(order, x, terms)?;
    if x == 0.0 {
        return Ok(SeriesValue::new(0.0, terms, 0.0));
    }
    let nu = order as f64;
    let (mut u, x2) = curly_terms(order, x);
    let mut sum = 0.0;
    for l in 0..terms {
        sum += u * u;
        let l = l as f64;
        u *= x2 / ((l + 1.0) * (nu + l + 1.0));
    }
    let l = terms as f64;
    let rho = (x2 / ((l + 1.0) * (nu + l + 1.0))).powi(2);
    let remainder = if rho < 1.0 { u * u / (1.0 - rho) } else { f64::INFINITY };
    Ok(SeriesValue::new(sum, terms, remainder))
}

/// [`curly_j`] with enough terms for full double precision.
pub fn curly_j_converged(order: u32, x: f64) -> Result<SeriesValue> {
    let mut terms = 4;
    loop {
        let s = curly_j(order, x, terms)?;
        if s.remainder <= 1e-17 * s.value || terms >= 1 << 12 {
            return Ok(s);
        }
        terms *= 2;
    }
}
