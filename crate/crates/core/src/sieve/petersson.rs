use std::f64::consts::PI;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bessel::{bessel_j, ln_factorial};
use super::kloosterman::{kloosterman, KloostermanQuery};
use crate::error::{precondition, Result};
use crate::forms::{cusp_dimension, eigenforms};

/// Truncation error targeted when no modulus cap is given.
pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-10;

const BLOCK: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeterssonTail {
    pub value: f64,
    pub c_max: u64,
    /// Upper bound on the omitted moduli `c > c_max`.
    pub truncation_estimate: f64,
    pub tolerance: f64,
    pub within_tolerance: bool,
}

fn check(m: u64, n: u64, k: u32, level: u64) -> Result<()> {
    if m == 0 || n == 0 {
        return precondition("Petersson indices must be >= 1");
    }
    if k < 4 || k % 2 == 1 {
        return precondition(format!("Petersson tail needs even k >= 4, got {k}"));
    }
    if level == 0 {
        return precondition("level must be >= 1");
    }
    Ok(())
}

/// Overestimate of the moduli `c > c_max`, `N | c`, from Weil's bound with
/// `tau(c) <= 2 sqrt(c)` and `|J_(k-1)(z)| <= (z/2)^(k-1) / (k-1)!`:
/// `2 pi sum 2 sqrt(g) (2 pi sqrt(mn))^(k-1) / (k-1)! c^(1-k)`, with the sum
/// over `c = N j`, `j > c_max / N` bounded by an integral.
pub fn tail_truncation_estimate(m: u64, n: u64, k: u32, level: u64, c_max: u64) -> f64 {
    let j = c_max / level;
    if j == 0 {
        return f64::INFINITY;
    }
    let s = (k - 1) as f64;
    let g = m.gcd(&n) as f64;
    let a = 2.0 * PI * ((m * n) as f64).sqrt();
    let ln = (4.0 * PI).ln() + 0.5 * g.ln() + s * a.ln() - ln_factorial((k - 1) as u64)
        - s * (level as f64).ln()
        + (1.0 - s) * (j as f64).ln()
        - (s - 1.0).ln();
    ln.exp()
}

/// Smallest multiple of `N` whose truncation estimate is below `tol`.
pub fn default_c_max(m: u64, n: u64, k: u32, level: u64, tol: f64) -> u64 {
    let mut j = 1u64;
    // the estimate falls like j^(2-k); jump close, then step
    let first = tail_truncation_estimate(m, n, k, level, level);
    if first >= tol {
        let ratio = (first / tol).powf(1.0 / (k as f64 - 2.0));
        j = (ratio.floor() as u64).max(1);
    }
    while j > 1 && tail_truncation_estimate(m, n, k, level, (j - 1) * level) < tol {
        j -= 1;
    }
    while tail_truncation_estimate(m, n, k, level, j * level) >= tol {
        j += 1;
    }
    j * level
}

/// `2 pi i^(-k) sum_{c <= c_max, N | c} S(m, n; c) / c J_(k-1)(4 pi sqrt(mn) / c)`.
///
/// `i^(-k)` is the real sign `(-1)^(k/2)`. Without `c_max` the sum runs to
/// [`default_c_max`]. Blocks of moduli are summed in parallel and combined
/// in order, so the result does not depend on the thread count.
pub fn petersson_tail(m: u64, n: u64, k: u32, level: u64, c_max: Option<u64>, tol: f64) -> Result<PeterssonTail> {
    check(m, n, k, level)?;
    if !(tol > 0.0) {
        return precondition("tolerance must be positive");
    }
    let c_max = c_max.unwrap_or_else(|| default_c_max(m, n, k, level, tol));
    let sign = if (k / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
    let z = 4.0 * PI * ((m * n) as f64).sqrt();
    let moduli: Vec<u64> = (1..=c_max / level).map(|j| j * level).collect();
    let blocks: Vec<Result<f64>> = moduli
        .par_chunks(BLOCK)
        .map(|chunk| {
            let mut acc = 0.0;
            for &c in chunk {
                let s = kloosterman(KloostermanQuery { m, n, c });
                if s != 0.0 {
                    acc += s / c as f64 * bessel_j(k - 1, z / c as f64)?;
                }
            }
            Ok(acc)
        })
        .collect();
    let mut total = 0.0;
    for b in blocks {
        total += b?;
    }
    let estimate = tail_truncation_estimate(m, n, k, level, c_max);
    Ok(PeterssonTail {
        value: 2.0 * PI * sign * total,
        c_max,
        truncation_estimate: estimate,
        tolerance: tol,
        within_tolerance: estimate <= tol,
    })
}

/// `delta(m, n) + tail`: the harmonic sum of `lambda_f(m) lambda_f(n)` at level one.
pub fn petersson_sum(m: u64, n: u64, k: u32) -> Result<f64> {
    let tail = petersson_tail(m, n, k, 1, None, DEFAULT_TAIL_TOLERANCE)?;
    Ok(if m == n { 1.0 } else { 0.0 } + tail.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioEntry {
    pub m: u64,
    pub n: u64,
    pub ratio: f64,
    pub expected: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeterssonRatioReport {
    pub k: u32,
    /// `r(1, 1)`, the harmonic weight of the single eigenform.
    pub base: f64,
    pub tolerance: f64,
    pub max_error: f64,
    pub entries: Vec<RatioEntry>,
    pub offenders: Vec<RatioEntry>,
}

impl PeterssonRatioReport {
    pub fn passed(&self) -> bool {
        self.offenders.is_empty()
    }
}

/// Compare `r(m, n) / r(1, 1)` with `lambda(m) lambda(n)` for the eigenform
/// of a one-dimensional `S_k(1)`, over `1 <= m, n <= bound`.
pub fn petersson_ratio_check(k: u32, bound: u64, tol: f64) -> Result<PeterssonRatioReport> {
    if cusp_dimension(k) != 1 {
        return precondition(format!(
            "ratio check needs dim S_k(1) = 1, weight {k} has {}",
            cusp_dimension(k)
        ));
    }
    if bound == 0 {
        return precondition("index bound must be >= 1");
    }
    let form = eigenforms(k, (bound as usize).max(3))?.remove(0);
    let lambda = |i: u64| form.lambda(i).expect("within table");
    let base = petersson_sum(1, 1, k)?;
    let pairs: Vec<(u64, u64)> = (1..=bound)
        .flat_map(|m| (1..=bound).map(move |n| (m, n)))
        .collect();
    let sums: Vec<Result<f64>> = pairs.iter().map(|&(m, n)| petersson_sum(m, n, k)).collect();
    let mut entries = Vec::with_capacity(pairs.len());
    for (&(m, n), r) in pairs.iter().zip(sums) {
        let ratio = r? / base;
        let expected = lambda(m) * lambda(n);
        entries.push(RatioEntry {
            m,
            n,
            ratio,
            expected,
            error: (ratio - expected).abs(),
        });
    }
    let max_error = entries.iter().map(|e| e.error).fold(0.0, f64::max);
    let offenders = entries.iter().filter(|e| !(e.error <= tol)).copied().collect();
    Ok(PeterssonRatioReport {
        k,
        base,
        tolerance: tol,
        max_error,
        entries,
        offenders,
    })
}
