use std::collections::BTreeMap;
use std::f64::consts::{E, PI};

use serde::{Deserialize, Serialize};

use super::bessel::curly_j_converged;
use crate::arith::SmoothSpec;
use crate::error::{domain, precondition, Result};

/// Test-suite constant for [`curly_j_bound_check`]. It is calibrated on the
/// declared grid and says nothing about the implied constant of the bound.
pub const CURLY_J_CONSTANT: f64 = 64.0;

/// `n = e^(k/(k-3))` for `k > 2`, and `1` for `k = 2`.
pub fn bessel_cutoff(k: u32) -> f64 {
    if k > 2 {
        E.powf(k as f64 / (k as f64 - 3.0))
    } else {
        1.0
    }
}

/// `eta = k(1 - alpha) - k^(2 alpha - 1) / 2`.
pub fn eta(k: u32, alpha: f64) -> f64 {
    let k = k as f64;
    k * (1.0 - alpha) - k.powf(2.0 * alpha - 1.0) / 2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SieveParams {
    pub k: u32,
    pub level: u64,
    /// Sieve length `M`.
    pub length: f64,
    pub alpha: f64,
    pub n_param: f64,
    pub eta: f64,
    /// Whether `N k^alpha >= 2 pi M n`.
    pub constraint_holds: bool,
}

impl SieveParams {
    pub fn new(k: u32, level: u64, length: f64, alpha: f64) -> Result<Self> {
        if k < 2 || k % 2 == 1 {
            return precondition(format!("weight must be even and >= 2, got {k}"));
        }
        if level == 0 {
            return precondition("level must be >= 1");
        }
        if !(length > 1.0) || !length.is_finite() {
            return precondition(format!("sieve length M must exceed 1, got {length}"));
        }
        if !(alpha > 0.5 && alpha < 1.0) {
            return domain(format!(
                "alpha must lie in (1/2, 1), got {alpha}; the range alpha <= 1/2 has no proven bound"
            ));
        }
        let n_param = bessel_cutoff(k);
        let constraint_holds =
            level as f64 * (k as f64).powf(alpha) >= 2.0 * PI * length * n_param;
        Ok(SieveParams {
            k,
            level,
            length,
            alpha,
            n_param,
            eta: eta(k, alpha),
            constraint_holds,
        })
    }

    /// Analytic conductor `Q = k^2 N`.
    pub fn conductor(&self) -> f64 {
        (self.k as f64).powi(2) * self.level as f64
    }
}

/// `Delta(N, k, M) = 1 + M / (N k^eta)`, or `1 + M log M / N` in weight 2.
pub fn delta_bound(params: &SieveParams) -> Result<f64> {
    let SieveParams {
        k,
        level,
        length,
        ..
    } = *params;
    let n = level as f64;
    if k == 2 {
        return Ok(1.0 + length * length.ln() / n);
    }
    if !params.constraint_holds {
        return domain(format!(
            "N k^alpha < 2 pi M n for k={k}, N={level}, M={length}; use complete_sieve_bound instead"
        ));
    }
    Ok(1.0 + length / (n * (k as f64).powf(params.eta)))
}

/// `1 + M / (N k^(1 - eps))` for `k >= 4`, `1 + M log M / N` for `k = 2`.
pub fn complete_sieve_bound(length: f64, level: u64, k: u32, epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return precondition(format!("epsilon must lie in (0, 1), got {epsilon}"));
    }
    if !(length >= 0.0) || !length.is_finite() {
        return precondition(format!("sieve length must be finite and >= 0, got {length}"));
    }
    if level == 0 {
        return precondition("level must be >= 1");
    }
    if k < 2 || k % 2 == 1 {
        return precondition(format!("weight must be even and >= 2, got {k}"));
    }
    let n = level as f64;
    if k == 2 {
        let m_log_m = if length == 0.0 { 0.0 } else { length * length.ln() };
        return Ok(1.0 + m_log_m / n);
    }
    Ok(1.0 + length / (n * (k as f64).powf(1.0 - epsilon)))
}

/// `x^4 k^(2 (k (alpha - 1) - 2 alpha + k^(2 alpha - 1) / 2))`, the shape of
/// the bound on the squared Bessel sum.
pub fn curly_j_bound(k: u32, alpha: f64, x: f64) -> f64 {
    let kf = k as f64;
    let exponent = kf * (alpha - 1.0) - 2.0 * alpha + kf.powf(2.0 * alpha - 1.0) / 2.0;
    x.powi(4) * (2.0 * exponent * kf.ln()).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundPoint {
    pub k: u32,
    pub alpha: f64,
    pub x: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurlyJBoundReport {
    pub constant: f64,
    pub points: usize,
    pub max_ratio: f64,
    pub worst: Option<BoundPoint>,
    /// Points whose ratio exceeds `constant`.
    pub offenders: Vec<BoundPoint>,
}

impl CurlyJBoundReport {
    pub fn passed(&self) -> bool {
        self.offenders.is_empty()
    }

    fn absorb(&mut self, other: CurlyJBoundReport) {
        self.points += other.points;
        if other.max_ratio > self.max_ratio {
            self.max_ratio = other.max_ratio;
            self.worst = other.worst;
        }
        self.offenders.extend(other.offenders);
    }
}

/// Ratio of the squared Bessel sum to [`curly_j_bound`] at each `x`, with
/// every `x` required to satisfy `0 <= x <= k^alpha / n`.
pub fn curly_j_bound_check(k: u32, alpha: f64, xs: &[f64], constant: f64) -> Result<CurlyJBoundReport> {
    if k < 4 || k % 2 == 1 {
        return precondition(format!("weight must be even and >= 4, got {k}"));
    }
    if !(alpha > 0.5 && alpha <= 1.0) {
        return domain(format!("alpha must lie in (1/2, 1], got {alpha}"));
    }
    let x_max = (k as f64).powf(alpha) / bessel_cutoff(k);
    let mut report = CurlyJBoundReport {
        constant,
        points: 0,
        max_ratio: 0.0,
        worst: None,
        offenders: Vec::new(),
    };
    for &x in xs {
        if !(x >= 0.0 && x <= x_max * (1.0 + 1e-12)) {
            return precondition(format!("x = {x} outside [0, k^alpha/n = {x_max}] for k={k}"));
        }
        let ratio = if x == 0.0 {
            0.0
        } else {
            curly_j_converged(k - 1, x)?.value / curly_j_bound(k, alpha, x)
        };
        let point = BoundPoint { k, alpha, x, ratio };
        report.points += 1;
        if report.worst.is_none() || ratio > report.max_ratio {
            report.max_ratio = ratio;
            report.worst = Some(point);
        }
        if ratio > constant {
            report.offenders.push(point);
        }
    }
    Ok(report)
}

/// [`curly_j_bound_check`] over every `(k, alpha)` pair, with `points`
/// evenly spaced `x` in `(0, k^alpha / n]`.
pub fn curly_j_bound_grid(ks: &[u32], alphas: &[f64], points: usize, constant: f64) -> Result<CurlyJBoundReport> {
    let mut total = CurlyJBoundReport {
        constant,
        points: 0,
        max_ratio: 0.0,
        worst: None,
        offenders: Vec::new(),
    };
    for &k in ks {
        for &alpha in alphas {
            let x_max = (k as f64).powf(alpha) / bessel_cutoff(k);
            let xs: Vec<f64> = (1..=points).map(|i| x_max * i as f64 / points as f64).collect();
            total.absorb(curly_j_bound_check(k, alpha, &xs, constant)?);
        }
    }
    Ok(total)
}

/// Per-prime data of an amplifier: the gap `delta_p` and the non-constant
/// coefficients `alpha_p(1..=s)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrimeWeights {
    pub delta: f64,
    pub coefficients: Vec<f64>,
}

impl PrimeWeights {
    pub fn new(delta: f64, coefficients: Vec<f64>) -> Result<Self> {
        if !(delta > 0.0) {
            return precondition(format!("delta_p must be > 0, got {delta}"));
        }
        if coefficients.is_empty() || coefficients.iter().all(|&a| a == 0.0) {
            return domain("amplifier coefficient list is empty or zero");
        }
        Ok(PrimeWeights { delta, coefficients })
    }

    /// `delta_p^2 / sum_i alpha_p(i)^2`.
    pub fn local_factor(&self) -> f64 {
        let s: f64 = self.coefficients.iter().map(|a| a * a).sum();
        self.delta * self.delta / s
    }
}

/// `H = sum_{m <= M, m | P_N(beta)} prod_{p | m} delta_p^2 / sum_i alpha_p(i)^2`.
///
/// `weights` must cover every prime `p <= beta` not dividing `N` (that can
/// divide some `m <= M`); `default` is used for primes it lacks, if given.
pub fn sieve_h(
    length: u64,
    beta: f64,
    level: u64,
    weights: &BTreeMap<u64, PrimeWeights>,
    default: Option<&PrimeWeights>,
) -> Result<f64> {
    let spec = SmoothSpec::new(length, beta, level)?;
    let mut factors = BTreeMap::new();
    for p in spec.admissible_primes() {
        let w = match weights.get(&p).or(default) {
            Some(w) => w,
            None => return precondition(format!("no amplifier weights for prime {p}")),
        };
        if w.coefficients.is_empty() {
            return domain(format!("empty coefficient list at prime {p}"));
        }
        factors.insert(p, w.local_factor());
    }
    Ok(spec
        .squarefree_members()
        .iter()
        .map(|(_, primes)| primes.iter().map(|p| factors[p]).product::<f64>())
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn amplifier() -> PrimeWeights {
        PrimeWeights::new(0.25, vec![0.5, 0.25]).unwrap()
    }

    #[test]
    fn params() {
        let p = SieveParams::new(12, 1_000_000, 10.0, 0.6).unwrap();
        assert!((p.eta - (12.0 * 0.4 - 12f64.powf(0.2) / 2.0)).abs() < 1e-15);
        assert!((p.n_param - E.powf(12.0 / 9.0)).abs() < 1e-15);
        assert!(p.constraint_holds);
        assert_eq!(SieveParams::new(2, 1, 10.0, 0.6).unwrap().n_param, 1.0);
        assert!(SieveParams::new(12, 1, 10.0, 0.5).is_err());
        assert!(SieveParams::new(12, 1, 10.0, 0.3).is_err());
        assert!(SieveParams::new(12, 1, 1.0, 0.6).is_err());
        assert!(SieveParams::new(13, 1, 10.0, 0.6).is_err());
    }

    #[test]
    fn delta_examples() {
        let p = SieveParams::new(12, 1_000_000, 10.0, 0.6).unwrap();
        let eta = 12.0 * 0.4 - 12f64.powf(0.2) / 2.0;
        let want = 1.0 + 10.0 / (1e6 * 12f64.powf(eta));
        assert!((delta_bound(&p).unwrap() - want).abs() < 1e-15);

        let p = SieveParams::new(12, 1_000_000, 1.0 + 1e-12, 0.6).unwrap();
        assert!((delta_bound(&p).unwrap() - 1.0).abs() < 1e-6);

        let p = SieveParams::new(2, 100, 50.0, 0.6).unwrap();
        assert!((delta_bound(&p).unwrap() - (1.0 + 50.0 * 50f64.ln() / 100.0)).abs() < 1e-14);

        let p = SieveParams::new(12, 1, 100.0, 0.6).unwrap();
        assert!(!p.constraint_holds);
        assert!(delta_bound(&p).is_err());
    }

    #[test]
    fn complete_examples() {
        assert_eq!(complete_sieve_bound(0.0, 7, 12, 0.1).unwrap(), 1.0);
        let m = 7.0 * 12f64.powf(0.9);
        assert!((complete_sieve_bound(m, 7, 12, 0.1).unwrap() - 2.0).abs() < 1e-14);
        assert!((complete_sieve_bound(E, 1, 2, 0.1).unwrap() - (1.0 + E)).abs() < 1e-14);
        assert!(complete_sieve_bound(1.0, 1, 12, 0.0).is_err());
        assert!(complete_sieve_bound(1.0, 1, 12, 1.0).is_err());
    }

    #[test]
    fn curly_bound_examples() {
        let r = curly_j_bound_check(4, 0.55, &[0.0], CURLY_J_CONSTANT).unwrap();
        assert_eq!(r.max_ratio, 0.0);
        let x = 12f64.powf(0.6) / bessel_cutoff(12);
        assert!(curly_j_bound_check(12, 0.6, &[x], CURLY_J_CONSTANT).unwrap().passed());
        assert!(curly_j_bound_check(40, 0.75, &[1.0], CURLY_J_CONSTANT).unwrap().passed());
        assert!(curly_j_bound_check(12, 0.6, &[x * 1.5], CURLY_J_CONSTANT).is_err());
        let tight = curly_j_bound_check(4, 0.55, &[0.03], 1e-9).unwrap();
        assert_eq!(tight.offenders.len(), 1);
    }

    #[test]
    fn h_sum_examples() {
        let empty = BTreeMap::new();
        let w = amplifier();
        assert!((w.local_factor() - 0.2).abs() < 1e-15);
        let h = sieve_h(10, 3.0, 1, &empty, Some(&w)).unwrap();
        assert!((h - 1.44).abs() < 1e-14);
        assert_eq!(sieve_h(1, 3.0, 1, &empty, Some(&w)).unwrap(), 1.0);
        assert_eq!(sieve_h(10, 3.0, 6, &empty, Some(&w)).unwrap(), 1.0);
        assert!(sieve_h(10, 3.0, 1, &empty, None).is_err());
        assert!(PrimeWeights::new(0.25, vec![]).is_err());
        assert!(PrimeWeights::new(0.0, vec![1.0]).is_err());
    }
}
