//! Empirical statistics over ranges of weights, packaged as reports.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, prime_pi, PrimePower};
use crate::averages::{average_nf, average_pf, MeasureAssignment};
use crate::error::{domain, precondition, Error, Result};
use crate::forms::{
    cusp_dimension, eigenforms_from_basis, hecke::normalize_trace, hecke_matrix_on, CoefficientCache,
    EigenformRecord, LevelOneRing,
};
use crate::measures::{measure_mass, AngleInterval, MeasureSpec};

/// Default tabulation length of each eigenform.
pub const DEFAULT_PREC: usize = 200;
/// Default ceiling of the weight range.
pub const DEFAULT_MAX_WEIGHT: u32 = 300;

/// Even weights `lo, lo + 2, ..., hi` (bounds rounded inwards to even).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightRange {
    pub lo: u32,
    pub hi: u32,
}

impl WeightRange {
    pub fn new(lo: u32, hi: u32) -> Result<Self> {
        let lo = lo + lo % 2;
        let hi = hi - hi % 2;
        if lo > hi {
            return precondition(format!("empty weight range {lo}..={hi}"));
        }
        Ok(WeightRange { lo, hi })
    }

    pub fn single(k: u32) -> Result<Self> {
        WeightRange::new(k, k)
    }

    pub fn contains(&self, k: u32) -> bool {
        k.is_multiple_of(2) && self.lo <= k && k <= self.hi
    }

    pub fn weights(&self) -> impl Iterator<Item = u32> {
        (self.lo..=self.hi).step_by(2)
    }
}

impl fmt::Display for WeightRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

impl FromStr for WeightRange {
    type Err = Error;

    /// `"12..300"`, `"12..=300"` or a single weight.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Precondition(format!("cannot parse weight range {s:?}"));
        let s = s.trim();
        if let Some((a, b)) = s.split_once("..") {
            let b = b.strip_prefix('=').unwrap_or(b);
            let lo = a.trim().parse().map_err(|_| bad())?;
            let hi = b.trim().parse().map_err(|_| bad())?;
            WeightRange::new(lo, hi)
        } else {
            WeightRange::single(s.parse().map_err(|_| bad())?)
        }
    }
}

/// Every eigenform of level one with weight in a range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignCensus {
    pub range: WeightRange,
    pub prec: usize,
    pub forms: Vec<EigenformRecord>,
}

/// One census line: first negatives and the signs of `lambda_f(p)`, `p <= P`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusRow {
    pub k: u32,
    pub index: usize,
    pub p_f: Option<u64>,
    pub n_f: Option<u64>,
    pub signs: Vec<i8>,
}

impl SignCensus {
    /// Eigenforms of all weights in `range`, tabulated to `prec`.
    pub fn compute(range: WeightRange, prec: usize) -> Result<Self> {
        SignCensus::compute_cached(range, prec, None)
    }

    /// As [`SignCensus::compute`], reading and filling `cache` when given.
    pub fn compute_cached(range: WeightRange, prec: usize, cache: Option<&CoefficientCache>) -> Result<Self> {
        let ring = LevelOneRing::new(prec, range.hi);
        let weights: Vec<u32> = range.weights().filter(|&k| k >= 4).collect();
        let per_weight: Vec<Result<Vec<EigenformRecord>>> = weights
            .par_iter()
            .map(|&k| {
                let basis = match cache {
                    Some(c) => c.basis(&ring, k)?,
                    None => ring.cuspform_basis(k)?,
                };
                eigenforms_from_basis(&basis)
            })
            .collect();
        let mut forms = Vec::new();
        for r in per_weight {
            forms.extend(r?);
        }
        Ok(SignCensus { range, prec, forms })
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    /// Forms whose weight lies in `range`.
    pub fn select(&self, range: WeightRange) -> Result<Vec<&EigenformRecord>> {
        if range.lo < self.range.lo || range.hi > self.range.hi {
            return precondition(format!("weights {range} are not all in the census {}", self.range));
        }
        Ok(self.forms.iter().filter(|f| range.contains(f.weight)).collect())
    }

    pub fn rows(&self, sign_bound: u64) -> Vec<CensusRow> {
        self.forms
            .iter()
            .map(|f| CensusRow {
                k: f.weight,
                index: f.index,
                p_f: f.p_f,
                n_f: f.n_f,
                signs: f.prime_signs(sign_bound).into_iter().map(|(_, s)| s).collect(),
            })
            .collect()
    }
}

/// Observed or expected value of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Scalar(f64),
    Table(Vec<f64>),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Scalar(x) => write!(f, "{x:?}"),
            Value::Table(xs) => {
                write!(f, "[")?;
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{x:?}")?;
                }
                write!(f, "]")
            }
        }
    }
}

impl FromStr for Value {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |x: &str| Error::Precondition(format!("bad number {x:?}"));
        let s = s.trim();
        if let Some(inner) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            if inner.trim().is_empty() {
                return Ok(Value::Table(Vec::new()));
            }
            inner
                .split(',')
                .map(|x| x.trim().parse().map_err(|_| bad(x)))
                .collect::<Result<_>>()
                .map(Value::Table)
        } else {
            s.parse().map(Value::Scalar).map_err(|_| bad(s))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// No tolerance was declared.
    Info,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Info => "info",
        })
    }
}

impl FromStr for Verdict {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "pass" => Ok(Verdict::Pass),
            "fail" => Ok(Verdict::Fail),
            "info" => Ok(Verdict::Info),
            other => precondition(format!("unknown verdict {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub id: String,
    pub params: BTreeMap<String, String>,
    pub observed: Value,
    pub expected: Value,
    pub deviation: f64,
    pub tolerance: Option<f64>,
    pub verdict: Verdict,
}

impl ExperimentReport {
    /// The verdict is `pass` exactly when `deviation <= tolerance`.
    pub fn new(
        id: &str,
        params: BTreeMap<String, String>,
        observed: Value,
        expected: Value,
        deviation: f64,
        tolerance: Option<f64>,
    ) -> Self {
        let verdict = match tolerance {
            None => Verdict::Info,
            Some(t) if deviation <= t => Verdict::Pass,
            Some(_) => Verdict::Fail,
        };
        ExperimentReport {
            id: id.to_string(),
            params,
            observed,
            expected,
            deviation,
            tolerance,
            verdict,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Fail
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports always serialise")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Precondition(format!("bad report JSON: {e}")))
    }

    /// Line-oriented form: `key = value`, parameters as `param.<name> = value`.
    pub fn to_text(&self) -> String {
        let mut out = format!("id = {}\n", self.id);
        for (k, v) in &self.params {
            out.push_str(&format!("param.{k} = {v}\n"));
        }
        out.push_str(&format!("observed = {}\n", self.observed));
        out.push_str(&format!("expected = {}\n", self.expected));
        out.push_str(&format!("deviation = {:?}\n", self.deviation));
        if let Some(t) = self.tolerance {
            out.push_str(&format!("tolerance = {t:?}\n"));
        }
        out.push_str(&format!("verdict = {}\n", self.verdict));
        out
    }

    pub fn from_text(s: &str) -> Result<Self> {
        let mut id = None;
        let mut params = BTreeMap::new();
        let (mut observed, mut expected, mut deviation, mut tolerance, mut verdict) =
            (None, None, None, None, None);
        for line in s.lines().filter(|l| !l.trim().is_empty()) {
            let (key, value) = line
                .split_once(" = ")
                .ok_or_else(|| Error::Precondition(format!("bad report line {line:?}")))?;
            let number = |v: &str| {
                v.parse::<f64>()
                    .map_err(|_| Error::Precondition(format!("bad number {v:?}")))
            };
            match key {
                "id" => id = Some(value.to_string()),
                "observed" => observed = Some(value.parse()?),
                "expected" => expected = Some(value.parse()?),
                "deviation" => deviation = Some(number(value)?),
                "tolerance" => tolerance = Some(number(value)?),
                "verdict" => verdict = Some(value.parse()?),
                k => match k.strip_prefix("param.") {
                    Some(name) => {
                        params.insert(name.to_string(), value.to_string());
                    }
                    None => return precondition(format!("unknown report key {k:?}")),
                },
            }
        }
        let missing = |what: &str| Error::Precondition(format!("report lacks {what}"));
        Ok(ExperimentReport {
            id: id.ok_or_else(|| missing("id"))?,
            params,
            observed: observed.ok_or_else(|| missing("observed"))?,
            expected: expected.ok_or_else(|| missing("expected"))?,
            deviation: deviation.ok_or_else(|| missing("deviation"))?,
            tolerance,
            verdict: verdict.ok_or_else(|| missing("verdict"))?,
        })
    }
}

fn params(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn forms_for(census: &SignCensus, weights: WeightRange) -> Result<Vec<&EigenformRecord>> {
    if weights.lo < 12 {
        return precondition(format!("weights must be >= 12, got {weights}"));
    }
    let forms = census.select(weights)?;
    if forms.is_empty() {
        return domain(format!("no eigenforms with weight in {weights}"));
    }
    Ok(forms)
}

fn lambda_at(f: &EigenformRecord, p: u64) -> Result<f64> {
    f.lambda(p).ok_or_else(|| {
        Error::Precondition(format!("lambda({p}) lies beyond the census precision {}", f.prec()))
    })
}

/// Fraction of forms with `lambda_f(p) > 0`; expected `1/2`.
pub fn empirical_sign_fraction(
    census: &SignCensus,
    p: u64,
    weights: WeightRange,
    tolerance: Option<f64>,
) -> Result<ExperimentReport> {
    if !is_prime(p) {
        return domain(format!("{p} is not prime"));
    }
    let forms = forms_for(census, weights)?;
    let mut positive = 0usize;
    for f in &forms {
        if lambda_at(f, p)? > 0.0 {
            positive += 1;
        }
    }
    let fraction = positive as f64 / forms.len() as f64;
    Ok(ExperimentReport::new(
        "sign-fraction",
        params(&[
            ("p", p.to_string()),
            ("weights", weights.to_string()),
            ("forms", forms.len().to_string()),
        ]),
        Value::Scalar(fraction),
        Value::Scalar(0.5),
        (fraction - 0.5).abs(),
        tolerance,
    ))
}

/// Histogram of `theta_f(p)` over `bins` equal subintervals of `[0, pi]`,
/// against the masses `reference` gives them (by default `mu_p`).
pub fn empirical_angle_distribution(
    census: &SignCensus,
    p: u64,
    weights: WeightRange,
    bins: usize,
    reference: Option<MeasureSpec>,
    tolerance: Option<f64>,
) -> Result<ExperimentReport> {
    if bins == 0 {
        return precondition("at least one bin is needed");
    }
    let reference = match reference {
        Some(r) => r,
        None => MeasureSpec::plancherel(p)?,
    };
    if !is_prime(p) {
        return domain(format!("{p} is not prime"));
    }
    let forms = forms_for(census, weights)?;
    let mut counts = vec![0usize; bins];
    for f in &forms {
        let theta = lambda_at(f, p).map(|l| (l / 2.0).clamp(-1.0, 1.0).acos())?;
        let b = ((theta / std::f64::consts::PI * bins as f64) as usize).min(bins - 1);
        counts[b] += 1;
    }
    let total = forms.len() as f64;
    let observed: Vec<f64> = counts.iter().map(|&c| c as f64 / total).collect();
    let expected: Vec<f64> = (0..bins)
        .map(|b| {
            let step = std::f64::consts::PI / bins as f64;
            let hi = if b + 1 == bins { std::f64::consts::PI } else { step * (b + 1) as f64 };
            AngleInterval::new(step * b as f64, hi).map(|i| measure_mass(reference, i))
        })
        .collect::<Result<_>>()?;
    let deviation = observed
        .iter()
        .zip(&expected)
        .map(|(o, e)| (o - e).abs())
        .fold(0.0, f64::max);
    Ok(ExperimentReport::new(
        "angle-distribution",
        params(&[
            ("p", p.to_string()),
            ("weights", weights.to_string()),
            ("bins", bins.to_string()),
            ("reference", reference.to_string()),
            ("forms", forms.len().to_string()),
        ]),
        Value::Table(observed),
        Value::Table(expected),
        deviation,
        tolerance,
    ))
}

/// Which first sign change to average.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FirstNegative {
    /// `p_f`, the least prime with `lambda_f(p) < 0`.
    Prime,
    /// `n_f`, the least integer with `lambda_f(n) < 0`.
    Integer,
}

impl fmt::Display for FirstNegative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FirstNegative::Prime => "p_f",
            FirstNegative::Integer => "n_f",
        })
    }
}

impl FromStr for FirstNegative {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "p_f" | "pf" | "prime" => Ok(FirstNegative::Prime),
            "n_f" | "nf" | "integer" => Ok(FirstNegative::Integer),
            other => precondition(format!("unknown first-negative kind {other:?}")),
        }
    }
}

/// Mean of `p_f` or `n_f` over the forms, against the limiting average.
///
/// Convergence in the weight is slow, so the tolerance is a sanity band.
/// For `n_f` the limit under both measure assignments is recorded; the
/// target-prime one is the expected value.
pub fn empirical_average(
    census: &SignCensus,
    kind: FirstNegative,
    weights: WeightRange,
    tolerance: Option<f64>,
) -> Result<ExperimentReport> {
    let forms = census.select(weights)?;
    if forms.is_empty() {
        return domain(format!("no eigenforms with weight in {weights}"));
    }
    let mut sum = 0u64;
    for f in &forms {
        let v = match kind {
            FirstNegative::Prime => f.p_f,
            FirstNegative::Integer => f.n_f,
        };
        sum += v.ok_or_else(|| Error::Numerical {
            message: format!(
                "weight {} form {} has no negative eigenvalue up to {}",
                f.weight,
                f.index,
                f.prec()
            ),
            best_estimate: f.prec() as f64,
        })?;
    }
    let mean = sum as f64 / forms.len() as f64;
    let mut p = params(&[
        ("kind", kind.to_string()),
        ("weights", weights.to_string()),
        ("forms", forms.len().to_string()),
    ]);
    let expected = match kind {
        FirstNegative::Prime => average_pf(1e-12)?.value,
        FirstNegative::Integer => {
            let target = average_nf(1e-12, MeasureAssignment::TargetPrime)?.value;
            let product = average_nf(1e-12, MeasureAssignment::ConstrainedPrime)?.value;
            p.insert("limit.target-prime".into(), format!("{target:?}"));
            p.insert("limit.constrained-prime".into(), format!("{product:?}"));
            target
        }
    };
    Ok(ExperimentReport::new(
        match kind {
            FirstNegative::Prime => "average-pf",
            FirstNegative::Integer => "average-nf",
        },
        p,
        Value::Scalar(mean),
        Value::Scalar(expected),
        (mean - expected).abs(),
        tolerance,
    ))
}

/// Number of forms with `lambda_f(p) > 0` for every prime `p <= bound`,
/// against `total / 2^pi(bound)`. Deviation is relative to the total.
pub fn positive_pattern_count(
    census: &SignCensus,
    bound: u64,
    weights: WeightRange,
    tolerance: Option<f64>,
) -> Result<ExperimentReport> {
    if bound < 2 {
        return precondition("prime bound must be >= 2");
    }
    let forms = forms_for(census, weights)?;
    let primes = crate::arith::primes_up_to(bound);
    let mut count = 0usize;
    for f in &forms {
        let mut all = true;
        for &p in &primes {
            if lambda_at(f, p)? <= 0.0 {
                all = false;
                break;
            }
        }
        if all {
            count += 1;
        }
    }
    let total = forms.len() as f64;
    let expected = total / 2f64.powi(prime_pi(bound) as i32);
    Ok(ExperimentReport::new(
        "positive-patterns",
        params(&[
            ("bound", bound.to_string()),
            ("weights", weights.to_string()),
            ("forms", forms.len().to_string()),
        ]),
        Value::Scalar(count as f64),
        Value::Scalar(expected),
        (count as f64 - expected).abs() / total,
        tolerance,
    ))
}

/// `Tr(T_n) / (n^((k-1)/2) dim S_k)` for every weight in the range with
/// nonzero dimension, against `n^(-1/2)` for square `n` and `0` otherwise.
/// The deviation is that of the last weight.
pub fn trace_limit_experiment(n: u64, weights: WeightRange, tolerance: Option<f64>) -> Result<ExperimentReport> {
    if n == 0 {
        return precondition("n must be >= 1");
    }
    let ks: Vec<u32> = weights.weights().filter(|&k| cusp_dimension(k) > 0).collect();
    if ks.is_empty() {
        return domain(format!("no cusp forms with weight in {weights}"));
    }
    let max_dim = ks.iter().map(|&k| cusp_dimension(k)).max().unwrap_or(1);
    let prec = (n as usize * max_dim).max(max_dim + 2);
    let ring = LevelOneRing::new(prec, weights.hi);
    let values: Vec<Result<f64>> = ks
        .par_iter()
        .map(|&k| {
            let basis = ring.cuspform_basis(k)?;
            let t = hecke_matrix_on(&basis, n)?.trace();
            Ok(normalize_trace(&t, n, k) / basis.dim() as f64)
        })
        .collect();
    let values: Vec<f64> = values.into_iter().collect::<Result<_>>()?;
    let root = crate::arith::integer_sqrt(n);
    let limit = if root * root == n { 1.0 / (n as f64).sqrt() } else { 0.0 };
    let last = *values.last().expect("nonempty");
    Ok(ExperimentReport::new(
        "trace-limit",
        params(&[
            ("n", n.to_string()),
            ("weights", weights.to_string()),
            ("last_weight", ks.last().unwrap().to_string()),
        ]),
        Value::Table(values),
        Value::Scalar(limit),
        (last - limit).abs(),
        tolerance,
    ))
}

/// Census scan of the first-sign-change structure: every `n_f` a prime
/// power, `n_f <= p_f`, both agreeing with a rescan of the table. The
/// deviation counts violations; `observed` is `[forms, forms with n_f < p_f]`.
pub fn first_sign_structure(census: &SignCensus, weights: WeightRange) -> Result<ExperimentReport> {
    let forms = census.select(weights)?;
    let mut violations = 0usize;
    let mut strict = 0usize;
    for f in &forms {
        let lambdas = f.lambdas();
        let rescan_n = (2..=lambdas.len()).find(|&n| lambdas[n - 1] < 0.0).map(|n| n as u64);
        let rescan_p = (2..=lambdas.len())
            .find(|&n| lambdas[n - 1] < 0.0 && is_prime(n as u64))
            .map(|n| n as u64);
        let ok = rescan_n == f.n_f
            && rescan_p == f.p_f
            && f.n_f.is_none_or(|n| PrimePower::from_value(n).is_some())
            && match (f.n_f, f.p_f) {
                (Some(n), Some(p)) => n <= p,
                (None, Some(_)) => false,
                _ => true,
            };
        if !ok {
            violations += 1;
        }
        if let (Some(n), Some(p)) = (f.n_f, f.p_f) {
            if n < p {
                strict += 1;
            }
        }
    }
    Ok(ExperimentReport::new(
        "sign-structure",
        params(&[("weights", weights.to_string())]),
        Value::Table(vec![forms.len() as f64, strict as f64]),
        Value::Table(vec![forms.len() as f64]),
        violations as f64,
        Some(0.0),
    ))
}
