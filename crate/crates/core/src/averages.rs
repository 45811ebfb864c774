//! Limiting averages of `p_f` and `n_f`, summed with rigorous tail bounds.
//!
//! * `avg p_f = sum_i p_i / 2^i`.
//! * `avg n_f = sum_{q^n} q^n * prod_{p <= q^n} mu(I_{q^n}(p))`, with the
//!   constraint intervals of [`crate::signs::constraint_system`].
//!
//! Which measure weighs the factor at `p` is a [`MeasureAssignment`]: the
//! product of local Plancherel measures uses `mu_p` at each `p`, while the
//! target-prime convention uses `mu_q` of the target prime for every factor.
//! The two share the interval system and the tail bound; they differ from
//! `m = 5` onwards.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{prime_powers_up_to, primes_up_to, PrimePower};
use crate::error::{precondition, Result};
use crate::measures::{measure_mass, MeasureSpec};
use crate::signs::constraint_system;

/// A truncated series together with a bound on everything left out.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesResult {
    pub value: f64,
    pub terms_used: usize,
    pub tail_bound: f64,
}

/// Measure used for the factor attached to each constrained prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureAssignment {
    /// Every factor of the `q^n` term is measured with `mu_q`. This is the
    /// convention behind the tabulated constant `2.9423403000531483`.
    #[default]
    TargetPrime,
    /// Factor at `p_j` measured with `mu_{p_j}`: the product measure under which
    /// the angles at distinct primes are jointly equidistributed.
    ConstrainedPrime,
}

impl std::fmt::Display for MeasureAssignment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MeasureAssignment::TargetPrime => "target-prime",
            MeasureAssignment::ConstrainedPrime => "constrained-prime",
        })
    }
}

impl std::str::FromStr for MeasureAssignment {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "target-prime" | "target" => Ok(MeasureAssignment::TargetPrime),
            "constrained-prime" | "product" => Ok(MeasureAssignment::ConstrainedPrime),
            other => precondition(format!("unknown measure assignment {other:?}")),
        }
    }
}

/// Upper bound for the `i`-th prime: exact below 6, `i (ln i + ln ln i)` from 6 on.
fn prime_upper_bound(i: usize) -> f64 {
    const SMALL: [f64; 5] = [2.0, 3.0, 5.0, 7.0, 11.0];
    if i <= 5 {
        SMALL[i - 1]
    } else {
        let x = i as f64;
        x * (x.ln() + x.ln().ln())
    }
}

/// Rigorous bound on `sum_{i > terms} p_i / 2^i`.
pub fn pf_tail_bound(terms: usize) -> f64 {
    // Beyond J >= 64 use p_i <= i^2 and sum_{i > J} i^2 / 2^i = 2^-J (J^2 + 4J + 6).
    let j = terms.max(64);
    let explicit: f64 = (terms + 1..=j)
        .map(|i| prime_upper_bound(i) * 0.5f64.powi(i as i32))
        .sum();
    let jf = j as f64;
    explicit + 0.5f64.powi(j as i32) * (jf * jf + 4.0 * jf + 6.0)
}

/// `sum_{i <= terms} p_i / 2^i`.
pub fn pf_partial_sum(terms: usize) -> f64 {
    nth_primes(terms)
        .iter()
        .enumerate()
        .map(|(i, &p)| p as f64 * 0.5f64.powi(i as i32 + 1))
        .sum()
}

fn nth_primes(count: usize) -> Vec<u64> {
    let mut bound = 16u64;
    loop {
        let primes = primes_up_to(bound);
        if primes.len() >= count {
            return primes[..count].to_vec();
        }
        bound *= 2;
    }
}

/// The limiting average of `p_f`, summed until the tail bound drops below `tol`.
pub fn average_pf(tol: f64) -> Result<SeriesResult> {
    if !(1e-15..=1e-3).contains(&tol) {
        return precondition(format!("average_pf tolerance must lie in [1e-15, 1e-3], got {tol}"));
    }
    let terms = (1..).find(|&i| pf_tail_bound(i) < tol).expect("tail bound tends to zero");
    Ok(SeriesResult {
        value: pf_partial_sum(terms),
        terms_used: terms,
        tail_bound: pf_tail_bound(terms),
    })
}

/// The `m`-th term `m * prod mu(I_m(p))` of the `n_f` average.
pub fn nf_term(m: PrimePower, assignment: MeasureAssignment) -> Result<f64> {
    let system = constraint_system(m)?;
    let mut product = 1.0;
    for c in &system.constraints {
        let measure = match assignment {
            MeasureAssignment::TargetPrime => MeasureSpec::Plancherel { p: m.prime() },
            MeasureAssignment::ConstrainedPrime => MeasureSpec::Plancherel { p: c.prime },
        };
        product *= measure_mass(measure, c.interval);
    }
    Ok(m.value() as f64 * product)
}

/// Per-term bound `m * 2^-(pi(m) - 1)`: every factor except the one at `q`
/// is the mass of a subinterval of `[0, pi/2]`, hence at most `1/2`.
pub fn nf_term_bound(m: u64, prime_count: usize) -> f64 {
    m as f64 * 0.5f64.powi(prime_count as i32 - 1)
}

const NF_EXPLICIT_LIMIT: u64 = 10_000;

/// Bound on the contribution of all prime powers `> m_stop` (`m_stop < 10^4`).
///
/// Integers `m <= 10^4` use the exact prime count. Beyond that
/// `pi(m) - 1 >= sqrt(m)` (from `pi(m) >= m / ln m`), and
/// `sum_{m > X} m 2^-sqrt(m) <= int_{sqrt X}^inf 2 u^3 2^-u du` in closed form.
pub fn nf_tail_bound(m_stop: u64) -> f64 {
    let primes = primes_up_to(NF_EXPLICIT_LIMIT);
    nf_tail_bound_with(m_stop, &primes)
}

fn nf_tail_bound_with(m_stop: u64, primes: &[u64]) -> f64 {
    let explicit: f64 = (m_stop + 1..=NF_EXPLICIT_LIMIT)
        .map(|m| {
            let count = primes.partition_point(|&p| p <= m);
            nf_term_bound(m, count)
        })
        .sum();
    let a = std::f64::consts::LN_2;
    let u = (NF_EXPLICIT_LIMIT as f64).sqrt();
    let closure =
        2.0 * (-a * u).exp() * (u.powi(3) / a + 3.0 * u * u / a.powi(2) + 6.0 * u / a.powi(3) + 6.0 / a.powi(4));
    explicit + closure
}

/// The limiting average of `n_f` under the given measure assignment.
pub fn average_nf(tol: f64, assignment: MeasureAssignment) -> Result<SeriesResult> {
    if !(1e-13..=1e-3).contains(&tol) {
        return precondition(format!("average_nf tolerance must lie in [1e-13, 1e-3], got {tol}"));
    }
    let primes = primes_up_to(NF_EXPLICIT_LIMIT);
    let candidates = prime_powers_up_to(NF_EXPLICIT_LIMIT - 1);
    let stop = candidates
        .iter()
        .position(|m| nf_tail_bound_with(m.value(), &primes) < tol)
        .ok_or_else(|| crate::Error::Precondition(format!("tolerance {tol} unreachable")))?;
    let included = &candidates[..=stop];
    let terms = included
        .par_iter()
        .map(|&m| nf_term(m, assignment))
        .collect::<Result<Vec<f64>>>()?;
    Ok(SeriesResult {
        value: terms.iter().sum(),
        terms_used: included.len(),
        tail_bound: nf_tail_bound_with(included[stop].value(), &primes),
    })
}
