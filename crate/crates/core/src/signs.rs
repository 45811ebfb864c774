//! Chebyshev polynomials of the second kind and the angle intervals that
//! encode "first negative Hecke eigenvalue at `q^n`".
//!
//! If `lambda_f(p^j) >= 0` for `j = 1..a` then `theta_f(p)` lies in
//! `[0, pi/(a+1)]`; if `q^n` is the first power of `q` with a negative
//! eigenvalue then `theta_f(q)` lies in `[pi/(n+1), pi/n]`. The event
//! `n_f = q^n` is the intersection of one such constraint per prime `<= q^n`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::arith::{primes_up_to, PrimePower};
use crate::error::{domain, precondition, Result};
use crate::measures::AngleInterval;

/// `U_n(theta) = sin((n+1) theta) / sin(theta)`, i.e. `X_n` evaluated on the
/// angle, with its limits `n + 1` at `0` and `(-1)^n (n + 1)` at `pi`.
pub fn chebyshev_u(n: u32, theta: f64) -> f64 {
    let s = theta.sin();
    if s.abs() < 1e-4 {
        return chebyshev_u_recurrence(n, theta);
    }
    ((n as f64 + 1.0) * theta).sin() / s
}

/// `U_n` by the three-term recurrence in `2 cos theta`.
pub fn chebyshev_u_recurrence(n: u32, theta: f64) -> f64 {
    let x = 2.0 * theta.cos();
    let (mut prev, mut cur) = (0.0, 1.0);
    for _ in 0..n {
        let next = x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Largest `a` with `p^a < m`, by exact integer comparison.
pub fn a_exponent(m: PrimePower, p: u64) -> Result<u32> {
    if p == m.prime() {
        return domain(format!("a_exponent needs p != q, got p = q = {p}"));
    }
    if p < 2 {
        return precondition(format!("a_exponent needs a prime p, got {p}"));
    }
    let mut a = 0;
    let mut power: u64 = 1;
    loop {
        match power.checked_mul(p) {
            Some(next) if next < m.value() => {
                power = next;
                a += 1;
            }
            _ => return Ok(a),
        }
    }
}

/// `B_n^* = [pi/(n+1), pi/n]`: `q^n` is the first power of `q` with a
/// negative eigenvalue.
pub fn first_negative_interval(n: u32) -> Result<AngleInterval> {
    if n == 0 {
        return precondition("first_negative_interval needs n >= 1");
    }
    let n = n as f64;
    AngleInterval::new(PI / (n + 1.0), (PI / n).min(PI))
}

/// `A_a^* = [0, pi/(a+1)]`: eigenvalues at `p, p^2, ..., p^a` all non-negative.
pub fn nonnegative_interval(a: u32) -> Result<AngleInterval> {
    if a == 0 {
        return precondition("nonnegative_interval needs a >= 1");
    }
    AngleInterval::new(0.0, PI / (a as f64 + 1.0))
}

/// Whether `lambda(p^j) = U_j(theta) >= 0`, i.e. membership of `theta` in `A_j`.
pub fn in_a_set(j: u32, theta: f64) -> bool {
    // A_j is the union of [2i pi/(j+1), (2i+1) pi/(j+1)] intersected with [0, pi].
    let x = theta * (j as f64 + 1.0) / PI;
    let cell = x.floor() as i64;
    cell % 2 == 0 || x == x.floor()
}

/// One constraint per prime.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub prime: u64,
    pub interval: AngleInterval,
    /// `a_p(q^n)` for `p != q`; `None` marks the first-negative interval at `q`.
    pub exponent: Option<u32>,
}

/// The constraint intervals that together describe `n_f = m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintSystem {
    pub target: PrimePower,
    pub constraints: Vec<Constraint>,
}

impl ConstraintSystem {
    /// Whether an angle vector (indexed like `constraints`) satisfies every constraint.
    pub fn admits(&self, angles: &[f64]) -> bool {
        angles.len() == self.constraints.len()
            && self
                .constraints
                .iter()
                .zip(angles)
                .all(|(c, &t)| c.interval.contains(t))
    }
}

/// Build the constraint system for `n_f = q^n`, primes in increasing order.
pub fn constraint_system(m: PrimePower) -> Result<ConstraintSystem> {
    let constraints = primes_up_to(m.value())
        .into_iter()
        .map(|p| {
            if p == m.prime() {
                Ok(Constraint {
                    prime: p,
                    interval: first_negative_interval(m.exponent())?,
                    exponent: None,
                })
            } else {
                let a = a_exponent(m, p)?;
                Ok(Constraint {
                    prime: p,
                    interval: nonnegative_interval(a)?,
                    exponent: Some(a),
                })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConstraintSystem {
        target: m,
        constraints,
    })
}

/// The two degree-2 amplifiers, as coefficients `(alpha_0, alpha_1, alpha_2)` on
/// `(X_0, X_1, X_2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AmplifierSign {
    /// `F = -3/4 X_0 + 1/2 X_1 + 1/4 X_2`, lying below `sgn(2 cos theta)`.
    Plus,
    /// `F~(theta) = F(pi - theta)`, lying below `-sgn(2 cos theta)`.
    Minus,
}

impl AmplifierSign {
    pub fn from_sign(sign: i32) -> Result<Self> {
        match sign {
            1 => Ok(AmplifierSign::Plus),
            -1 => Ok(AmplifierSign::Minus),
            s => precondition(format!("amplifier sign must be +1 or -1, got {s}")),
        }
    }
}

/// Coefficients of the amplifier. `X_i(pi - theta) = (-1)^i X_i(theta)`, so the
/// reflected polynomial flips the sign of the `X_1` coefficient.
pub fn amplifier_poly(sign: AmplifierSign) -> [f64; 3] {
    match sign {
        AmplifierSign::Plus => [-0.75, 0.5, 0.25],
        AmplifierSign::Minus => [-0.75, -0.5, 0.25],
    }
}

/// `sum_i alpha_i X_i(theta)`.
pub fn amplifier_value(sign: AmplifierSign, theta: f64) -> f64 {
    amplifier_poly(sign)
        .iter()
        .enumerate()
        .map(|(i, a)| a * chebyshev_u(i as u32, theta))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(v: u64) -> PrimePower {
        PrimePower::from_value(v).unwrap()
    }

    #[test]
    fn chebyshev_values() {
        assert!((chebyshev_u(2, PI / 2.0) + 1.0).abs() < 1e-15);
        for t in [0.0, 0.3, 1.7, PI] {
            assert_eq!(chebyshev_u(0, t), 1.0);
        }
        assert!((chebyshev_u(5, 0.7) - chebyshev_u_recurrence(5, 0.7)).abs() < 1e-12);
        assert_eq!(chebyshev_u(4, 0.0), 5.0);
        assert_eq!(chebyshev_u(3, PI), -4.0);
        assert_eq!(chebyshev_u(4, PI), 5.0);
    }

    #[test]
    fn exponents() {
        assert_eq!(a_exponent(pp(8), 3).unwrap(), 1);
        assert_eq!(a_exponent(pp(9), 2).unwrap(), 3);
        assert_eq!(a_exponent(pp(4), 3).unwrap(), 1);
        assert!(a_exponent(pp(16), 2).is_err());
        assert_eq!(a_exponent(pp(27), 5).unwrap(), 2);
    }

    #[test]
    fn intervals() {
        let b1 = first_negative_interval(1).unwrap();
        assert_eq!((b1.lo(), b1.hi()), (PI / 2.0, PI));
        let b2 = first_negative_interval(2).unwrap();
        assert_eq!((b2.lo(), b2.hi()), (PI / 3.0, PI / 2.0));
        let b5 = first_negative_interval(5).unwrap();
        assert_eq!((b5.lo(), b5.hi()), (PI / 6.0, PI / 5.0));
        assert_eq!(nonnegative_interval(1).unwrap().hi(), PI / 2.0);
        assert_eq!(nonnegative_interval(2).unwrap().hi(), PI / 3.0);
        assert_eq!(nonnegative_interval(10).unwrap().hi(), PI / 11.0);
        assert!(first_negative_interval(0).is_err());
        assert!(nonnegative_interval(0).is_err());
    }

    #[test]
    fn small_constraint_systems() {
        let s = constraint_system(pp(2)).unwrap();
        assert_eq!(s.constraints.len(), 1);
        assert_eq!(s.constraints[0].prime, 2);
        assert_eq!(s.constraints[0].interval, AngleInterval::new(PI / 2.0, PI).unwrap());

        let s = constraint_system(pp(3)).unwrap();
        let got: Vec<_> = s.constraints.iter().map(|c| (c.prime, c.interval)).collect();
        assert_eq!(
            got,
            vec![
                (2, AngleInterval::new(0.0, PI / 2.0).unwrap()),
                (3, AngleInterval::new(PI / 2.0, PI).unwrap()),
            ]
        );

        let s = constraint_system(pp(4)).unwrap();
        let got: Vec<_> = s.constraints.iter().map(|c| (c.prime, c.interval)).collect();
        assert_eq!(
            got,
            vec![
                (2, AngleInterval::new(PI / 3.0, PI / 2.0).unwrap()),
                (3, AngleInterval::new(0.0, PI / 2.0).unwrap()),
            ]
        );
    }

    #[test]
    fn a_sets_match_sign_of_u() {
        for j in 1..9 {
            for i in 1..400 {
                let t = PI * (i as f64 + 0.37) / 401.0;
                assert_eq!(in_a_set(j, t), chebyshev_u(j, t) >= 0.0, "j={j} t={t}");
            }
        }
    }

    #[test]
    fn amplifier_values() {
        let f = |t| amplifier_value(AmplifierSign::Plus, t);
        let g = |t| amplifier_value(AmplifierSign::Minus, t);
        assert!((f(0.0) - 1.0).abs() < 1e-15);
        assert!((f(PI / 2.0) + 1.0).abs() < 1e-15);
        assert!((g(PI) - 1.0).abs() < 1e-15);
        for i in 0..=100 {
            let t = PI * i as f64 / 100.0;
            assert!((g(t) - f(PI - t)).abs() < 1e-12);
        }
        assert!(AmplifierSign::from_sign(0).is_err());
    }
}
