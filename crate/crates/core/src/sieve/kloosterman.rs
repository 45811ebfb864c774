use std::f64::consts::TAU;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KloostermanQuery {
    pub m: u64,
    pub n: u64,
    pub c: u64,
}

impl KloostermanQuery {
    pub fn new(m: u64, n: u64, c: u64) -> Result<Self> {
        if c == 0 {
            return precondition("Kloosterman modulus must be >= 1");
        }
        Ok(KloostermanQuery { m, n, c })
    }
}

/// Inverse of `x` modulo `c`, for `gcd(x, c) = 1`.
pub fn mod_inverse(x: u64, c: u64) -> Option<u64> {
    if c == 1 {
        return Some(0);
    }
    let e = (x as i128).extended_gcd(&(c as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(c as i128) as u64)
}

/// Units modulo `c` with their inverses, and the table of `e(r / c)`.
///
/// Summing `S(m, n; c)` for many `(m, n)` at one modulus reuses both.
#[derive(Debug, Clone)]
pub struct KloostermanTable {
    c: u64,
    units: Vec<(u64, u64)>,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl KloostermanTable {
    pub fn new(c: u64) -> Result<Self> {
        if c == 0 {
            return precondition("Kloosterman modulus must be >= 1");
        }
        let units = (0..c)
            .filter(|x| x.gcd(&c) == 1)
            .map(|x| (x, mod_inverse(x, c).expect("unit")))
            .collect();
        let (sin, cos) = (0..c).map(|r| (TAU * r as f64 / c as f64).sin_cos()).unzip();
        Ok(KloostermanTable { c, units, cos, sin })
    }

    pub fn modulus(&self) -> u64 {
        self.c
    }

    /// `S(m, n; c)`. The phases are reduced exactly before the lookup.
    pub fn sum(&self, m: u64, n: u64) -> f64 {
        let c = self.c as u128;
        let (m, n) = (m as u128 % c, n as u128 % c);
        let mut re = 0.0;
        let mut im = 0.0;
        for &(x, inv) in &self.units {
            let r = ((m * x as u128 + n * inv as u128) % c) as usize;
            re += self.cos[r];
            im += self.sin[r];
        }
        assert!(
            im.abs() < 1e-10 * (1.0 + self.c as f64 / 1e4),
            "S({m}, {n}; {c}) has imaginary part {im}"
        );
        re
    }
}

/// `S(m, n; c) = sum_{x mod c, (x, c) = 1} e((m x + n x^-1) / c)`.
pub fn kloosterman(q: KloostermanQuery) -> f64 {
    KloostermanTable::new(q.c).expect("query modulus >= 1").sum(q.m, q.n)
}

/// Convenience wrapper over [`kloosterman`].
pub fn kloosterman_sum(m: u64, n: u64, c: u64) -> Result<f64> {
    Ok(kloosterman(KloostermanQuery::new(m, n, c)?))
}

/// Weil's bound `gcd(m, n, c)^(1/2) c^(1/2) tau(c)`.
pub fn weil_bound(m: u64, n: u64, c: u64) -> f64 {
    let g = crate::arith::gcd3(m, n, c) as f64;
    g.sqrt() * (c as f64).sqrt() * crate::arith::divisor_count(c) as f64
}
