use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{domain, Result};

/// Exact integer q-expansion `a(0) + a(1) q + ... + a(prec) q^prec`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QExpansion {
    weight: u32,
    coefficients: Vec<BigInt>,
}

impl QExpansion {
    pub fn new(weight: u32, coefficients: Vec<BigInt>) -> Self {
        assert!(!coefficients.is_empty(), "a q-expansion keeps at least a(0)");
        QExpansion {
            weight,
            coefficients,
        }
    }

    pub fn one(prec: usize) -> Self {
        let mut c = vec![BigInt::zero(); prec + 1];
        c[0] = BigInt::one();
        QExpansion::new(0, c)
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn prec(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn coefficient(&self, n: usize) -> &BigInt {
        &self.coefficients[n]
    }

    pub fn into_coefficients(self) -> Vec<BigInt> {
        self.coefficients
    }

    /// Truncated product; weights add.
    pub fn mul(&self, other: &QExpansion) -> QExpansion {
        let prec = self.prec().min(other.prec());
        let a = &self.coefficients;
        let b = &other.coefficients;
        let a_start = a.iter().position(|x| !x.is_zero()).unwrap_or(prec + 1);
        let b_start = b.iter().position(|x| !x.is_zero()).unwrap_or(prec + 1);
        let mut out = vec![BigInt::zero(); prec + 1];
        for (n, slot) in out.iter_mut().enumerate().skip(a_start + b_start) {
            let mut acc = BigInt::zero();
            for i in a_start..=(n - b_start) {
                let x = &a[i];
                if !x.is_zero() {
                    acc += x * &b[n - i];
                }
            }
            *slot = acc;
        }
        QExpansion::new(self.weight + other.weight, out)
    }

    pub fn pow(&self, e: u32) -> QExpansion {
        let mut out = QExpansion::one(self.prec());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// `self - factor * other`, in place, over the common precision.
    pub fn sub_scaled(&mut self, factor: &BigInt, other: &QExpansion) {
        for (x, y) in self.coefficients.iter_mut().zip(&other.coefficients) {
            if !y.is_zero() {
                *x -= factor * y;
            }
        }
    }

    pub fn truncate(&self, prec: usize) -> QExpansion {
        QExpansion::new(self.weight, self.coefficients[..=prec.min(self.prec())].to_vec())
    }
}

fn sigma_table(prec: usize, r: u32) -> Vec<u128> {
    let mut s = vec![0u128; prec + 1];
    for d in 1..=prec {
        let dr = (d as u128).pow(r);
        for m in (d..=prec).step_by(d) {
            s[m] += dr;
        }
    }
    s
}

/// `E_4 = 1 + 240 sum sigma_3(n) q^n` or `E_6 = 1 - 504 sum sigma_5(n) q^n`.
pub fn eisenstein(weight: u32, prec: usize) -> Result<QExpansion> {
    let (factor, r): (i64, u32) = match weight {
        4 => (240, 3),
        6 => (-504, 5),
        w => return domain(format!("eisenstein supports weights 4 and 6, got {w}")),
    };
    let sigma = sigma_table(prec, r);
    let coefficients = (0..=prec)
        .map(|n| {
            if n == 0 {
                BigInt::one()
            } else {
                BigInt::from(factor) * BigInt::from(sigma[n])
            }
        })
        .collect();
    Ok(QExpansion::new(weight, coefficients))
}

/// `Delta = (E_4^3 - E_6^2) / 1728 = q - 24 q^2 + 252 q^3 - ...`.
pub fn delta(prec: usize) -> QExpansion {
    let e4 = eisenstein(4, prec).expect("weight 4");
    let e6 = eisenstein(6, prec).expect("weight 6");
    let e4c = e4.mul(&e4).mul(&e4);
    let e6s = e6.mul(&e6);
    let k = BigInt::from(1728);
    let coefficients = e4c
        .coefficients
        .iter()
        .zip(&e6s.coefficients)
        .map(|(a, b)| {
            let d = a - b;
            debug_assert!((&d % &k).is_zero());
            d / &k
        })
        .collect();
    QExpansion::new(12, coefficients)
}
