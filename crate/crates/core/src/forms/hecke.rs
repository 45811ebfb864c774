use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::basis::{cuspform_basis, CuspBasis};
use super::numeric::big_ratio_f64;
use crate::error::{precondition, Result};

/// Matrix of `T_n` on an echelon basis of `S_k(1)`, acting on coordinate
/// columns: `T_n b_j = sum_i entries[i][j] b_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeckeMatrix {
    n: u64,
    weight: u32,
    entries: Vec<Vec<BigInt>>,
}

impl HeckeMatrix {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<BigInt>] {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i][j]
    }

    pub fn trace(&self) -> BigInt {
        (0..self.dim()).map(|i| &self.entries[i][i]).sum()
    }

    /// Exact entries of the product `self * other`.
    pub fn compose(&self, other: &HeckeMatrix) -> Vec<Vec<BigInt>> {
        let d = self.dim();
        let mut out = vec![vec![BigInt::zero(); d]; d];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                for l in 0..d {
                    *slot += &self.entries[i][l] * &other.entries[l][j];
                }
            }
        }
        out
    }

    /// Matrix of `T_n / n^((k-1)/2)` in the coordinates `x_i = a(i) / i^((k-1)/2)`.
    pub fn normalized(&self) -> Vec<Vec<f64>> {
        let w = (self.weight as f64 - 1.0) / 2.0;
        let d = self.dim();
        let ln = (self.n as f64).log2();
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let log2_scale = w * (((i + 1) as f64).log2() + ln - ((j + 1) as f64).log2());
                        big_ratio_f64(&self.entries[i][j], log2_scale)
                    })
                    .collect()
            })
            .collect()
    }
}

/// Precision needed to read `T_n` off a basis of dimension `dim`.
pub fn required_prec(n: u64, dim: usize) -> usize {
    n as usize * dim.max(1)
}

/// `T_n` on `basis`, from `(T_n f)(m) = sum_{d | (m, n)} d^(k-1) a(mn / d^2)`.
pub fn hecke_matrix_on(basis: &CuspBasis, n: u64) -> Result<HeckeMatrix> {
    if n == 0 {
        return precondition("Hecke operator index must be >= 1");
    }
    let dim = basis.dim();
    let need = required_prec(n, dim);
    if basis.prec() < need {
        return precondition(format!(
            "T_{n} on weight {} needs precision >= {need}, basis has {}",
            basis.weight(),
            basis.prec()
        ));
    }
    let k1 = basis.weight() - 1;
    let mut entries = vec![vec![BigInt::zero(); dim]; dim];
    for m in 1..=dim as u64 {
        let g = m.gcd(&n);
        let divisors: Vec<(u64, BigInt)> = (1..=g)
            .filter(|d| g % d == 0)
            .map(|d| (d, BigInt::from(d).pow(k1)))
            .collect();
        for (j, form) in basis.forms().iter().enumerate() {
            let mut acc = BigInt::zero();
            for (d, dk) in &divisors {
                let idx = (m * n / (d * d)) as usize;
                let c = form.coefficient(idx);
                if !c.is_zero() {
                    acc += dk * c;
                }
            }
            entries[m as usize - 1][j] = acc;
        }
    }
    Ok(HeckeMatrix {
        n,
        weight: basis.weight(),
        entries,
    })
}

/// `T_n` on `S_k(1)`; builds the echelon basis at precision `prec`.
pub fn hecke_matrix(n: u64, k: u32, prec: usize) -> Result<HeckeMatrix> {
    let basis = cuspform_basis(k, prec)?;
    hecke_matrix_on(&basis, n)
}

/// Exact trace of `T_n` on `S_k(1)`.
pub fn trace_tn(n: u64, k: u32, prec: usize) -> Result<BigInt> {
    Ok(hecke_matrix(n, k, prec)?.trace())
}

/// `Tr(T_n) / n^((k-1)/2)`.
pub fn trace_tn_star(n: u64, k: u32, prec: usize) -> Result<f64> {
    let tr = trace_tn(n, k, prec)?;
    Ok(normalize_trace(&tr, n, k))
}

pub fn normalize_trace(trace: &BigInt, n: u64, k: u32) -> f64 {
    big_ratio_f64(trace, (k as f64 - 1.0) / 2.0 * (n as f64).log2())
}

/// Exact identity matrix of size `dim`.
pub fn identity(dim: usize) -> Vec<Vec<BigInt>> {
    (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_twelve_matrices() {
        let t2 = hecke_matrix(2, 12, 40).unwrap();
        assert_eq!(t2.entries(), &[vec![BigInt::from(-24)]]);
        let t6 = hecke_matrix(6, 12, 80).unwrap();
        let t3 = hecke_matrix(3, 12, 80).unwrap();
        assert_eq!(t6.entry(0, 0), &BigInt::from(-24 * 252));
        let t2 = hecke_matrix(2, 12, 80).unwrap();
        assert_eq!(t2.compose(&t3), t6.entries().to_vec());
    }

    #[test]
    fn identity_operator() {
        for k in [12, 24, 40, 60] {
            let t1 = hecke_matrix(1, k, 20).unwrap();
            assert_eq!(t1.entries().to_vec(), identity(t1.dim()));
            assert_eq!(t1.trace(), BigInt::from(t1.dim()));
        }
    }

    #[test]
    fn traces() {
        assert_eq!(trace_tn(2, 12, 20).unwrap(), BigInt::from(-24));
        assert_eq!(trace_tn(1, 36, 20).unwrap(), BigInt::from(3));
        // tau(4) = -1472
        assert!((trace_tn_star(4, 12, 20).unwrap() - (-1472.0 / 4f64.powf(5.5))).abs() < 1e-12);
    }

    #[test]
    fn precision_guard() {
        let b = cuspform_basis(36, 10).unwrap();
        assert!(hecke_matrix_on(&b, 4).is_err());
        assert!(hecke_matrix_on(&b, 3).is_ok());
        assert!(hecke_matrix_on(&b, 0).is_err());
    }

    #[test]
    fn normalized_weight_twelve() {
        let t2 = hecke_matrix(2, 12, 10).unwrap();
        let s = t2.normalized();
        assert!((s[0][0] - (-24.0 / 2f64.powf(5.5))).abs() < 1e-14);
    }
}
