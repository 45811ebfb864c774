//! Numerical embeddings of the Hecke eigenforms of `S_k(1)`.
//!
//! Everything up to the matrix of `T_2` is exact. The only floating-point
//! step is the diagonalisation of the normalised `T_2`, in the coordinates
//! `x_i = a(i) / i^((k-1)/2)` where an eigenform with `lambda(1) = 1` has
//! coordinates `x_i = lambda_f(i)`. Its remaining eigenvalues are read off
//! the echelon basis, `lambda_f(n) = sum_i lambda_f(i) b_i(n) (i/n)^((k-1)/2)`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::basis::{cuspform_basis, CuspBasis};
use super::hecke::{hecke_matrix_on, required_prec};
use super::numeric::big_ratio_f64;
use crate::arith::{factorize, is_prime, primes_up_to};
use crate::error::{precondition, Error, Result};
use crate::signs::chebyshev_u_recurrence;

/// Minimum distance between normalised `T_2` eigenvalues.
pub const SEPARATION_THRESHOLD: f64 = 1e-6;

/// Largest acceptable eigen-relation residual.
pub const RESIDUAL_TOLERANCE: f64 = 1e-8;

/// Primes whose Hecke relation is checked for every record, when the
/// precision allows it.
const RESIDUAL_PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

/// One normalised Hecke eigenform of level one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenformRecord {
    pub weight: u32,
    /// Position when the forms of this weight are sorted by `lambda(2)`.
    pub index: usize,
    /// `lambda[n]` for `1 <= n <= prec`; `lambda[0]` is unused and zero.
    lambda: Vec<f64>,
    /// `max_p |T_p* v - lambda(p) v| / |v|` over the checked primes.
    pub residual: f64,
    /// Least prime with a negative eigenvalue, if one is `<= prec`.
    pub p_f: Option<u64>,
    /// Least integer with a negative eigenvalue, if one is `<= prec`.
    pub n_f: Option<u64>,
}

impl EigenformRecord {
    pub fn prec(&self) -> usize {
        self.lambda.len() - 1
    }

    /// The stored table `lambda(1..=prec)`.
    pub fn lambdas(&self) -> &[f64] {
        &self.lambda[1..]
    }

    /// `lambda_f(n)`, from the table when `n <= prec` and otherwise from
    /// multiplicativity and `lambda(p^(r+1)) = lambda(p) lambda(p^r) - lambda(p^(r-1))`.
    pub fn lambda(&self, n: u64) -> Option<f64> {
        if n == 0 {
            return None;
        }
        if n as usize <= self.prec() {
            return Some(self.lambda[n as usize]);
        }
        let mut acc = 1.0;
        for (p, e) in factorize(n) {
            let lp = self.table(p)?;
            let pe = p.pow(e);
            acc *= self.table(pe).unwrap_or_else(|| {
                let theta = angle_of(lp);
                chebyshev_u_recurrence(e, theta)
            });
        }
        Some(acc)
    }

    fn table(&self, n: u64) -> Option<f64> {
        self.lambda.get(n as usize).copied().filter(|_| n >= 1)
    }

    /// `theta_f(p)` with `lambda_f(p) = 2 cos theta_f(p)`.
    pub fn theta(&self, p: u64) -> Option<f64> {
        self.lambda(p).map(angle_of)
    }

    /// Signs of `lambda(p)` for primes `p <= bound`.
    pub fn prime_signs(&self, bound: u64) -> Vec<(u64, i8)> {
        primes_up_to(bound.min(self.prec() as u64))
            .into_iter()
            .map(|p| (p, if self.lambda[p as usize] < 0.0 { -1 } else { 1 }))
            .collect()
    }
}

fn angle_of(lambda_p: f64) -> f64 {
    (lambda_p / 2.0).clamp(-1.0, 1.0).acos()
}

/// Least `n` (resp. least prime `p`) in `2..=prec` with a negative eigenvalue.
pub fn first_negatives(lambda: &[f64]) -> (Option<u64>, Option<u64>) {
    let n_f = (2..lambda.len()).find(|&n| lambda[n] < 0.0).map(|n| n as u64);
    let p_f = (2..lambda.len())
        .find(|&n| lambda[n] < 0.0 && is_prime(n as u64))
        .map(|n| n as u64);
    (n_f, p_f)
}

/// Normalised basis table `b_i(n) (i/n)^((k-1)/2)`, one row per basis form.
fn normalized_basis(basis: &CuspBasis) -> Vec<Vec<f64>> {
    let w = (basis.weight() as f64 - 1.0) / 2.0;
    basis
        .forms()
        .iter()
        .enumerate()
        .map(|(i, form)| {
            let li = ((i + 1) as f64).log2();
            let mut row = vec![0.0; basis.prec() + 1];
            for (n, slot) in row.iter_mut().enumerate().skip(1) {
                *slot = big_ratio_f64(form.coefficient(n), w * ((n as f64).log2() - li));
            }
            row
        })
        .collect()
}

fn to_matrix(rows: &[Vec<f64>]) -> DMatrix<f64> {
    let d = rows.len();
    DMatrix::from_fn(d, d, |i, j| rows[i][j])
}

/// Eigenvalues of the normalised `T_2`, ascending, checked real and simple.
fn t2_spectrum(weight: u32, s: &DMatrix<f64>) -> Result<Vec<f64>> {
    let d = s.nrows();
    if d == 1 {
        return Ok(vec![s[(0, 0)]]);
    }
    let complex = s.clone().complex_eigenvalues();
    let mut values = Vec::with_capacity(d);
    for z in complex.iter() {
        if z.im.abs() > SEPARATION_THRESHOLD {
            return Err(Error::Numerical {
                message: format!("non-real T_2 eigenvalue {z} at weight {weight}"),
                best_estimate: z.re,
            });
        }
        values.push(z.re);
    }
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    let gap = values
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    if gap < SEPARATION_THRESHOLD {
        return Err(Error::DegenerateSpectrum {
            weight,
            gap,
            threshold: SEPARATION_THRESHOLD,
        });
    }
    Ok(values)
}

/// Eigenvector for `value` by inverse iteration, scaled so `v[0] = lambda(1) = 1`.
fn eigenvector(s: &DMatrix<f64>, value: f64) -> Result<DVector<f64>> {
    let d = s.nrows();
    let shift = value + 1e-11 * (1.0 + value.abs());
    let lu = (s - DMatrix::identity(d, d) * shift).lu();
    let mut x = DVector::from_fn(d, |i, _| 1.0 / (i + 1) as f64);
    for _ in 0..4 {
        x = lu.solve(&x).ok_or_else(|| Error::Numerical {
            message: "singular shifted T_2 in inverse iteration".into(),
            best_estimate: value,
        })?;
        let norm = x.norm();
        x /= norm;
    }
    if x[0].abs() < 1e-12 {
        return Err(Error::Numerical {
            message: "eigenvector with vanishing first coefficient".into(),
            best_estimate: value,
        });
    }
    let lead = x[0];
    Ok(x / lead)
}

/// Hecke eigenforms of `S_k(1)` from an echelon basis.
pub fn eigenforms_from_basis(basis: &CuspBasis) -> Result<Vec<EigenformRecord>> {
    let d = basis.dim();
    if d == 0 {
        return Ok(Vec::new());
    }
    let k = basis.weight();
    if basis.prec() < required_prec(2, d) {
        return precondition(format!(
            "weight {k} eigenforms need precision >= {}, got {}",
            required_prec(2, d),
            basis.prec()
        ));
    }
    let s2 = to_matrix(&hecke_matrix_on(basis, 2)?.normalized());
    let spectrum = t2_spectrum(k, &s2)?;
    let table = normalized_basis(basis);
    let checks: Vec<(u64, DMatrix<f64>)> = RESIDUAL_PRIMES
        .iter()
        .filter(|&&p| required_prec(p, d) <= basis.prec())
        .map(|&p| Ok((p, to_matrix(&hecke_matrix_on(basis, p)?.normalized()))))
        .collect::<Result<_>>()?;

    let mut records = Vec::with_capacity(d);
    for (index, &value) in spectrum.iter().enumerate() {
        let v = eigenvector(&s2, value)?;
        let mut lambda = vec![0.0; basis.prec() + 1];
        for (n, slot) in lambda.iter_mut().enumerate().skip(1) {
            *slot = (0..d).map(|i| v[i] * table[i][n]).sum();
        }
        let norm = v.norm();
        let residual = checks
            .iter()
            .map(|(p, sp)| (sp * &v - &v * lambda[*p as usize]).norm() / norm)
            .fold(0.0, f64::max);
        if !(residual <= RESIDUAL_TOLERANCE) {
            return Err(Error::Numerical {
                message: format!("eigenform {index} of weight {k} has residual {residual:e}"),
                best_estimate: residual,
            });
        }
        let (n_f, p_f) = first_negatives(&lambda);
        records.push(EigenformRecord {
            weight: k,
            index,
            lambda,
            residual,
            p_f,
            n_f,
        });
    }
    Ok(records)
}

/// Hecke eigenforms of `S_k(1)` with eigenvalues tabulated up to `prec`.
pub fn eigenforms(k: u32, prec: usize) -> Result<Vec<EigenformRecord>> {
    let basis = cuspform_basis(k, prec)?;
    eigenforms_from_basis(&basis)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_twelve() {
        let forms = eigenforms(12, 40).unwrap();
        assert_eq!(forms.len(), 1);
        let f = &forms[0];
        assert!((f.lambda(1).unwrap() - 1.0).abs() < 1e-15);
        assert!((f.lambda(2).unwrap() + 24.0 / 2f64.powf(5.5)).abs() < 1e-14);
        assert!((f.lambda(2).unwrap() + 0.530_330).abs() < 1e-6);
        assert_eq!((f.p_f, f.n_f), (Some(2), Some(2)));
    }

    #[test]
    fn weight_sixteen_and_twenty() {
        let f = &eigenforms(16, 40).unwrap()[0];
        assert!(f.lambda(2).unwrap() > 0.0 && f.lambda(3).unwrap() < 0.0);
        assert_eq!((f.p_f, f.n_f), (Some(3), Some(3)));

        let f = &eigenforms(20, 40).unwrap()[0];
        let l2 = f.lambda(2).unwrap();
        assert!(l2 > 0.0 && l2 < 1.0);
        assert!((f.lambda(4).unwrap() - (l2 * l2 - 1.0)).abs() < 1e-12);
        assert_eq!(f.n_f, Some(4));
        assert!(f.p_f.unwrap() > 4);
    }

    #[test]
    fn extended_lambda_uses_hecke_relations() {
        let f = &eigenforms(24, 60).unwrap()[1];
        let direct = f.lambda(49).unwrap();
        let via_recursion = f.lambda(7).unwrap().powi(2) - 1.0;
        assert!((direct - via_recursion).abs() < 1e-9);
        // beyond the table
        let l = f.lambda(3 * 59).unwrap();
        assert!((l - f.lambda(3).unwrap() * f.lambda(59).unwrap()).abs() < 1e-12);
        assert!(f.lambda(67 * 67).is_none());
        assert!(f.lambda(0).is_none());
    }

    #[test]
    fn insufficient_precision() {
        let b = cuspform_basis(48, 6).unwrap();
        assert!(eigenforms_from_basis(&b).is_err());
        assert!(eigenforms(10, 20).unwrap().is_empty());
    }
}
