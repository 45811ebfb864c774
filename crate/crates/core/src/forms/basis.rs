use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::qexp::{delta, eisenstein, QExpansion};
use crate::error::{domain, precondition, Result};

/// `dim S_k(SL_2(Z))` for even `k >= 0`; zero for odd or small weights.
pub fn cusp_dimension(k: u32) -> usize {
    if k % 2 == 1 || k < 12 {
        return 0;
    }
    let d = (k / 12) as usize;
    if k % 12 == 2 {
        d - 1
    } else {
        d
    }
}

/// Echelonised basis of `S_k(1)`: `forms[i]` has `a(j) = delta_{i+1, j}` for `1 <= j <= dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct CuspBasis {
    weight: u32,
    prec: usize,
    forms: Vec<QExpansion>,
}

impl CuspBasis {
    /// Wrap already-echelonised coefficient lists (as read from a cache).
    pub fn from_forms(weight: u32, forms: Vec<QExpansion>) -> Result<Self> {
        let dim = cusp_dimension(weight);
        if forms.len() != dim {
            return precondition(format!(
                "weight {weight} needs {dim} basis forms, got {}",
                forms.len()
            ));
        }
        let prec = forms.first().map_or(dim + 2, QExpansion::prec);
        for (i, f) in forms.iter().enumerate() {
            if f.prec() != prec {
                return precondition("basis forms disagree on precision");
            }
            for j in 0..=dim.min(prec) {
                let expected = if j == i + 1 { BigInt::one() } else { BigInt::zero() };
                if f.coefficient(j) != &expected {
                    return precondition(format!("basis form {i} is not in echelon form at q^{j}"));
                }
            }
        }
        Ok(CuspBasis {
            weight,
            prec,
            forms,
        })
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn dim(&self) -> usize {
        self.forms.len()
    }

    pub fn forms(&self) -> &[QExpansion] {
        &self.forms
    }

    pub fn into_forms(self) -> Vec<QExpansion> {
        self.forms
    }
}

/// Shared building blocks for level-one forms at a fixed precision.
///
/// Powers of `Delta` and of `E_6^2` are computed once up to the largest
/// dimension needed, so bases for many weights reuse them.
#[derive(Debug, Clone)]
pub struct LevelOneRing {
    prec: usize,
    e4: QExpansion,
    e6: QExpansion,
    delta_powers: Vec<QExpansion>,
    e6_square_powers: Vec<QExpansion>,
}

impl LevelOneRing {
    pub fn new(prec: usize, max_weight: u32) -> Self {
        let e4 = eisenstein(4, prec).expect("weight 4");
        let e6 = eisenstein(6, prec).expect("weight 6");
        let max_dim = cusp_dimension(max_weight).max(1);
        let d = delta(prec);
        let mut delta_powers = vec![QExpansion::one(prec)];
        for _ in 0..max_dim {
            let next = delta_powers.last().unwrap().mul(&d);
            delta_powers.push(next);
        }
        let e6_sq = e6.mul(&e6);
        let mut e6_square_powers = vec![QExpansion::one(prec)];
        for _ in 0..max_dim {
            let next = e6_square_powers.last().unwrap().mul(&e6_sq);
            e6_square_powers.push(next);
        }
        LevelOneRing {
            prec,
            e4,
            e6,
            delta_powers,
            e6_square_powers,
        }
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn max_dim(&self) -> usize {
        self.delta_powers.len() - 1
    }

    /// Echelonised basis `Delta^j E_6^(2(d-j)) E_4^a E_6^b`, `j = 1..d`.
    pub fn cuspform_basis(&self, k: u32) -> Result<CuspBasis> {
        if k % 2 == 1 || k < 4 {
            return domain(format!("level-one cusp forms need even weight >= 4, got {k}"));
        }
        let dim = cusp_dimension(k);
        if dim > self.max_dim() {
            return precondition(format!(
                "ring prepared for dimension <= {}, weight {k} needs {dim}",
                self.max_dim()
            ));
        }
        if dim == 0 {
            return Ok(CuspBasis {
                weight: k,
                prec: self.prec,
                forms: Vec::new(),
            });
        }
        if self.prec < dim + 2 {
            return precondition(format!(
                "precision {} too small for weight {k}: need >= {}",
                self.prec,
                dim + 2
            ));
        }
        let rest = k - 12 * dim as u32;
        let (a, b) = match rest {
            0 => (0, 0),
            4 => (1, 0),
            6 => (0, 1),
            8 => (2, 0),
            10 => (1, 1),
            14 => (2, 1),
            _ => unreachable!("weight {k} leaves remainder {rest}"),
        };
        let mut tail = QExpansion::one(self.prec);
        for _ in 0..a {
            tail = tail.mul(&self.e4);
        }
        for _ in 0..b {
            tail = tail.mul(&self.e6);
        }

        let mut forms: Vec<QExpansion> = (1..=dim)
            .map(|j| {
                let e6_part = &self.e6_square_powers[dim - j];
                let cofactor = if a + b == 0 { e6_part.clone() } else { e6_part.mul(&tail) };
                let mut g = self.delta_powers[j].mul(&cofactor);
                g = QExpansion::new(k, g.into_coefficients());
                g
            })
            .collect();

        // Back-substitution: leading coefficients are already 1.
        for i in (0..dim).rev() {
            debug_assert!(forms[i].coefficient(i + 1).is_one());
            let (head, tail_forms) = forms.split_at_mut(i);
            let pivot = &tail_forms[0];
            for g in head.iter_mut() {
                let c = g.coefficient(i + 1).clone();
                if !c.is_zero() {
                    g.sub_scaled(&c, pivot);
                }
            }
        }
        Ok(CuspBasis {
            weight: k,
            prec: self.prec,
            forms,
        })
    }
}

/// Echelonised basis of `S_k(1)` to `prec` terms.
pub fn cuspform_basis(k: u32, prec: usize) -> Result<CuspBasis> {
    let dim = cusp_dimension(k);
    if dim > 0 && prec < dim + 2 {
        return precondition(format!("precision {prec} too small for weight {k}: need >= {}", dim + 2));
    }
    LevelOneRing::new(prec, k).cuspform_basis(k)
}
