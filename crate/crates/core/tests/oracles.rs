//! Cross-checks against independently written reference computations.

use std::f64::consts::PI;

use firstsign::averages::{average_nf, average_pf, MeasureAssignment};
use firstsign::forms::{delta, eigenforms};
use firstsign::measures::quadrature::integrate;
use num_bigint::BigInt;

fn trial_division_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn plancherel_density(p: f64, t: f64) -> f64 {
    let s2 = t.sin().powi(2);
    2.0 / PI * (1.0 + 1.0 / p) * s2 / ((1.0 - 1.0 / p).powi(2) + 4.0 / p * s2)
}

fn quad_mass(p: u64, lo: f64, hi: f64) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    integrate(|t| plancherel_density(p as f64, t), lo, hi, 1e-14).unwrap().0
}

/// `sum m prod mu(I_m(p))` written from scratch: prime powers by trial
/// division, the interval at each prime by direct comparison of powers, and
/// masses by adaptive quadrature of the density.
fn nf_by_quadrature(product_measure: bool) -> f64 {
    let mut total = 0.0;
    for m in 2u64..=400 {
        let q = (2..=m).find(|d| m % d == 0).unwrap();
        let mut r = m;
        let mut n = 0;
        while r % q == 0 {
            r /= q;
            n += 1;
        }
        if r != 1 {
            continue;
        }
        let mut term = m as f64;
        for p in (2..=m).filter(|&p| trial_division_prime(p)) {
            let measure = if product_measure { p } else { q };
            let (lo, hi) = if p == q {
                (PI / (n as f64 + 1.0), PI / n as f64)
            } else {
                let mut a = 0;
                let mut pa = 1u64;
                while pa * p < m {
                    pa *= p;
                    a += 1;
                }
                (0.0, PI / (a as f64 + 1.0))
            };
            term *= quad_mass(measure, lo, hi);
        }
        total += term;
    }
    total
}

#[test]
fn average_pf_matches_published_value() {
    let mut s = 0.0;
    let mut i = 0;
    for p in (2u64..).filter(|&p| trial_division_prime(p)) {
        i += 1;
        s += p as f64 / 2f64.powi(i);
        if i == 80 {
            break;
        }
    }
    let lib = average_pf(1e-9).unwrap();
    assert!((lib.value - s).abs() <= lib.tail_bound);
    assert!((average_pf(1e-14).unwrap().value - s).abs() < 1e-14);
    assert!((lib.value - 3.674_643_966_011_328).abs() <= 1e-9);
}

#[test]
fn average_nf_matches_quadrature_and_published_value() {
    let target = nf_by_quadrature(false);
    let product = nf_by_quadrature(true);
    let lib_target = average_nf(1e-12, MeasureAssignment::TargetPrime).unwrap().value;
    let lib_product = average_nf(1e-12, MeasureAssignment::ConstrainedPrime).unwrap().value;
    assert!((lib_target - target).abs() < 1e-10, "{lib_target} vs {target}");
    assert!((lib_product - product).abs() < 1e-10, "{lib_product} vs {product}");
    assert!((lib_target - 2.942_340_300_053_148_3).abs() <= 1e-9);
}

/// `tau(n)` from `q prod_{n >= 1} (1 - q^n)^24`.
fn tau_by_product(prec: usize) -> Vec<i128> {
    let mut c = vec![0i128; prec + 1];
    c[1] = 1;
    for n in 1..=prec {
        for _ in 0..24 {
            for i in (n..=prec).rev() {
                c[i] -= c[i - n];
            }
        }
    }
    c
}

#[test]
fn delta_matches_product_formula() {
    let tau = tau_by_product(200);
    let d = delta(200);
    for n in 0..=200 {
        assert_eq!(d.coefficient(n), &BigInt::from(tau[n]), "tau({n})");
    }
    let f = &eigenforms(12, 200).unwrap()[0];
    for n in 1..=200usize {
        let want = tau[n] as f64 / (n as f64).powf(5.5);
        assert!((f.lambda(n as u64).unwrap() - want).abs() < 1e-10 * want.abs().max(1.0));
    }
}
