//! The Sato–Tate measure and the p-adic Plancherel measures on `[0, pi]`.
//!
//! Masses of intervals are computed from closed-form antiderivatives.
//! An adaptive quadrature of the densities is kept alongside as an
//! independent check.
//!
//! With `r = (p + 1)/(p - 1)` the Plancherel antiderivative is
//!
//! ```text
//! G_p(t) = t/pi - (p - 1) * delta(t) / (2 pi),
//! delta(t) = atan2((r - 1) sin t cos t, cos^2 t + r sin^2 t),
//! ```
//!
//! where `delta(t)` is the offset between `atan(r tan t)` (continued across
//! `t = pi/2`) and `t`. The denominator of the `atan2` is strictly positive,
//! so `G_p` is continuous on `[0, pi]` and stays accurate as `p` grows.

pub mod quadrature;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::arith::is_prime;
use crate::error::{precondition, Result};

/// A closed subinterval `[lo, hi]` of `[0, pi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleInterval {
    lo: f64,
    hi: f64,
}

impl AngleInterval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo >= 0.0 && lo <= hi && hi <= PI) {
            return precondition(format!(
                "angle interval [{lo}, {hi}] is not a subinterval of [0, pi]"
            ));
        }
        Ok(AngleInterval { lo, hi })
    }

    /// The whole circle half `[0, pi]`.
    pub fn full() -> Self {
        AngleInterval { lo: 0.0, hi: PI }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, theta: f64) -> bool {
        self.lo <= theta && theta <= self.hi
    }

    /// Mirror image under `theta -> pi - theta`.
    pub fn reflect(&self) -> Self {
        AngleInterval {
            lo: (PI - self.hi).max(0.0),
            hi: (PI - self.lo).min(PI),
        }
    }
}

impl std::fmt::Display for AngleInterval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{:.6}, {:.6}]", self.lo, self.hi)
    }
}

/// Which measure to integrate against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MeasureSpec {
    SatoTate,
    Plancherel { p: u64 },
}

impl MeasureSpec {
    /// The p-adic Plancherel measure; `p` must be prime.
    pub fn plancherel(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return precondition(format!("Plancherel measure needs a prime, got {p}"));
        }
        Ok(MeasureSpec::Plancherel { p })
    }

    /// Density with respect to `d theta`.
    pub fn density(&self, theta: f64) -> f64 {
        let s2 = theta.sin().powi(2);
        match *self {
            MeasureSpec::SatoTate => 2.0 / PI * s2,
            MeasureSpec::Plancherel { p } => {
                let inv = 1.0 / p as f64;
                let c = (1.0 - inv) * (1.0 - inv);
                2.0 / PI * (1.0 + inv) * s2 / (c + 4.0 * inv * s2)
            }
        }
    }

    /// Closed-form cumulative mass `mu([0, theta])`.
    pub fn cumulative(&self, theta: f64) -> f64 {
        match *self {
            MeasureSpec::SatoTate => theta / PI - (2.0 * theta).sin() / (2.0 * PI),
            MeasureSpec::Plancherel { p } => {
                let pm1 = (p - 1) as f64;
                let r_minus_1 = 2.0 / pm1;
                let (s, c) = theta.sin_cos();
                let delta = (r_minus_1 * s * c).atan2(c * c + (1.0 + r_minus_1) * s * s);
                theta / PI - pm1 * delta / (2.0 * PI)
            }
        }
    }
}

impl std::fmt::Display for MeasureSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MeasureSpec::SatoTate => write!(f, "mu_ST"),
            MeasureSpec::Plancherel { p } => write!(f, "mu_{p}"),
        }
    }
}

/// `mu(I)` from the closed-form antiderivative.
pub fn measure_mass(spec: MeasureSpec, interval: AngleInterval) -> f64 {
    if interval.lo == interval.hi {
        return 0.0;
    }
    let mass = spec.cumulative(interval.hi) - spec.cumulative(interval.lo);
    mass.clamp(0.0, 1.0)
}

/// `mu(I)` by adaptive quadrature of the density; the independent oracle for
/// [`measure_mass`].
pub fn measure_mass_quadrature(spec: MeasureSpec, interval: AngleInterval, tol: f64) -> Result<f64> {
    if !(tol >= 1e-14) {
        return precondition(format!("quadrature tolerance must be >= 1e-14, got {tol}"));
    }
    quadrature::integrate(|t| spec.density(t), interval.lo, interval.hi, tol).map(|(v, _)| v)
}

/// `<X_m, mu_p> = p^(-m/2)` for even `m`, zero for odd `m`.
pub fn chebyshev_moment(m: u32, p: u64) -> f64 {
    if m % 2 == 1 {
        0.0
    } else {
        (p as f64).powf(-(m as f64) / 2.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(a: f64, b: f64) -> AngleInterval {
        AngleInterval::new(a, b).unwrap()
    }

    #[test]
    fn total_and_half_masses() {
        for p in [2, 3, 5, 7, 53, 1_000_003] {
            let mu = MeasureSpec::plancherel(p).unwrap();
            assert!((measure_mass(mu, AngleInterval::full()) - 1.0).abs() < 1e-14);
            assert!((measure_mass(mu, iv(0.0, PI / 2.0)) - 0.5).abs() < 1e-14);
        }
        let st = MeasureSpec::SatoTate;
        assert!((measure_mass(st, AngleInterval::full()) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sato_tate_third() {
        let expected = 1.0 / 3.0 - 3f64.sqrt() / (4.0 * PI);
        let got = measure_mass(MeasureSpec::SatoTate, iv(0.0, PI / 3.0));
        assert!((got - expected).abs() < 1e-15);
        assert!((got - 0.195_501).abs() < 1e-6);
    }

    #[test]
    fn mu2_piece_used_by_nf_average() {
        let v = measure_mass(MeasureSpec::plancherel(2).unwrap(), iv(PI / 3.0, PI / 2.0));
        let q = measure_mass_quadrature(MeasureSpec::plancherel(2).unwrap(), iv(PI / 3.0, PI / 2.0), 1e-13)
            .unwrap();
        assert!(v > 0.0 && v < 0.5);
        assert!((v - q).abs() < 1e-12);
    }

    #[test]
    fn quadrature_examples() {
        let mu3 = MeasureSpec::plancherel(3).unwrap();
        let v = measure_mass_quadrature(mu3, AngleInterval::full(), 1e-12).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        let v = measure_mass_quadrature(MeasureSpec::SatoTate, iv(0.0, PI / 2.0), 1e-12).unwrap();
        assert!((v - 0.5).abs() < 1e-12);
        let mu2 = MeasureSpec::plancherel(2).unwrap();
        let v = measure_mass_quadrature(mu2, iv(0.3, 1.1), 1e-12).unwrap();
        assert!((v - measure_mass(mu2, iv(0.3, 1.1))).abs() < 1e-10);
        assert!(measure_mass_quadrature(mu2, iv(0.3, 1.1), 1e-15).is_err());
    }

    #[test]
    fn degenerate_interval_is_exactly_zero() {
        let mu = MeasureSpec::plancherel(5).unwrap();
        assert_eq!(measure_mass(mu, iv(1.0, 1.0)), 0.0);
        assert_eq!(measure_mass(MeasureSpec::SatoTate, iv(PI, PI)), 0.0);
    }

    #[test]
    fn invalid_inputs() {
        assert!(AngleInterval::new(1.0, 0.5).is_err());
        assert!(AngleInterval::new(-0.1, 0.5).is_err());
        assert!(AngleInterval::new(0.0, 3.2).is_err());
        assert!(AngleInterval::new(f64::NAN, 1.0).is_err());
        assert!(MeasureSpec::plancherel(4).is_err());
    }

    #[test]
    fn moments() {
        assert_eq!(chebyshev_moment(0, 7), 1.0);
        assert_eq!(chebyshev_moment(1, 5), 0.0);
        assert_eq!(chebyshev_moment(2, 2), 0.5);
        assert!((chebyshev_moment(4, 3) - 1.0 / 9.0).abs() < 1e-16);
    }

    #[test]
    fn cumulative_is_continuous_across_right_angle() {
        for p in [2, 3, 11] {
            let mu = MeasureSpec::plancherel(p).unwrap();
            let below = mu.cumulative(PI / 2.0 - 1e-9);
            let above = mu.cumulative(PI / 2.0 + 1e-9);
            assert!((above - below).abs() < 1e-8);
            assert!((mu.cumulative(PI / 2.0) - 0.5).abs() < 1e-15);
        }
    }
}
