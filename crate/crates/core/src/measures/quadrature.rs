//! Adaptive Gauss–Kronrod (7, 15) quadrature.

use crate::error::{precondition, Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];

// Gauss weights for the 7-point rule on the odd-indexed Kronrod nodes.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Deepest bisection level before giving up.
pub const MAX_DEPTH: u32 = 40;

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Integrate `f` over `[a, b]` to an absolute error estimate `<= tol`.
///
/// Each panel is accepted when its Kronrod/Gauss discrepancy is below its
/// share of the tolerance (proportional to its width); otherwise it is
/// bisected. Fails with the best available estimate once a panel would need
/// more than [`MAX_DEPTH`] bisections.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<(f64, f64)> {
    if !(tol > 0.0) {
        return precondition(format!("quadrature tolerance must be positive, got {tol}"));
    }
    if a == b {
        return Ok((0.0, 0.0));
    }
    let width = b - a;
    let mut total = 0.0;
    let mut err = 0.0;
    let mut failed = false;
    let mut stack = vec![(a, b, 0u32)];
    while let Some((lo, hi, depth)) = stack.pop() {
        let (value, e) = gk15(&f, lo, hi);
        let share = tol * (hi - lo) / width;
        if e <= share || depth >= MAX_DEPTH {
            if e > share {
                failed = true;
            }
            total += value;
            err += e;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi, depth + 1));
            stack.push((lo, mid, depth + 1));
        }
    }
    if failed {
        return Err(Error::Numerical {
            message: format!("adaptive quadrature on [{a}, {b}] did not reach tolerance {tol:e}"),
            best_estimate: total,
        });
    }
    Ok((total, err))
}
