use num_bigint::BigInt;
use num_traits::ToPrimitive;

/// `x / 2^log2_scale` as an `f64`, for integers far outside the `f64` range.
pub fn big_ratio_f64(x: &BigInt, log2_scale: f64) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return 0.0;
    }
    let shift = bits.saturating_sub(62);
    let top = (x >> shift).to_f64().expect("62-bit integer fits in f64");
    top * (shift as f64 - log2_scale).exp2()
}
