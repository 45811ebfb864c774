//! Kloosterman sums, Bessel series, the Petersson tail and the sieve bounds.

pub mod bessel;
pub mod bounds;
pub mod kloosterman;
pub mod petersson;

pub use bessel::{bessel_j, bessel_j_series, curly_j, SeriesValue};
pub use bounds::{
    complete_sieve_bound, curly_j_bound_check, curly_j_bound_grid, delta_bound, sieve_h,
    CurlyJBoundReport, PrimeWeights, SieveParams, CURLY_J_CONSTANT,
};
pub use kloosterman::{kloosterman, kloosterman_sum, weil_bound, KloostermanQuery, KloostermanTable};
pub use petersson::{petersson_ratio_check, petersson_tail, PeterssonRatioReport, PeterssonTail};
