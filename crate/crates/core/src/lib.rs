//! First sign changes of Hecke eigenvalues of level-one cusp forms.
//!
//! * [`arith`]: primes, prime powers, smooth counts, `psi*`.
//! * [`measures`]: Sato–Tate and p-adic Plancherel masses of angle intervals.
//! * [`signs`]: Chebyshev polynomials and the constraint intervals for `n_f`.
//! * [`averages`]: the limiting averages of `p_f` and `n_f`.
//! * [`forms`]: exact q-expansions, Hecke matrices and numerically embedded eigenforms.
//! * [`sieve`]: Kloosterman sums, Bessel series, Petersson tails and sieve bounds.
//! * [`experiments`]: empirical statistics over ranges of weights, with reports.

pub mod arith;
pub mod averages;
pub mod error;
pub mod experiments;
pub mod forms;
pub mod measures;
pub mod sieve;
pub mod signs;

pub use error::{Error, Result};
