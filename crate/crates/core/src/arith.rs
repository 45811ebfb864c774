//! Arithmetic substrate: primes, prime powers, smooth squarefree counts and
//! the multiplicative function `psi_star`.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};

const SEGMENT: usize = 1 << 16;

/// Primes `<= x` in increasing order, by a segmented sieve of Eratosthenes.
pub fn primes_up_to(x: u64) -> Vec<u64> {
    if x < 2 {
        return Vec::new();
    }
    let root = integer_sqrt(x);
    let base = simple_sieve(root);
    let mut out = Vec::with_capacity(estimate_pi(x));
    out.extend(base.iter().copied());

    let mut lo = root + 1;
    let mut composite = vec![false; SEGMENT];
    while lo <= x {
        let hi = (lo + SEGMENT as u64 - 1).min(x);
        let len = (hi - lo + 1) as usize;
        composite[..len].iter_mut().for_each(|c| *c = false);
        for &p in &base {
            if p * p > hi {
                break;
            }
            let mut start = lo.div_ceil(p) * p;
            if start < p * p {
                start = p * p;
            }
            let mut m = start;
            while m <= hi {
                composite[(m - lo) as usize] = true;
                m += p;
            }
        }
        out.extend(
            composite[..len]
                .iter()
                .enumerate()
                .filter(|(_, &c)| !c)
                .map(|(i, _)| lo + i as u64),
        );
        lo = hi + 1;
    }
    out
}

fn simple_sieve(n: u64) -> Vec<u64> {
    let n = n as usize;
    if n < 2 {
        return Vec::new();
    }
    let mut is_p = vec![true; n + 1];
    is_p[0] = false;
    is_p[1] = false;
    let mut i = 2;
    while i * i <= n {
        if is_p[i] {
            let mut j = i * i;
            while j <= n {
                is_p[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    is_p
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| i as u64)
        .collect()
}

fn estimate_pi(x: u64) -> usize {
    if x < 17 {
        return 8;
    }
    let xf = x as f64;
    (1.26 * xf / xf.ln()) as usize + 8
}

/// Largest `r` with `r * r <= x`.
pub fn integer_sqrt(x: u64) -> u64 {
    let mut r = (x as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|s| s > x) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|s| s <= x) {
        r += 1;
    }
    r
}

/// Deterministic trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    let mut d = 5;
    while d * d <= n {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

/// Number of primes `<= x`.
pub fn prime_pi(x: u64) -> usize {
    primes_up_to(x).len()
}

/// A prime power `q^n` with `n >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrimePower {
    // Field order makes the derived ordering sort by value first.
    value: u64,
    prime: u64,
    exponent: u32,
}

impl PrimePower {
    pub fn new(prime: u64, exponent: u32) -> Result<Self> {
        if !is_prime(prime) {
            return precondition(format!("{prime} is not prime"));
        }
        if exponent == 0 {
            return precondition("prime power exponent must be >= 1");
        }
        let value = prime
            .checked_pow(exponent)
            .ok_or_else(|| Error::Precondition(format!("{prime}^{exponent} overflows u64")))?;
        Ok(PrimePower {
            value,
            prime,
            exponent,
        })
    }

    /// Recognise `m` as a prime power, if it is one.
    pub fn from_value(m: u64) -> Option<Self> {
        if m < 2 {
            return None;
        }
        let factors = factorize(m);
        match factors.as_slice() {
            [(q, n)] => Some(PrimePower {
                value: m,
                prime: *q,
                exponent: *n,
            }),
            _ => None,
        }
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn value(&self) -> u64 {
        self.value
    }
}

impl std::fmt::Display for PrimePower {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.exponent == 1 {
            write!(f, "{}", self.prime)
        } else {
            write!(f, "{}^{}", self.prime, self.exponent)
        }
    }
}

impl std::str::FromStr for PrimePower {
    type Err = Error;

    /// Accepts `q^n`, `q**n` or a plain prime-power value such as `8`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse = |t: &str| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| Error::Precondition(format!("not an integer: {t:?}")))
        };
        if let Some((q, n)) = s.split_once("**").or_else(|| s.split_once('^')) {
            let q = parse(q)?;
            let n = parse(n)?;
            let n = u32::try_from(n)
                .map_err(|_| Error::Precondition(format!("exponent too large: {n}")))?;
            PrimePower::new(q, n)
        } else {
            let m = parse(s)?;
            PrimePower::from_value(m)
                .ok_or_else(|| Error::Precondition(format!("{m} is not a prime power")))
        }
    }
}

/// All prime powers `q^n <= x`, sorted by value.
pub fn prime_powers_up_to(x: u64) -> Vec<PrimePower> {
    let mut out = Vec::new();
    for q in primes_up_to(x) {
        let mut value = q;
        let mut exponent = 1;
        loop {
            out.push(PrimePower {
                value,
                prime: q,
                exponent,
            });
            match value.checked_mul(q) {
                Some(v) if v <= x => {
                    value = v;
                    exponent += 1;
                }
                _ => break,
            }
        }
    }
    out.sort_unstable();
    out
}

/// Prime factorisation by trial division, as `(prime, exponent)` pairs in
/// increasing order of the prime.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut push = |n: &mut u64, p: u64| {
        let mut e = 0;
        while (*n).is_multiple_of(p) {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(&mut n, 2);
    push(&mut n, 3);
    let mut d = 5;
    while d * d <= n {
        push(&mut n, d);
        push(&mut n, d + 2);
        d += 6;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Number of divisors of `n`.
pub fn divisor_count(n: u64) -> u64 {
    factorize(n).iter().map(|&(_, e)| u64::from(e) + 1).product()
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

/// The multiplicative function `psi*` governing the main term of level-`N`
/// Hecke traces:
/// `psi*(p) = p - 1`, `psi*(p^2) = p^2 - p - 1` and
/// `psi*(p^a) = p^a - p^(a-1) - p^(a-2) + p^(a-3)` for `a > 2`.
pub fn psi_star(n: u64) -> Result<u64> {
    if n == 0 {
        return precondition("psi_star requires N >= 1");
    }
    let mut acc: u64 = 1;
    for (p, a) in factorize(n) {
        let local = match a {
            1 => p - 1,
            2 => p * p - p - 1,
            _ => {
                let pa3 = p.pow(a - 3);
                // p^a - p^(a-1) - p^(a-2) + p^(a-3) = p^(a-3) (p^3 - p^2 - p + 1)
                pa3 * (p * p * p - p * p - p + 1)
            }
        };
        acc = acc
            .checked_mul(local)
            .ok_or_else(|| Error::Precondition(format!("psi_star({n}) overflows")))?;
    }
    Ok(acc)
}

/// Parameters of the squarefree smooth count `Psi*_N(M, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmoothSpec {
    pub bound: u64,
    pub smoothness: f64,
    pub excluded_modulus: u64,
}

impl SmoothSpec {
    pub fn new(bound: u64, smoothness: f64, excluded_modulus: u64) -> Result<Self> {
        if bound < 1 {
            return precondition("smooth count bound M must be >= 1");
        }
        if smoothness.is_nan() || smoothness <= 1.0 {
            return precondition(format!("smoothness y must exceed 1, got {smoothness}"));
        }
        if excluded_modulus < 1 {
            return precondition("excluded modulus N must be >= 1");
        }
        Ok(SmoothSpec {
            bound,
            smoothness,
            excluded_modulus,
        })
    }

    /// Primes `p <= y` with `p` not dividing `N`: the prime factors of `P_N(y)`.
    pub fn admissible_primes(&self) -> Vec<u64> {
        let y = self.smoothness.floor() as u64;
        primes_up_to(y.min(self.bound))
            .into_iter()
            .filter(|p| !self.excluded_modulus.is_multiple_of(*p))
            .collect()
    }

    /// Every squarefree `m <= M` whose prime factors are admissible, with
    /// its prime factors. Includes `m = 1` with no factors.
    pub fn squarefree_members(&self) -> Vec<(u64, Vec<u64>)> {
        let primes = self.admissible_primes();
        let mut out = Vec::new();
        let mut stack = Vec::new();
        collect_squarefree(&primes, 0, 1, self.bound, &mut stack, &mut out);
        out.sort_by_key(|(m, _)| *m);
        out
    }
}

fn collect_squarefree(
    primes: &[u64],
    from: usize,
    m: u64,
    bound: u64,
    stack: &mut Vec<u64>,
    out: &mut Vec<(u64, Vec<u64>)>,
) {
    out.push((m, stack.clone()));
    for (i, &p) in primes.iter().enumerate().skip(from) {
        match m.checked_mul(p) {
            Some(next) if next <= bound => {
                stack.push(p);
                collect_squarefree(primes, i + 1, next, bound, stack, out);
                stack.pop();
            }
            _ => break,
        }
    }
}

/// Count of squarefree `m <= M`, all prime factors `<= y`, coprime to `N`
/// (`m = 1` included).
pub fn squarefree_smooth_count(spec: &SmoothSpec) -> u64 {
    fn count(primes: &[u64], from: usize, m: u64, bound: u64) -> u64 {
        let mut total = 1;
        for (i, &p) in primes.iter().enumerate().skip(from) {
            match m.checked_mul(p) {
                Some(next) if next <= bound => total += count(primes, i + 1, next, bound),
                _ => break,
            }
        }
        total
    }
    count(&spec.admissible_primes(), 0, 1, spec.bound)
}

/// `gcd(a, b, c)`.
pub fn gcd3(a: u64, b: u64, c: u64) -> u64 {
    a.gcd(&b).gcd(&c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_primes(x: u64) -> Vec<u64> {
        (2..=x)
            .filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
            .collect()
    }

    #[test]
    fn small_prime_lists() {
        assert!(primes_up_to(0).is_empty());
        assert!(primes_up_to(1).is_empty());
        assert_eq!(primes_up_to(2), vec![2]);
        assert_eq!(primes_up_to(10), vec![2, 3, 5, 7]);
        for x in [3, 4, 97, 100, 1000, 65_537, 140_000] {
            assert_eq!(primes_up_to(x), trial_primes(x), "x = {x}");
        }
    }

    #[test]
    fn prime_count_one_million() {
        let primes = primes_up_to(1_000_000);
        assert_eq!(primes.len(), 78_498);
        assert!(primes.iter().all(|&p| is_prime(p)));
    }

    #[test]
    fn prime_power_lists() {
        let vals: Vec<u64> = prime_powers_up_to(10).iter().map(|m| m.value()).collect();
        assert_eq!(vals, vec![2, 3, 4, 5, 7, 8, 9]);
        let two = prime_powers_up_to(2);
        assert_eq!(two.len(), 1);
        assert_eq!((two[0].prime(), two[0].exponent()), (2, 1));

        // brute-force double loop
        let mut brute = Vec::new();
        for q in 2..=1000u64 {
            if !is_prime(q) {
                continue;
            }
            let mut v = q;
            while v <= 1000 {
                brute.push(v);
                v *= q;
            }
        }
        brute.sort_unstable();
        let got: Vec<u64> = prime_powers_up_to(1000).iter().map(|m| m.value()).collect();
        assert_eq!(got, brute);
        assert_eq!(got.len(), 193);
    }

    #[test]
    fn prime_power_parsing() {
        let m: PrimePower = "3^2".parse().unwrap();
        assert_eq!((m.prime(), m.exponent(), m.value()), (3, 2, 9));
        let m: PrimePower = "8".parse().unwrap();
        assert_eq!((m.prime(), m.exponent()), (2, 3));
        assert!("6".parse::<PrimePower>().is_err());
        assert!("4^2".parse::<PrimePower>().is_err());
        assert!(PrimePower::new(2, 0).is_err());
        assert_eq!(m.to_string(), "2^3");
    }

    #[test]
    fn smooth_counts() {
        let c = |m, y, n| squarefree_smooth_count(&SmoothSpec::new(m, y, n).unwrap());
        assert_eq!(c(10, 3.0, 1), 4);
        assert_eq!(c(1, 2.0, 1), 1);
        assert_eq!(c(10, 3.0, 2), 2);
        assert_eq!(c(10, 3.0, 6), 1);
        assert!(SmoothSpec::new(10, 1.0, 1).is_err());
        assert!(SmoothSpec::new(0, 2.0, 1).is_err());
        let members = SmoothSpec::new(10, 3.0, 1).unwrap().squarefree_members();
        let ms: Vec<u64> = members.iter().map(|(m, _)| *m).collect();
        assert_eq!(ms, vec![1, 2, 3, 6]);
    }

    #[test]
    fn smooth_count_matches_enumeration() {
        for m in [1u64, 7, 30, 100, 211] {
            for y in [2.0, 3.5, 7.0, 13.0] {
                for n in [1u64, 2, 15] {
                    let brute = (1..=m)
                        .filter(|&v| {
                            let f = factorize(v);
                            f.iter().all(|&(p, e)| e == 1 && (p as f64) <= y && n % p != 0)
                        })
                        .count() as u64;
                    assert_eq!(
                        squarefree_smooth_count(&SmoothSpec::new(m, y, n).unwrap()),
                        brute
                    );
                }
            }
        }
    }

    #[test]
    fn psi_star_table() {
        assert_eq!(psi_star(1).unwrap(), 1);
        assert_eq!(psi_star(7).unwrap(), 6);
        assert_eq!(psi_star(12).unwrap(), 2);
        assert_eq!(psi_star(4).unwrap(), 1);
        assert_eq!(psi_star(9).unwrap(), 5);
        // p^3 - p^2 - p + 1 at p = 2
        assert_eq!(psi_star(8).unwrap(), 3);
        assert_eq!(psi_star(16).unwrap(), 16 - 8 - 4 + 2);
        assert!(psi_star(0).is_err());
    }

    #[test]
    fn psi_star_is_totient_on_squarefree() {
        for n in 1..=10_000u64 {
            if factorize(n).iter().all(|&(_, e)| e == 1) {
                assert_eq!(psi_star(n).unwrap(), euler_phi(n), "N = {n}");
            }
        }
    }

    #[test]
    fn factor_helpers() {
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(divisor_count(360), 24);
        assert_eq!(divisor_count(1), 1);
        assert_eq!(euler_phi(36), 12);
        assert_eq!(integer_sqrt(99), 9);
        assert_eq!(integer_sqrt(u64::MAX), 4_294_967_295);
        assert_eq!(gcd3(12, 18, 30), 6);
    }
}
