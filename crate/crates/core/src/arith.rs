//! Prime sieving and the classical arithmetic functions everything else is
//! indexed by.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerance::SIEVE_CAP;

/// All primes up to `limit`, ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// Primes `<= bound` (a prefix of the table).
    pub fn up_to(&self, bound: u64) -> &[u64] {
        let end = self.primes.partition_point(|&p| p <= bound);
        &self.primes[..end]
    }

    pub fn contains(&self, n: u64) -> bool {
        self.primes.binary_search(&n).is_ok()
    }
}

/// Sieve of Eratosthenes over odd numbers, one bit per candidate.
pub fn sieve_primes(limit: u64) -> Result<PrimeTable> {
    if limit < 2 {
        return Err(Error::domain(format!("sieve limit must be >= 2, got {limit}")));
    }
    if limit > SIEVE_CAP {
        return Err(Error::domain(format!(
            "sieve limit {limit} exceeds the cap {SIEVE_CAP}"
        )));
    }
    // bit i stands for the odd number 2i + 1
    let odd_count = (limit as usize + 1) / 2;
    let mut composite = vec![0u64; odd_count.div_ceil(64)];
    let mut i = 1usize;
    while {
        let q = 2 * i + 1;
        q * q <= limit as usize
    } {
        if composite[i / 64] >> (i % 64) & 1 == 0 {
            let q = 2 * i + 1;
            let mut j = (q * q) / 2;
            while j < odd_count {
                composite[j / 64] |= 1 << (j % 64);
                j += q;
            }
        }
        i += 1;
    }

    let mut primes = Vec::with_capacity(estimate_prime_count(limit));
    primes.push(2);
    for i in 1..odd_count {
        if composite[i / 64] >> (i % 64) & 1 == 0 {
            primes.push(2 * i as u64 + 1);
        }
    }
    Ok(PrimeTable { limit, primes })
}

fn estimate_prime_count(limit: u64) -> usize {
    let x = limit as f64;
    (1.26 * x / x.ln().max(1.0)) as usize + 16
}

/// `m = prod p^e` with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimePowerDecomposition {
    pub m: u64,
    pub factors: Vec<(u64, u32)>,
}

impl PrimePowerDecomposition {
    /// `(p, e)` when `m = p^e` with `e >= 1`.
    pub fn as_prime_power(&self) -> Option<(u64, u32)> {
        match self.factors.as_slice() {
            [single] => Some(*single),
            _ => None,
        }
    }

    pub fn product(&self) -> u64 {
        self.factors.iter().map(|&(p, e)| p.pow(e)).product()
    }
}

/// Trial-division factorization.
pub fn factorize(m: u64) -> PrimePowerDecomposition {
    let mut rest = m;
    let mut factors = Vec::new();
    let mut push = |p: u64, rest: &mut u64| {
        let mut e = 0;
        while *rest % p == 0 {
            *rest /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    };
    push(2, &mut rest);
    let mut p = 3;
    while p * p <= rest {
        push(p, &mut rest);
        p += 2;
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    PrimePowerDecomposition { m, factors }
}

/// `(p, k)` if `m = p^k` for a prime `p` and `k >= 1`.
pub fn prime_power(m: u64) -> Option<(u64, u32)> {
    if m < 2 {
        return None;
    }
    factorize(m).as_prime_power()
}

/// `log p` when `m = p^k`, zero otherwise.
pub fn von_mangoldt(m: u64) -> f64 {
    prime_power(m).map_or(0.0, |(p, _)| (p as f64).ln())
}

/// Binomial coefficient; exact for the ranges this crate uses.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        // c * (n - i) is divisible by (i + 1) at every step
        c = c * (n - i) as u128 / (i + 1) as u128;
    }
    c
}

/// Number of ordered factorizations of `m` into `n` positive factors.
pub fn divisor_dn(m: u64, n: u32) -> u128 {
    assert!(m >= 1 && n >= 1, "divisor_dn needs m >= 1 and n >= 1");
    factorize(m)
        .factors
        .iter()
        .map(|&(_, k)| binomial(k as u64 + n as u64 - 1, n as u64 - 1))
        .product()
}

/// Smallest-prime-factor table for fast repeated factorization up to a limit.
#[derive(Debug, Clone)]
pub struct FactorSieve {
    spf: Vec<u32>,
}

impl FactorSieve {
    pub fn new(limit: u64) -> Result<Self> {
        if limit > SIEVE_CAP {
            return Err(Error::domain(format!(
                "factor sieve limit {limit} exceeds the cap {SIEVE_CAP}"
            )));
        }
        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        let mut primes: Vec<u32> = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                let j = i * p as usize;
                if p > si || j > n {
                    break;
                }
                spf[j] = p;
            }
        }
        Ok(FactorSieve { spf })
    }

    pub fn limit(&self) -> u64 {
        self.spf.len() as u64 - 1
    }

    /// Smallest prime factor of `m` (`2 <= m <= limit`).
    pub fn smallest_factor(&self, m: u64) -> u64 {
        self.spf[m as usize] as u64
    }

    pub fn is_prime(&self, m: u64) -> bool {
        m >= 2 && self.spf[m as usize] as u64 == m
    }

    /// Splits `m` as `(p^e, p, e)` with `p` its smallest prime factor.
    pub fn leading_prime_power(&self, m: u64) -> (u64, u64, u32) {
        let p = self.smallest_factor(m);
        let mut q = 1;
        let mut e = 0;
        let mut rest = m;
        while rest % p == 0 {
            rest /= p;
            q *= p;
            e += 1;
        }
        (q, p, e)
    }

    pub fn factorize(&self, m: u64) -> PrimePowerDecomposition {
        let mut rest = m;
        let mut factors = Vec::new();
        while rest > 1 {
            let (q, p, e) = self.leading_prime_power(rest);
            factors.push((p, e));
            rest /= q;
        }
        PrimePowerDecomposition { m, factors }
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        (2..self.spf.len()).filter(|&i| self.spf[i] as usize == i).map(|i| i as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_prime_trial(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn small_sieve() {
        assert_eq!(sieve_primes(10).unwrap().primes(), &[2, 3, 5, 7]);
        assert_eq!(sieve_primes(2).unwrap().primes(), &[2]);
        assert_eq!(sieve_primes(3).unwrap().primes(), &[2, 3]);
    }

    #[test]
    fn sieve_matches_trial_division() {
        let table = sieve_primes(100).unwrap();
        assert_eq!(table.len(), 25);
        let t = sieve_primes(5000).unwrap();
        let oracle: Vec<u64> = (0..=5000).filter(|&n| is_prime_trial(n)).collect();
        assert_eq!(t.primes(), oracle.as_slice());
        assert_eq!(t.up_to(100).len(), 25);
        assert!(t.contains(4999) && !t.contains(4998));
    }

    #[test]
    fn sieve_rejects_bad_limits() {
        assert!(matches!(sieve_primes(1), Err(Error::Domain(_))));
        assert!(matches!(sieve_primes(0), Err(Error::Domain(_))));
        assert!(sieve_primes(SIEVE_CAP + 1).is_err());
    }

    #[test]
    fn von_mangoldt_examples() {
        assert_eq!(von_mangoldt(8), 2f64.ln());
        assert_eq!(von_mangoldt(6), 0.0);
        assert_eq!(von_mangoldt(97), 97f64.ln());
        assert_eq!(von_mangoldt(1), 0.0);
    }

    #[test]
    fn dn_examples() {
        assert_eq!(divisor_dn(6, 2), 4);
        assert_eq!(divisor_dn(1, 5), 1);
        // ordered triples with product 4
        let brute = (1..=4u64)
            .flat_map(|a| (1..=4u64).map(move |b| (a, b)))
            .filter(|&(a, b)| 4 % (a * b) == 0)
            .count();
        assert_eq!(brute, 6);
        assert_eq!(divisor_dn(4, 3), 6);
    }

    #[test]
    fn d2_is_divisor_count() {
        for m in 1..=10_000u64 {
            let count = (1..=m).filter(|d| m % d == 0).count() as u128;
            assert_eq!(divisor_dn(m, 2), count, "m = {m}");
        }
    }

    #[test]
    fn von_mangoldt_support_is_prime_powers() {
        for m in 1..=3000u64 {
            let single = factorize(m).factors.len() == 1;
            assert_eq!(von_mangoldt(m) > 0.0, single, "m = {m}");
        }
    }

    #[test]
    fn factor_sieve_agrees_with_trial_division() {
        let fs = FactorSieve::new(20_000).unwrap();
        for m in 2..=20_000u64 {
            assert_eq!(fs.factorize(m), factorize(m));
        }
        let primes: Vec<u64> = fs.primes().collect();
        assert_eq!(primes, sieve_primes(20_000).unwrap().primes());
    }

    #[test]
    fn decomposition_invariants() {
        for m in 1..=5000u64 {
            let d = factorize(m);
            assert_eq!(d.product(), m);
            assert!(d.factors.windows(2).all(|w| w[0].0 < w[1].0));
            assert!(d.factors.iter().all(|&(_, e)| e >= 1));
        }
    }
}
