//! Ramanujan's tau function from the q-expansion
//! `Delta = q prod_{k>=1} (1 - q^k)^24`, in exact integer arithmetic.
//!
//! `F = G^24` with `G = prod (1 - q^k)` (Euler's pentagonal series, all
//! coefficients 0 or +-1) satisfies `G F' = 24 G' F`, which gives
//!
//! ```text
//! m F_m = sum_{k >= 1} (25 k - m) G_k F_{m-k}
//! ```
//!
//! The recurrence runs modulo four primes just below 2^38 (every product
//! in the inner loop fits a `u64`), and the residues are recombined with
//! Garner's algorithm into a signed `i128`. `|tau(n)| <= d(n) n^{11/2}`
//! stays far below the combined modulus for every supported `n`.

use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Largest `n` for which `tau(n)` is produced.
pub const TAU_CAP: u64 = 2_100_000;

/// Nonzero coefficients of `prod (1 - q^k)` up to `limit`, as `(k, sign)`.
fn pentagonal_terms(limit: usize) -> Vec<(usize, bool)> {
    let mut terms = Vec::new();
    for j in 1usize.. {
        let a = j * (3 * j - 1) / 2;
        if a > limit {
            break;
        }
        let negative = j % 2 == 1;
        terms.push((a, negative));
        let b = j * (3 * j + 1) / 2;
        if b <= limit {
            terms.push((b, negative));
        }
    }
    terms.sort_unstable();
    terms
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// The four largest primes below 2^38.
fn moduli() -> [u64; 4] {
    let mut out = [0u64; 4];
    let mut candidate = (1u64 << 38) - 1;
    let mut found = 0;
    while found < 4 {
        if is_prime_u64(candidate) {
            out[found] = candidate;
            found += 1;
        }
        candidate -= 2;
    }
    out
}

/// `F_0..F_len-1` of `prod (1 - q^k)^24` modulo `p`.
///
/// The recurrence is evaluated as `m F_m = 25 S_1 - m S_0` with
/// `S_j = sum_k k^j G_k F_{m-k}`; positive and negative `G_k` are kept in
/// separate lists so the inner loops are branch-free.
fn eta24_mod(len: usize, p: u64, terms: &[(usize, bool)]) -> Vec<u64> {
    // inverses of 1..len modulo p
    let mut inv = vec![0u64; len.max(2)];
    inv[1] = 1;
    for i in 2..len {
        inv[i] = mul_mod(p - p / i as u64, inv[(p % i as u64) as usize], p);
    }
    let plus_k: Vec<usize> = terms.iter().filter(|t| !t.1).map(|t| t.0).collect();
    let minus_k: Vec<usize> = terms.iter().filter(|t| t.1).map(|t| t.0).collect();
    let pm = p as u128;
    let mut f = vec![0u64; len];
    f[0] = 1;
    for m in 1..len {
        let sums = |ks: &[usize]| -> (u128, u128) {
            let mut s0: u128 = 0;
            let mut s1: u128 = 0;
            for &k in ks.iter().take_while(|&&k| k <= m) {
                let v = f[m - k];
                s0 += v as u128;
                s1 += (k as u64 * v) as u128;
            }
            (s0, s1)
        };
        let (p0, p1) = sums(&plus_k);
        let (n0, n1) = sums(&minus_k);
        let s0 = (p0 % pm + pm - n0 % pm) % pm;
        let s1 = (p1 % pm + pm - n1 % pm) % pm;
        let rhs = (25 * s1 + pm * m as u128 - (m as u128 % pm) * s0 % pm) % pm;
        f[m] = mul_mod(rhs as u64, inv[m], p);
    }
    f
}

/// Garner reconstruction with a balanced top digit.
fn reconstruct(residues: [u64; 4], primes: &[u64; 4]) -> i128 {
    let [p0, p1, p2, p3] = *primes;
    let d0 = residues[0];
    let d1 = mul_mod((residues[1] + p1 - d0 % p1) % p1, pow_mod(p0 % p1, p1 - 2, p1), p1);
    // partial value d0 + d1 p0 < p0 p1
    let x01 = d0 as u128 + d1 as u128 * p0 as u128;
    let q01 = p0 as u128 * p1 as u128;
    let d2 = mul_mod(
        ((residues[2] as u128 + p2 as u128 - x01 % p2 as u128) % p2 as u128) as u64,
        pow_mod((q01 % p2 as u128) as u64, p2 - 2, p2),
        p2,
    );
    let x012 = x01 + d2 as u128 * q01;
    let q012 = q01 * p2 as u128;
    let d3 = mul_mod(
        ((residues[3] as u128 + p3 as u128 - x012 % p3 as u128) % p3 as u128) as u64,
        pow_mod((q012 % p3 as u128) as u64, p3 - 2, p3),
        p3,
    );
    let top = if d3 > p3 / 2 { d3 as i128 - p3 as i128 } else { d3 as i128 };
    x012 as i128 + top * q012 as i128
}

/// `tau(1), .., tau(limit)`; entry `i` holds `tau(i + 1)`.
pub fn tau_coefficients(limit: u64) -> Result<Vec<i128>> {
    if limit == 0 {
        return Ok(Vec::new());
    }
    if limit > TAU_CAP {
        return Err(Error::Capacity(format!(
            "tau requested up to {limit}, exact reconstruction is supported up to {TAU_CAP}"
        )));
    }
    let len = limit as usize;
    let terms = pentagonal_terms(len);
    let primes = moduli();
    let per_prime: Vec<Vec<u64>> = primes.par_iter().map(|&p| eta24_mod(len, p, &terms)).collect();
    Ok((0..len)
        .map(|i| reconstruct([per_prime[0][i], per_prime[1][i], per_prime[2][i], per_prime[3][i]], &primes))
        .collect())
}

static CACHE: Mutex<Option<Arc<Vec<i128>>>> = Mutex::new(None);

/// Shared, grow-only cache of `tau_coefficients`.
pub fn cached_tau(limit: u64) -> Result<Arc<Vec<i128>>> {
    let mut guard = CACHE.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(table) = guard.as_ref() {
        if table.len() as u64 >= limit {
            return Ok(Arc::clone(table));
        }
    }
    let table = Arc::new(tau_coefficients(limit.max(1024))?);
    *guard = Some(Arc::clone(&table));
    Ok(table)
}

/// `tau(p) / p^{11/2}`.
pub fn normalized_tau(tau_p: i128, p: u64) -> f64 {
    tau_p as f64 / (p as f64).powf(5.5)
}

/// Roots of `X^2 - a X + 1` for `|a| <= 2`: the conjugate pair on the unit circle.
pub fn delta_satake_pair(a: f64) -> [Complex64; 2] {
    let half = (a / 2.0).clamp(-1.0, 1.0);
    let im = (1.0 - half * half).max(0.0).sqrt();
    [Complex64::new(half, im), Complex64::new(half, -im)]
}
