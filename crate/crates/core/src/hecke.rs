//! Global coefficient tables `A(m,1,..,1)` and `Lambda_f(m)`, plus general
//! prime-power tuple coefficients `A(p^{k_1},..,p^{k_{n-1}})`.
//!
//! On prime powers `A(p^k,1,..,1) = h_k(alpha)`, the complete homogeneous
//! symmetric polynomial (the coefficients of the expanded Euler factor).
//! A general tuple coefficient is the Schur polynomial of the partition
//! `lambda_i = k_i + .. + k_{n-1}`, evaluated by the Jacobi–Trudi
//! determinant in the `h_k`. [`verify_hecke_relation`] checks that choice
//! against the Hecke multiplicative relation term by term.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{divisor_dn, FactorSieve};
use crate::error::{Error, Result};
use crate::form::FormSpec;
use crate::satake::{power_sum, SatakeLocal};
use crate::tolerance::{Tolerances, TABLE_CAP};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `h_0 = 1, h_1, .., h_kmax` of the local roots, i.e. `A(p^k,1,..,1)`.
pub fn local_a_powers(s: &SatakeLocal, kmax: usize) -> Vec<Complex64> {
    let e = s.elementary_symmetric();
    complete_homogeneous(&e, kmax)
}

/// `h_k = sum_{j=1}^{min(k,n)} (-1)^{j-1} e_j h_{k-j}`.
pub fn complete_homogeneous(e: &[Complex64], kmax: usize) -> Vec<Complex64> {
    let n = e.len() - 1;
    let mut h = Vec::with_capacity(kmax + 1);
    h.push(ONE);
    for k in 1..=kmax {
        let mut acc = ZERO;
        for j in 1..=k.min(n) {
            let term = e[j] * h[k - j];
            if j % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        h.push(acc);
    }
    h
}

/// Dense `A(m,1,..,1)` for `1 <= m <= limit`, and `Lambda_f` on prime powers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientTable {
    pub form_id: String,
    pub degree: usize,
    pub limit: u64,
    /// Index `m` holds `A(m)`; index 0 is unused.
    a: Vec<Complex64>,
    /// `(m, Lambda_f(m))` for prime powers `m <= limit`, ascending.
    lambda: Vec<(u64, Complex64)>,
    /// `max |alpha_{p,i}|` over the primes covered.
    pub max_root_modulus: f64,
    /// `max log|alpha_{p,i}| / log p` (at least 0), so `|alpha| <= p^theta`.
    pub root_exponent: f64,
}

impl CoefficientTable {
    pub fn a(&self, m: u64) -> Complex64 {
        self.a[m as usize]
    }

    pub fn a_values(&self) -> &[Complex64] {
        &self.a[1..]
    }

    /// `Lambda_f(m)`; zero off prime powers.
    pub fn lambda_f(&self, m: u64) -> Complex64 {
        self.lambda
            .binary_search_by_key(&m, |&(k, _)| k)
            .map_or(ZERO, |i| self.lambda[i].1)
    }

    pub fn lambda_terms(&self) -> &[(u64, Complex64)] {
        &self.lambda
    }

    /// Prime-power terms with `m <= bound`.
    pub fn lambda_terms_up_to(&self, bound: u64) -> &[(u64, Complex64)] {
        let end = self.lambda.partition_point(|&(m, _)| m <= bound);
        &self.lambda[..end]
    }

    /// A table with every `Lambda_f` zero (and `A = 1` at `m = 1` only).
    pub fn zero(limit: u64) -> Self {
        let mut a = vec![ZERO; limit as usize + 1];
        if limit >= 1 {
            a[1] = ONE;
        }
        CoefficientTable { form_id: "zero".into(), degree: 0, limit, a, lambda: Vec::new(), max_root_modulus: 0.0, root_exponent: 0.0 }
    }

    /// `L = zeta^n` for any `n >= 1`: `A(m) = d_n(m)`, `Lambda_f = n Lambda`.
    pub fn zeta_power(n: u32, limit: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("zeta power needs n >= 1"));
        }
        check_limit(limit)?;
        let sieve = FactorSieve::new(limit.max(2))?;
        let mut a = vec![ZERO; limit as usize + 1];
        let mut lambda = Vec::new();
        for m in 1..=limit {
            a[m as usize] = Complex64::new(divisor_dn(m, n) as f64, 0.0);
            if m >= 2 {
                let (q, p, _) = sieve.leading_prime_power(m);
                if q == m {
                    lambda.push((m, Complex64::new(n as f64 * (p as f64).ln(), 0.0)));
                }
            }
        }
        Ok(CoefficientTable {
            form_id: format!("zeta^{n}"),
            degree: n as usize,
            limit,
            a,
            lambda,
            max_root_modulus: 1.0,
            root_exponent: 0.0,
        })
    }

    pub fn max_imaginary(&self) -> f64 {
        let a_im = self.a.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        let l_im = self.lambda.iter().map(|(_, z)| z.im.abs()).fold(0.0, f64::max);
        a_im.max(l_im)
    }
}

fn check_limit(limit: u64) -> Result<()> {
    if limit == 0 {
        return Err(Error::domain("table limit must be >= 1"));
    }
    if limit > TABLE_CAP {
        return Err(Error::domain(format!("table limit {limit} exceeds the cap {TABLE_CAP}")));
    }
    Ok(())
}

/// Builds `A` on prime powers from the local Euler factors and extends it to
/// all `m <= limit` by multiplicativity.
pub fn build_coefficient_table(form: &FormSpec, limit: u64, tol: &Tolerances) -> Result<CoefficientTable> {
    check_limit(limit)?;
    let locals = form.local_data(limit, tol)?;
    let sieve = FactorSieve::new(limit.max(2))?;

    // per prime: [(p^k, A(p^k), Lambda_f(p^k))] for k >= 1
    let per_prime: Vec<Vec<(u64, Complex64, Complex64)>> = locals
        .entries
        .par_iter()
        .map(|s| {
            let p = s.p();
            let mut powers = Vec::new();
            let mut q = p;
            loop {
                powers.push(q);
                match q.checked_mul(p) {
                    Some(next) if next <= limit => q = next,
                    _ => break,
                }
            }
            let h = local_a_powers(s, powers.len());
            let log_p = (p as f64).ln();
            powers
                .iter()
                .enumerate()
                .map(|(i, &q)| (q, h[i + 1], power_sum(s, i as u32 + 1) * log_p))
                .collect()
        })
        .collect();

    let mut a = vec![ZERO; limit as usize + 1];
    a[1] = ONE;
    let mut lambda = Vec::new();
    for entries in &per_prime {
        for &(q, value, lam) in entries {
            a[q as usize] = value;
            lambda.push((q, lam));
        }
    }
    lambda.sort_unstable_by_key(|&(m, _)| m);

    for m in 2..=limit {
        let (q, _, _) = sieve.leading_prime_power(m);
        if q != m {
            a[m as usize] = a[q as usize] * a[(m / q) as usize];
        }
    }

    let max_root_modulus = locals.entries.iter().map(SatakeLocal::max_modulus).fold(0.0, f64::max);
    let root_exponent = locals
        .entries
        .iter()
        .map(|s| s.max_modulus().ln() / (s.p() as f64).ln())
        .fold(0.0, f64::max);
    Ok(CoefficientTable {
        form_id: form.name.clone(),
        degree: form.degree,
        limit,
        a,
        lambda,
        max_root_modulus,
        root_exponent,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TupleCoefficient {
    pub p: u64,
    pub exponents: Vec<u32>,
    pub value: Complex64,
}

/// Determinant by Gaussian elimination with partial pivoting.
fn determinant(mut m: Vec<Vec<Complex64>>) -> Complex64 {
    let n = m.len();
    let mut det = ONE;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| m[a][col].norm().total_cmp(&m[b][col].norm()))
            .expect("non-empty");
        if m[pivot][col].norm() == 0.0 {
            return ZERO;
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= m[col][col];
        for row in col + 1..n {
            let factor = m[row][col] / m[col][col];
            for k in col..n {
                let sub = factor * m[col][k];
                m[row][k] -= sub;
            }
        }
    }
    det
}

/// Partition `lambda_i = k_i + .. + k_{n-1}` attached to an exponent tuple.
pub fn partition_of(exponents: &[u32]) -> Vec<u32> {
    let mut lambda = vec![0; exponents.len()];
    let mut acc = 0;
    for i in (0..exponents.len()).rev() {
        acc += exponents[i];
        lambda[i] = acc;
    }
    lambda
}

fn schur_from_h(h: &[Complex64], lambda: &[u32]) -> Complex64 {
    let len = lambda.len();
    if lambda.iter().all(|&l| l == 0) {
        return ONE;
    }
    let matrix = (0..len)
        .map(|i| {
            (0..len)
                .map(|j| {
                    let idx = lambda[i] as i64 - i as i64 + j as i64;
                    if idx < 0 {
                        ZERO
                    } else {
                        h[idx as usize]
                    }
                })
                .collect()
        })
        .collect();
    determinant(matrix)
}

fn check_exponents(s: &SatakeLocal, exponents: &[u32]) -> Result<()> {
    if exponents.len() + 1 != s.degree() {
        return Err(Error::domain(format!(
            "degree-{} local data needs {} exponents, got {}",
            s.degree(),
            s.degree() - 1,
            exponents.len()
        )));
    }
    Ok(())
}

/// `A(p^{k_1}, .., p^{k_{n-1}})`.
pub fn tuple_coefficient(s: &SatakeLocal, exponents: &[u32]) -> Result<TupleCoefficient> {
    check_exponents(s, exponents)?;
    let lambda = partition_of(exponents);
    let hmax = lambda.first().copied().unwrap_or(0) as usize + lambda.len();
    let h = local_a_powers(s, hmax);
    Ok(TupleCoefficient { p: s.p(), exponents: exponents.to_vec(), value: schur_from_h(&h, &lambda) })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationCheck {
    pub lhs: Complex64,
    pub rhs: Complex64,
    /// Number of `(c_1,..,c_n)` tuples in the right-hand sum.
    pub terms: usize,
    pub residual: f64,
}

/// All `b in N^n` with `sum b = total` and `b_l <= caps[l]` for `l < n-1`.
fn divisor_splits(total: u32, caps: &[u32], n: usize) -> Vec<Vec<u32>> {
    fn rec(slot: usize, left: u32, caps: &[u32], n: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slot == n - 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for b in 0..=left.min(caps[slot]) {
            cur.push(b);
            rec(slot + 1, left - b, caps, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, total, caps, n, &mut Vec::with_capacity(n), &mut out);
    out
}

/// Checks
/// `A(m,1,..,1) A(m_1,..,m_{n-1}) = sum A(m_1 c_n/c_1, m_2 c_1/c_2, .., m_{n-1} c_{n-2}/c_{n-1})`
/// over `c_1 .. c_n = m` with `c_l | m_l`, at `m = p^a` and `m_l = p^{k_l}`.
pub fn verify_hecke_relation(s: &SatakeLocal, m: u64, exponents: &[u32]) -> Result<RelationCheck> {
    check_exponents(s, exponents)?;
    let p = s.p();
    let a = exponent_of(m, p).ok_or_else(|| Error::domain(format!("{m} is not a power of {p}")))?;
    let n = s.degree();
    let lhs = local_a_powers(s, a as usize)[a as usize] * tuple_coefficient(s, exponents)?.value;

    let splits = divisor_splits(a, exponents, n);
    let mut rhs = ZERO;
    for b in &splits {
        let mut shifted = Vec::with_capacity(n - 1);
        shifted.push(exponents[0] + b[n - 1] - b[0]);
        for j in 1..n - 1 {
            shifted.push(exponents[j] + b[j - 1] - b[j]);
        }
        rhs += tuple_coefficient(s, &shifted)?.value;
    }
    Ok(RelationCheck { lhs, rhs, terms: splits.len(), residual: (lhs - rhs).norm() })
}

fn exponent_of(m: u64, p: u64) -> Option<u32> {
    let mut rest = m;
    let mut e = 0;
    while rest > 1 {
        if rest % p != 0 {
            return None;
        }
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some(e)
}

/// `|A(reversed exponents) - conj(A(exponents))|`.
pub fn dual_symmetry_check(s: &SatakeLocal, exponents: &[u32]) -> Result<f64> {
    let forward = tuple_coefficient(s, exponents)?.value;
    let reversed: Vec<u32> = exponents.iter().rev().copied().collect();
    let backward = tuple_coefficient(s, &reversed)?.value;
    Ok((backward - forward.conj()).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::satake::hecke_from_alphas;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ones(n: usize) -> SatakeLocal {
        SatakeLocal::new(2, vec![ONE; n], &Tolerances::DEFAULT).unwrap()
    }

    #[test]
    fn h_for_trivial_roots_is_dn() {
        let h = local_a_powers(&ones(2), 8);
        for (k, v) in h.iter().enumerate() {
            assert_eq!(*v, c(k as f64 + 1.0, 0.0));
        }
    }

    #[test]
    fn h_for_plus_minus_i() {
        let s = SatakeLocal::new(3, vec![c(0.0, 1.0), c(0.0, -1.0)], &Tolerances::DEFAULT).unwrap();
        let h = local_a_powers(&s, 8);
        let expected = [1.0, 0.0, -1.0, 0.0, 1.0, 0.0, -1.0, 0.0, 1.0];
        for (v, e) in h.iter().zip(expected) {
            assert_eq!(*v, c(e, 0.0));
        }
    }

    #[test]
    fn tuple_coefficient_basics() {
        let w = Complex64::from_polar(1.0, 0.9);
        let s = SatakeLocal::new(5, vec![w, w.conj(), ONE], &Tolerances::DEFAULT).unwrap();
        assert_eq!(tuple_coefficient(&s, &[0, 0]).unwrap().value, ONE);
        let h1 = local_a_powers(&s, 1)[1];
        assert!((tuple_coefficient(&s, &[1, 0]).unwrap().value - h1).norm() < 1e-15);
        let e2 = hecke_from_alphas(&s).values[1];
        assert!((tuple_coefficient(&s, &[0, 1]).unwrap().value - e2).norm() < 1e-14);
        assert!(tuple_coefficient(&s, &[1]).is_err());
    }

    #[test]
    fn relation_examples() {
        let w = Complex64::from_polar(1.0, 2.1);
        let s3 = SatakeLocal::new(7, vec![w, w.conj(), ONE], &Tolerances::DEFAULT).unwrap();
        let chk = verify_hecke_relation(&s3, 7, &[1, 0]).unwrap();
        assert_eq!(chk.terms, 2);
        assert!(chk.residual < 1e-12);

        let s2 = SatakeLocal::new(3, vec![w, w.conj()], &Tolerances::DEFAULT).unwrap();
        let chk = verify_hecke_relation(&s2, 3, &[1]).unwrap();
        let h = local_a_powers(&s2, 2);
        assert!((chk.lhs - h[1] * h[1]).norm() < 1e-15);
        assert!((chk.rhs - (h[2] + ONE)).norm() < 1e-14);

        let trivial = verify_hecke_relation(&s3, 1, &[2, 1]).unwrap();
        assert_eq!(trivial.terms, 1);
        assert_eq!(trivial.residual, 0.0);
        assert!(verify_hecke_relation(&s3, 6, &[0, 0]).is_err());
    }

    #[test]
    fn dual_symmetry_examples() {
        let w = Complex64::from_polar(1.0, 0.4);
        let s = SatakeLocal::new(2, vec![w, w.conj(), ONE], &Tolerances::DEFAULT).unwrap();
        assert!(dual_symmetry_check(&s, &[2, 1]).unwrap() < 1e-12);
        assert!(dual_symmetry_check(&ones(4), &[3, 0, 1]).unwrap() < 1e-10);
        assert!(tuple_coefficient(&s, &[2, 2]).unwrap().value.im.abs() < 1e-12);
    }

    #[test]
    fn zero_table_has_no_lambda() {
        let t = CoefficientTable::zero(50);
        assert!(t.lambda_terms().is_empty());
        assert_eq!(t.a(1), ONE);
    }

    #[test]
    fn zeta_power_matches_all_ones_table() {
        let from_form = build_coefficient_table(&FormSpec::all_ones(3), 2000, &Tolerances::DEFAULT).unwrap();
        let direct = CoefficientTable::zeta_power(3, 2000).unwrap();
        for m in 1..=2000 {
            assert_eq!(from_form.a(m), direct.a(m), "m = {m}");
            assert!((from_form.lambda_f(m) - direct.lambda_f(m)).norm() < 1e-12);
        }
    }

    #[test]
    fn bad_limits() {
        assert!(build_coefficient_table(&FormSpec::all_ones(2), 0, &Tolerances::DEFAULT).is_err());
        assert!(build_coefficient_table(&FormSpec::all_ones(2), TABLE_CAP + 1, &Tolerances::DEFAULT).is_err());
    }
}
