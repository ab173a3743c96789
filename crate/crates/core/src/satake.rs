//! Local data at one prime: the Satake roots `alpha_{p,i}`, the Hecke
//! eigenvalues `A(1,..,p,..,1)` (elementary symmetric functions of the
//! roots), power sums `a_f(p^r)`, and the Ramanujan-type bound predicates.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roots::aberth_roots;
use crate::tolerance::{Tolerances, BOUND_SLACK};

/// The `n` Satake roots at the prime `p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SatakeLocal {
    p: u64,
    alphas: Vec<Complex64>,
}

impl SatakeLocal {
    /// Validates degree `>= 2` and `prod alphas = 1` within `tol.invariant`.
    pub fn new(p: u64, alphas: Vec<Complex64>, tol: &Tolerances) -> Result<Self> {
        if alphas.len() < 2 {
            return Err(Error::InvalidLocal {
                p,
                reason: format!("degree {} < 2", alphas.len()),
            });
        }
        if let Some(bad) = alphas.iter().find(|a| !(a.re.is_finite() && a.im.is_finite())) {
            return Err(Error::InvalidLocal { p, reason: format!("non-finite root {bad}") });
        }
        let product: Complex64 = alphas.iter().product();
        let deviation = (product - 1.0).norm();
        if deviation > tol.invariant {
            return Err(Error::InvalidLocal {
                p,
                reason: format!("product of roots is {product}, off from 1 by {deviation:e}"),
            });
        }
        Ok(SatakeLocal { p, alphas })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.alphas.len()
    }

    pub fn alphas(&self) -> &[Complex64] {
        &self.alphas
    }

    /// The root multiset is closed under conjugation within `tol`.
    pub fn is_conjugation_closed(&self, tol: f64) -> bool {
        let conj: Vec<Complex64> = self.alphas.iter().map(|a| a.conj()).collect();
        multiset_distance(&self.alphas, &conj) <= tol
    }

    pub fn max_modulus(&self) -> f64 {
        self.alphas.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.alphas.iter().all(|a| (a.norm() - 1.0).abs() <= tol)
    }

    /// `e_0, .., e_n` of the roots.
    pub fn elementary_symmetric(&self) -> Vec<Complex64> {
        elementary_symmetric(&self.alphas)
    }
}

/// `A(1,..,1,p,1,..,1)` with `p` in slot `j`, for `j = 1..n-1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeckeEigenvalueVector {
    pub p: u64,
    pub values: Vec<Complex64>,
}

impl HeckeEigenvalueVector {
    pub fn degree(&self) -> usize {
        self.values.len() + 1
    }

    /// `max_j |A_j - conj(A_{n-j})|`, zero for self-dual data.
    pub fn dual_asymmetry(&self) -> f64 {
        let v = &self.values;
        let k = v.len();
        (0..k).map(|j| (v[j] - v[k - 1 - j].conj()).norm()).fold(0.0, f64::max)
    }

    /// Ascending coefficients of
    /// `X^n + sum_j (-1)^j A_j X^{n-j} + (-1)^n`.
    pub fn characteristic_polynomial(&self) -> Vec<Complex64> {
        let n = self.degree();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        coeffs[n] = Complex64::new(1.0, 0.0);
        for (idx, a) in self.values.iter().enumerate() {
            let j = idx + 1;
            coeffs[n - j] = sign(j) * a;
        }
        coeffs[0] = Complex64::new(sign(n), 0.0);
        coeffs
    }
}

fn sign(j: usize) -> f64 {
    if j % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Ascending coefficients of `prod (X - r)`.
pub fn poly_from_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    for &r in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
        for (k, &c) in coeffs.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= r * c;
        }
        coeffs = next;
    }
    coeffs
}

/// `e_0 = 1, e_1, .., e_n` of `roots`.
pub fn elementary_symmetric(roots: &[Complex64]) -> Vec<Complex64> {
    let mut e = vec![Complex64::new(0.0, 0.0); roots.len() + 1];
    e[0] = Complex64::new(1.0, 0.0);
    for (count, &r) in roots.iter().enumerate() {
        for j in (1..=count + 1).rev() {
            let prev = e[j - 1];
            e[j] += r * prev;
        }
    }
    e
}

/// Greedy nearest matching distance between two multisets of equal size.
pub fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for x in a {
        let (best, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|u, v| u.1.total_cmp(&v.1))
            .expect("equal lengths");
        used[best] = true;
        worst = worst.max(d);
    }
    worst
}

/// Roots of the local Hecke polynomial. Nearly coincident roots are only
/// determined to about `eps / separation`, so the recovered multiset is
/// checked against the residual tolerance rather than the invariant one.
pub fn alphas_from_hecke(h: &HeckeEigenvalueVector, tol: &Tolerances) -> Result<SatakeLocal> {
    if h.values.is_empty() {
        return Err(Error::InvalidLocal { p: h.p, reason: "degree < 2".into() });
    }
    let coeffs = h.characteristic_polynomial();
    let out = aberth_roots(&coeffs, tol.root_iterations, tol.residual)?;
    let recovered = Tolerances { invariant: tol.invariant.max(tol.residual), ..*tol };
    SatakeLocal::new(h.p, out.roots, &recovered)
}

pub fn hecke_from_alphas(s: &SatakeLocal) -> HeckeEigenvalueVector {
    let e = s.elementary_symmetric();
    let n = s.degree();
    HeckeEigenvalueVector { p: s.p, values: e[1..n].to_vec() }
}

/// `a_f(p^r) = sum_i alpha_i^r`.
pub fn power_sum(s: &SatakeLocal, r: u32) -> Complex64 {
    s.alphas.iter().map(|a| a.powu(r)).sum()
}

/// Power sums `p_1..p_rmax` from the elementary symmetric functions via
/// Newton's identities.
pub fn newton_power_sums(e: &[Complex64], rmax: u32) -> Vec<Complex64> {
    let n = e.len() - 1;
    let e_at = |j: usize| if j <= n { e[j] } else { Complex64::new(0.0, 0.0) };
    let mut p: Vec<Complex64> = Vec::with_capacity(rmax as usize + 1);
    p.push(Complex64::new(n as f64, 0.0));
    for r in 1..=rmax as usize {
        let mut acc = sign(r - 1) * r as f64 * e_at(r);
        for j in 1..r {
            acc += sign(j - 1) * e_at(j) * p[r - j];
        }
        p.push(acc);
    }
    p.remove(0);
    p
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSumCheck {
    pub direct: Complex64,
    pub newton: Complex64,
    pub discrepancy: f64,
}

/// Computes `a_f(p^r)` both directly and through Newton's identities.
pub fn power_sum_checked(s: &SatakeLocal, r: u32) -> PowerSumCheck {
    let direct = power_sum(s, r);
    let newton = newton_power_sums(&s.elementary_symmetric(), r)[r as usize - 1];
    PowerSumCheck { direct, newton, discrepancy: (direct - newton).norm() }
}

/// `theta_n`: the best known exponent in `|alpha_{p,i}| <= p^theta_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaBound {
    pub n: u32,
    pub numer: u64,
    pub denom: u64,
}

impl ThetaBound {
    pub fn value(&self) -> f64 {
        self.numer as f64 / self.denom as f64
    }
}

pub fn theta_bound(n: u32) -> Result<ThetaBound> {
    let (numer, denom) = match n {
        0 | 1 => return Err(Error::domain(format!("theta bound needs n >= 2, got {n}"))),
        2 => (7, 64),
        3 => (5, 14),
        4 => (9, 22),
        _ => {
            // 1/2 - 1/(n^2 + 1) = (n^2 - 1) / (2 (n^2 + 1))
            let q = n as u64 * n as u64 + 1;
            let (a, b) = (q - 2, 2 * q);
            let g = gcd(a, b);
            (a / g, b / g)
        }
    };
    Ok(ThetaBound { n, numer, denom })
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub holds: bool,
    pub worst_index: usize,
    pub worst_modulus: f64,
    /// `p^theta`.
    pub threshold: f64,
}

/// Whether `max_i |alpha_i| <= p^theta` (with a relative slack of 1e-12).
pub fn check_bound(s: &SatakeLocal, theta: f64) -> BoundCheck {
    let threshold = (s.p as f64).powf(theta);
    let (worst_index, worst_modulus) = s
        .alphas
        .iter()
        .map(|a| a.norm())
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("degree >= 2");
    BoundCheck {
        holds: worst_modulus <= threshold * (1.0 + BOUND_SLACK),
        worst_index,
        worst_modulus,
        threshold,
    }
}

/// The weak Ramanujan hypothesis `|alpha| <= p^{1/4 - eps1}` at one prime.
pub fn check_weak_ramanujan(s: &SatakeLocal, eps1: f64) -> BoundCheck {
    check_bound(s, 0.25 - eps1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn tol() -> Tolerances {
        Tolerances::DEFAULT
    }

    #[test]
    fn roots_of_small_hecke_vectors() {
        let two_ones = alphas_from_hecke(&HeckeEigenvalueVector { p: 2, values: vec![c(2.0, 0.0)] }, &tol()).unwrap();
        assert!(multiset_distance(two_ones.alphas(), &[c(1.0, 0.0), c(1.0, 0.0)]) < 1e-12);

        let three = alphas_from_hecke(&HeckeEigenvalueVector { p: 3, values: vec![c(3.0, 0.0), c(3.0, 0.0)] }, &tol())
            .unwrap();
        assert!(multiset_distance(three.alphas(), &[c(1.0, 0.0); 3]) < 1e-12);

        let rot = alphas_from_hecke(&HeckeEigenvalueVector { p: 5, values: vec![c(0.0, 0.0)] }, &tol()).unwrap();
        assert!(multiset_distance(rot.alphas(), &[c(0.0, 1.0), c(0.0, -1.0)]) < 1e-14);
    }

    #[test]
    fn hecke_from_simple_roots() {
        let s = SatakeLocal::new(2, vec![c(1.0, 0.0); 3], &tol()).unwrap();
        assert_eq!(hecke_from_alphas(&s).values, vec![c(3.0, 0.0), c(3.0, 0.0)]);
        let s = SatakeLocal::new(2, vec![c(0.0, 1.0), c(0.0, -1.0)], &tol()).unwrap();
        assert_eq!(hecke_from_alphas(&s).values, vec![c(0.0, 0.0)]);
    }

    #[test]
    fn power_sum_examples() {
        let theta = 0.7;
        let s = SatakeLocal::new(7, vec![Complex64::from_polar(1.0, theta), Complex64::from_polar(1.0, -theta)], &tol())
            .unwrap();
        let a2 = power_sum(&s, 2);
        assert!((a2 - c(2.0 * (2.0 * theta).cos(), 0.0)).norm() < 1e-14);
        let a1 = power_sum(&s, 1);
        assert!((a2 - (a1 * a1 - 2.0)).norm() < 1e-14);

        let ones = SatakeLocal::new(2, vec![c(1.0, 0.0); 4], &tol()).unwrap();
        for r in 1..10 {
            assert_eq!(power_sum(&ones, r), c(4.0, 0.0));
        }

        let w = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        let cube = SatakeLocal::new(3, vec![c(1.0, 0.0), w, w.conj()], &tol()).unwrap();
        assert!((power_sum(&cube, 3) - c(3.0, 0.0)).norm() < 1e-13);
        assert!(power_sum_checked(&cube, 3).discrepancy < 1e-13);
    }

    #[test]
    fn theta_table() {
        assert_eq!(theta_bound(2).unwrap(), ThetaBound { n: 2, numer: 7, denom: 64 });
        assert_eq!(theta_bound(3).unwrap(), ThetaBound { n: 3, numer: 5, denom: 14 });
        assert_eq!(theta_bound(4).unwrap(), ThetaBound { n: 4, numer: 9, denom: 22 });
        let t5 = theta_bound(5).unwrap();
        assert_eq!((t5.numer, t5.denom), (6, 13));
        assert!((t5.value() - (0.5 - 1.0 / 26.0)).abs() < 1e-15);
        for n in 5..40 {
            let t = theta_bound(n).unwrap().value();
            assert!((t - (0.5 - 1.0 / (n * n + 1) as f64)).abs() < 1e-15);
        }
        assert!(theta_bound(1).is_err());
    }

    #[test]
    fn bound_predicate_examples() {
        let unit = SatakeLocal::new(11, vec![c(0.6, 0.8), c(0.6, -0.8)], &tol()).unwrap();
        assert!(check_bound(&unit, 0.0).holds);

        let bad = SatakeLocal::new(2, vec![c(2.0, 0.0), c(0.5, 0.0)], &tol()).unwrap();
        let chk = check_bound(&bad, 7.0 / 64.0);
        assert!(!chk.holds);
        assert_eq!(chk.worst_index, 0);
        assert_eq!(chk.worst_modulus, 2.0);

        let q = 5f64.powf(0.25);
        let edge = SatakeLocal::new(5, vec![c(q, 0.0), c(1.0 / q, 0.0)], &tol()).unwrap();
        assert!(check_bound(&edge, 0.25).holds);
    }

    #[test]
    fn product_invariant_is_enforced() {
        let err = SatakeLocal::new(2, vec![c(1.01, 0.0), c(1.0, 0.0)], &tol()).unwrap_err();
        assert!(matches!(err, Error::InvalidLocal { p: 2, .. }));
        assert!(SatakeLocal::new(2, vec![c(1.0, 0.0)], &tol()).is_err());
    }

    #[test]
    fn dual_asymmetry_of_self_dual_data() {
        let w = Complex64::from_polar(1.0, 1.1);
        let s = SatakeLocal::new(2, vec![w, w.conj(), c(1.0, 0.0)], &tol()).unwrap();
        assert!(s.is_conjugation_closed(1e-12));
        assert!(hecke_from_alphas(&s).dual_asymmetry() < 1e-14);
    }
}
