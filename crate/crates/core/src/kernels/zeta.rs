//! Riemann zeta and its first derivative by Euler–Maclaurin summation with
//! `N = ceil(10 + |Im s|)` leading terms and corrections through `B_12`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sum::ComplexKahanSum;

/// `B_{2j} / (2j)!` for `j = 1..=6`.
const BERNOULLI_OVER_FACTORIAL: [f64; 6] = [
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40_320.0,
    5.0 / 66.0 / 3_628_800.0,
    -691.0 / 2730.0 / 479_001_600.0,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZetaOrder {
    Value,
    Derivative,
}

pub fn leading_terms(s: Complex64) -> u64 {
    (10.0 + s.im.abs()).ceil() as u64
}

/// `zeta(s)` or `zeta'(s)` for `Re s > -1`, `s != 1`.
pub fn zeta_em(s: Complex64, order: ZetaOrder) -> Result<Complex64> {
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::domain("zeta has a pole at s = 1"));
    }
    if s.re <= -1.0 {
        return Err(Error::domain(format!("Euler-Maclaurin evaluation needs Re s > -1, got {s}")));
    }
    let n = leading_terms(s);
    let nf = n as f64;
    let ln_n = nf.ln();
    let one = Complex64::new(1.0, 0.0);
    let derivative = order == ZetaOrder::Derivative;

    let mut acc = ComplexKahanSum::new();
    for k in 1..n {
        let ln_k = (k as f64).ln();
        let term = (-s * ln_k).exp();
        acc.add(if derivative { -ln_k * term } else { term });
    }

    let n_pow = (-s * ln_n).exp(); // N^{-s}
    let tail = nf * n_pow / (s - one); // N^{1-s} / (s - 1)
    if derivative {
        acc.add(-ln_n * tail - tail / (s - one));
        acc.add(-ln_n * n_pow * 0.5);
    } else {
        acc.add(tail);
        acc.add(n_pow * 0.5);
    }

    // corrections B_{2j}/(2j)! * s(s+1)..(s+2j-2) * N^{-s-2j+1}
    let mut rising = s; // s(s+1)..(s+2j-2), starting at j = 1
    let mut rising_prime = one; // its derivative in s
    let mut n_factor = n_pow / nf; // N^{-s-1}
    for (j, &coef) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        if j > 0 {
            for extra in [2 * j - 1, 2 * j] {
                let f = s + extra as f64;
                rising_prime = rising_prime * f + rising;
                rising *= f;
            }
            n_factor /= nf * nf;
        }
        if derivative {
            acc.add(coef * (rising_prime - ln_n * rising) * n_factor);
        } else {
            acc.add(coef * rising * n_factor);
        }
    }
    Ok(acc.value())
}

pub fn zeta(s: Complex64) -> Result<Complex64> {
    zeta_em(s, ZetaOrder::Value)
}

pub fn zeta_prime(s: Complex64) -> Result<Complex64> {
    zeta_em(s, ZetaOrder::Derivative)
}

pub fn zeta_real(s: f64) -> Result<f64> {
    Ok(zeta(Complex64::new(s, 0.0))?.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn even_values() {
        assert!((zeta_real(2.0).unwrap() - PI * PI / 6.0).abs() < 1e-12);
        assert!((zeta_real(4.0).unwrap() - PI.powi(4) / 90.0).abs() < 1e-12);
    }

    #[test]
    fn pole_and_domain() {
        assert!(zeta(Complex64::new(1.0, 0.0)).is_err());
        assert!(zeta(Complex64::new(-1.5, 3.0)).is_err());
        assert!(zeta(Complex64::new(1.0, 1e-3)).is_ok());
    }

    #[test]
    fn derivative_matches_finite_difference() {
        for s in [Complex64::new(0.75, 14.0), Complex64::new(2.0, 0.0), Complex64::new(1.5, 300.0)] {
            let h = 1e-5;
            let fd = (zeta(s + h).unwrap() - zeta(s - h).unwrap()) / (2.0 * h);
            let d = zeta_prime(s).unwrap();
            assert!((fd - d).norm() < 1e-7 * (1.0 + d.norm()), "s = {s}: {fd} vs {d}");
        }
    }
}
