//! Aberth–Ehrlich simultaneous root finding for the small local Hecke
//! polynomials (degree <= ~10).

use num_complex::Complex64;

use crate::error::{Error, Result};

const EPS: f64 = f64::EPSILON;

/// Horner evaluation of `p` and `p'`; coefficients in ascending order.
fn eval_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

pub fn eval(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// `sum |c_k| |z|^k`, the natural scale of rounding error in `p(z)`.
fn magnitude_bound(coeffs: &[Complex64], z: Complex64) -> f64 {
    let r = z.norm();
    coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
}

/// Coefficients of `p(x + c)` (ascending); entry `j` is `p^(j)(c) / j!`.
fn taylor_shift(coeffs: &[Complex64], c: Complex64) -> Vec<Complex64> {
    let mut a = coeffs.to_vec();
    let n = a.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let next = a[j + 1];
            a[j] += c * next;
        }
    }
    a
}

#[derive(Debug, Clone)]
pub struct RootsOutput {
    pub roots: Vec<Complex64>,
    pub iterations: u32,
    /// `max_i |p(z_i)|` after polishing.
    pub residual: f64,
}

/// All roots of the polynomial with ascending coefficients `coeffs`
/// (leading coefficient nonzero).
///
/// Initial guesses sit on the circle of radius `1 + max |c_k / c_n|`.
/// Fails when the residual after `max_iterations` sweeps exceeds
/// `residual_tol * (1 + max |c_k / c_n|)`.
pub fn aberth_roots(coeffs: &[Complex64], max_iterations: u32, residual_tol: f64) -> Result<RootsOutput> {
    let degree = coeffs.len().saturating_sub(1);
    let lead = *coeffs.last().ok_or_else(|| Error::domain("empty polynomial"))?;
    if lead.norm() == 0.0 {
        return Err(Error::domain("leading coefficient is zero"));
    }
    if degree == 0 {
        return Ok(RootsOutput { roots: Vec::new(), iterations: 0, residual: 0.0 });
    }
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    let scale = 1.0 + monic[..degree].iter().map(|c| c.norm()).fold(0.0, f64::max);

    // An angular offset keeps the start off the real axis so that real
    // polynomials do not trap conjugate pairs on it.
    let mut z: Vec<Complex64> = (0..degree)
        .map(|k| {
            let angle = 0.4 + std::f64::consts::TAU * k as f64 / degree as f64;
            Complex64::from_polar(scale, angle)
        })
        .collect();

    let mut iterations = 0;
    while iterations < max_iterations {
        iterations += 1;
        let mut settled = true;
        for i in 0..degree {
            let (p, dp) = eval_with_derivative(&monic, z[i]);
            if p.norm() <= 4.0 * EPS * magnitude_bound(&monic, z[i]) {
                continue;
            }
            settled = false;
            let newton = if dp.norm() == 0.0 { p } else { p / dp };
            let repulsion: Complex64 = (0..degree)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = z[i] - z[j];
                    if d.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let denom = Complex64::new(1.0, 0.0) - newton * repulsion;
            let step = if denom.norm() == 0.0 { newton } else { newton / denom };
            if !(step.re.is_finite() && step.im.is_finite()) {
                return Err(Error::Numeric("non-finite Aberth correction".into()));
            }
            z[i] -= step;
            if step.norm() > 4.0 * EPS * (1.0 + z[i].norm()) {
                settled = false;
            }
        }
        if settled {
            break;
        }
    }

    merge_multiple_roots(&monic, &mut z, scale);

    let residual = z.iter().map(|&r| eval(&monic, r).norm()).fold(0.0, f64::max);
    if residual > residual_tol * scale {
        return Err(Error::RootsNotConverged { iterations, residual });
    }
    Ok(RootsOutput { roots: z, iterations, residual })
}

/// `p^(k)(x) / k!` as a polynomial (ascending coefficients).
fn scaled_derivative(coeffs: &[Complex64], k: usize) -> Vec<Complex64> {
    coeffs
        .iter()
        .enumerate()
        .skip(k)
        .map(|(m, &c)| c * crate::arith::binomial(m as u64, k as u64) as f64)
        .collect()
}

/// Newton on a polynomial with a simple root near `z`.
fn polish(coeffs: &[Complex64], mut z: Complex64) -> Complex64 {
    for _ in 0..60 {
        let (p, dp) = eval_with_derivative(coeffs, z);
        if dp.norm() == 0.0 {
            break;
        }
        let step = p / dp;
        if !(step.re.is_finite() && step.im.is_finite()) {
            break;
        }
        z -= step;
        if step.norm() <= EPS * (1.0 + z.norm()) {
            break;
        }
    }
    z
}

/// A k-fold root comes out of the iteration as k points spread by roughly
/// `eps^(1/k)`. It is a simple root of `p^(k-1)`, so Newton on that
/// derivative from the cluster centroid recovers it to rounding level; the
/// cluster is replaced when the first k Taylor coefficients there vanish to
/// rounding level.
fn merge_multiple_roots(monic: &[Complex64], z: &mut [Complex64], scale: f64) {
    let n = z.len();
    let link = 2e-2 * scale;
    let mut visited = vec![false; n];
    for start in 0..n {
        if visited[start] {
            continue;
        }
        let mut cluster = vec![start];
        visited[start] = true;
        let mut head = 0;
        while head < cluster.len() {
            let i = cluster[head];
            head += 1;
            for j in 0..n {
                if !visited[j] && (z[i] - z[j]).norm() <= link {
                    visited[j] = true;
                    cluster.push(j);
                }
            }
        }
        let k = cluster.len();
        if k < 2 {
            continue;
        }
        let centroid = cluster.iter().map(|&i| z[i]).sum::<Complex64>() / k as f64;
        let centroid = polish(&scaled_derivative(monic, k - 1), centroid);
        let shifted = taylor_shift(monic, centroid);
        let r = centroid.norm();
        let vanishes = (0..k).all(|j| {
            // rounding scale of p^(j)(c)/j!
            let bound: f64 = monic
                .iter()
                .enumerate()
                .skip(j)
                .map(|(m, c)| c.norm() * crate::arith::binomial(m as u64, j as u64) as f64 * r.powi((m - j) as i32))
                .sum();
            shifted[j].norm() <= 64.0 * EPS * bound.max(EPS)
        });
        if vanishes {
            for &i in &cluster {
                z[i] = centroid;
            }
        }
    }
}
