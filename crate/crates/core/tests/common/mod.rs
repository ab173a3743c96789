//! Test-side oracles independent of the library code paths.
#![allow(dead_code)]

use num_complex::Complex64;

const GK_NODES: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const K15_WEIGHTS: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const G7_WEIGHTS: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = K15_WEIGHTS[7] * fc;
    let mut g = G7_WEIGHTS[3] * fc;
    for i in 0..7 {
        let x = h * GK_NODES[i];
        let s = f(c - x) + f(c + x);
        k += K15_WEIGHTS[i] * s;
        if i % 2 == 1 {
            g += G7_WEIGHTS[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive Gauss-Kronrod 7/15 quadrature to absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (v, err) = gk15(f, a, b);
        if err <= tol || depth > 50 {
            return v;
        }
        let m = 0.5 * (a + b);
        rec(f, a, m, 0.5 * tol, depth + 1) + rec(f, m, b, 0.5 * tol, depth + 1)
    }
    // start from unit-length pieces so oscillatory integrands are resolved
    let pieces = ((b - a).ceil() as usize).max(1);
    let h = (b - a) / pieces as f64;
    (0..pieces).map(|i| rec(&f, a + i as f64 * h, a + (i + 1) as f64 * h, tol / pieces as f64, 0)).sum()
}

/// `int_T^{2T} |sum a_m m^{-it}|^2 dt` by adaptive quadrature.
pub fn mean_square_by_quadrature(terms: &[(u64, Complex64)], t: f64) -> f64 {
    let logs: Vec<(f64, Complex64)> = terms.iter().map(|&(m, a)| ((m as f64).ln(), a)).collect();
    integrate(
        |v| {
            logs.iter().map(|&(l, a)| a * Complex64::from_polar(1.0, -v * l)).sum::<Complex64>().norm_sqr()
        },
        t,
        2.0 * t,
        1e-10,
    )
}

/// Brute-force `d_n(m)`: ordered `n`-tuples with product `m`.
pub fn dn_brute(m: u64, n: u32) -> u64 {
    if n == 1 {
        return 1;
    }
    (1..=m).filter(|d| m % d == 0).map(|d| dn_brute(m / d, n - 1)).sum()
}
