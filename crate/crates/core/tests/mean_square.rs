use gjl_core::form::FormSpec;
use gjl_core::hecke::build_coefficient_table;
use gjl_core::mean_value::{exact_mean_square, mv_discrepancy, DirichletPolynomial};
use gjl_core::estimators::{smoothed_logderiv_polynomial, zeta_oracle_crosscheck, Thresholds};
use gjl_core::Tolerances;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;

fn random_poly(rng: &mut ChaCha8Rng, max_terms: usize, max_freq: u64) -> DirichletPolynomial {
    let n = rng.gen_range(1..=max_terms);
    let mut freqs: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=max_freq)).collect();
    freqs.sort_unstable();
    freqs.dedup();
    DirichletPolynomial::new(
        freqs.into_iter().map(|m| (m, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))).collect(),
    )
    .unwrap()
}

#[test]
fn two_term_example_matches_quadrature() {
    let p = DirichletPolynomial::new(vec![(2, Complex64::new(1.0, 0.0)), (3, Complex64::new(1.0, 0.0))]).unwrap();
    let exact = exact_mean_square(&p, 100.0).unwrap().exact;
    let quad = common::mean_square_by_quadrature(p.terms(), 100.0);
    assert!((exact - quad).abs() <= 1e-6 * quad);
}

#[test]
fn closed_form_matches_quadrature() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let p = random_poly(&mut rng, 12, 40);
        let t = rng.gen_range(1.0..100.0);
        let r = exact_mean_square(&p, t).unwrap();
        let quad = common::mean_square_by_quadrature(p.terms(), t);
        assert!((r.exact - quad).abs() <= 1e-6 * quad, "{r:?} vs {quad}");
        assert!(r.exact >= 0.0 && r.diagonal >= 0.0);
        assert!((r.diagonal + r.offdiag - r.exact).abs() <= 1e-9 * r.exact);
    }
}

#[test]
fn off_diagonal_share_decays() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..10 {
        let p = random_poly(&mut rng, 20, 200);
        let shares: Vec<f64> = [1e2, 1e3, 1e4]
            .iter()
            .map(|&t| {
                let r = exact_mean_square(&p, t).unwrap();
                (r.exact - r.diagonal).abs() / r.diagonal
            })
            .collect();
        // |offdiag| <= 3 pi sum m |a|^2 is T-independent while the diagonal grows like T
        let cap = |t: f64| 3.0 * std::f64::consts::PI * p.mv_majorant_coeff() / (t * p.l2_mass());
        assert!(shares[2] <= cap(1e4) && shares[1] <= cap(1e3));
    }
}

#[test]
fn near_resonant_pair() {
    let n = 1000;
    let p = DirichletPolynomial::new(vec![(n, Complex64::new(1.0, 0.0)), (n + 1, Complex64::new(1.0, 0.0))]).unwrap();
    let ratio = mv_discrepancy(&p, 1.0).unwrap();
    assert!(ratio <= 3.0 * std::f64::consts::PI);
    assert!(ratio > 0.1 / n as f64);
}

#[test]
fn proxy_scales_with_degree() {
    let th = Thresholds::default();
    let one = zeta_oracle_crosscheck(1, 100.0, 0.75, 0.4, 400, &th).unwrap();
    let two = zeta_oracle_crosscheck(2, 100.0, 0.75, 0.4, 400, &th).unwrap();
    let p1 = one.observed_value("proxy_integral").unwrap();
    let p2 = two.observed_value("proxy_integral").unwrap();
    assert!((p2 - 4.0 * p1).abs() <= 1e-12 * p2);
}

#[test]
fn smoothed_weights_grow_with_y() {
    let table = build_coefficient_table(&FormSpec::all_ones(2), 2000, &Tolerances::DEFAULT).unwrap();
    let small = smoothed_logderiv_polynomial(&table, 0.6, 20.0).unwrap();
    let large = smoothed_logderiv_polynomial(&table, 0.6, 40.0).unwrap();
    for &(m, a) in small.terms() {
        let b = large.terms().iter().find(|t| t.0 == m).unwrap().1;
        assert!(b.re > a.re);
    }
    for &(m, a) in small.terms() {
        if gjl_core::arith::prime_power(m).is_some_and(|(_, e)| e == 1) {
            let mf = m as f64;
            let want = 2.0 * mf.ln() * (-mf / 20.0).exp() * mf.powf(-0.6);
            assert!((a.re - want).abs() < 1e-14);
        }
    }
}
