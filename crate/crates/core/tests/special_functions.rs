//! Gamma and zeta against values computed independently at 25 digits.

use gjl_core::kernels::{complex_gamma, zeta, zeta_prime, zeta_real};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

#[test]
fn gamma_reference_values() {
    let cases = [
        (c(0.5, 0.0), c(1.772453850905516027298167, 0.0)),
        (c(1.0, 1.0), c(0.4980156681183560427136911, -0.1549498283018106851249551)),
        (c(-2.5, 3.0), c(0.0004797884108418970121668853, 0.0002988557111448588681648058)),
        (c(3.7, -20.0), c(6.393311858158522118798362e-10, -5.45102411713847069677577e-10)),
        (c(0.2, 45.0), c(1.580287283505077477558187e-31, 2.628034275406482846983954e-32)),
    ];
    for (z, want) in cases {
        let got = complex_gamma(z).unwrap();
        assert!(rel(got, want) < 1e-12, "Gamma({z}) = {got}, want {want}");
    }
}

#[test]
fn zeta_reference_values() {
    let cases = [
        (c(0.5, 14.0), c(0.0222411426099935892462132, -0.1032581232664500579023631), c(0.7482336961200862625291599, 0.2044365337849974194716829)),
        (c(0.75, 100.0), c(2.002991995255395825136251, -0.05439207119009258692319927), c(-1.981045673309033465282354, -0.08779402453224383749092558)),
        (c(2.0, 10.0), c(1.197982500674184607599917, -0.07917049172052574727332257), c(-0.1354326933330864732858949, 0.0331974423161299778931863)),
        (c(0.6, 1000.0), c(0.6288612811538081599448666, 0.5984607865281873078025928), c(2.035812580229864841333768, -2.706542340837450620383363)),
    ];
    for (s, z, dz) in cases {
        assert!(rel(zeta(s).unwrap(), z) < 1e-10, "zeta({s})");
        assert!(rel(zeta_prime(s).unwrap(), dz) < 1e-10, "zeta'({s})");
    }
    assert!((zeta_real(1.5).unwrap() - 2.612375348685488343348568).abs() < 1e-13);
    assert!((zeta_real(3.0).unwrap() - 1.202056903159594285399738).abs() < 1e-13);
}
