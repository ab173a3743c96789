//! Trapezoidal quadrature on vertical lines, and the two smoothing-identity
//! checks built on it.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::gamma::complex_gamma;
use crate::error::{Error, Result};
use crate::hecke::{build_coefficient_table, CoefficientTable};
use crate::form::FormSpec;
use crate::sum::ComplexKahanSum;
use crate::tolerance::{Tolerances, HARD_TRUNCATION_WEIGHT, TABLE_CAP};

/// The segment `Re w = real_part`, `|Im w| <= half_length`, with `nodes`
/// equally spaced quadrature points (endpoints included).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    pub real_part: f64,
    pub half_length: f64,
    pub nodes: usize,
}

impl ContourSpec {
    pub fn new(real_part: f64, half_length: f64, nodes: usize) -> Result<Self> {
        let spec = ContourSpec { real_part, half_length, nodes };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes < 16 {
            return Err(Error::domain(format!("contour needs >= 16 nodes, got {}", self.nodes)));
        }
        if !(self.half_length > 0.0) {
            return Err(Error::domain("contour half-length must be positive"));
        }
        Ok(())
    }

    /// Smallest half-length with `e^{-(pi/2) V} < target / 10`.
    pub fn half_length_for(target: f64) -> f64 {
        (10.0 / target).ln() * 2.0 / PI
    }

    fn step(&self) -> f64 {
        2.0 * self.half_length / (self.nodes - 1) as f64
    }

    pub fn points(&self) -> impl Iterator<Item = (Complex64, f64)> + '_ {
        let h = self.step();
        (0..self.nodes).map(move |k| {
            let v = -self.half_length + h * k as f64;
            let weight = if k == 0 || k == self.nodes - 1 { 0.5 * h } else { h };
            (Complex64::new(self.real_part, v), weight)
        })
    }

    /// `(1 / 2 pi i) int f(w) dw` along the segment.
    pub fn integrate<F>(&self, mut f: F) -> Result<Complex64>
    where
        F: FnMut(Complex64) -> Result<Complex64>,
    {
        self.validate()?;
        let mut acc = ComplexKahanSum::new();
        for (w, weight) in self.points() {
            acc.add(f(w)? * weight);
        }
        // dw = i dv cancels the i in 1 / (2 pi i)
        Ok(acc.value() / (2.0 * PI))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CahenMellinCheck {
    pub x: f64,
    pub quadrature: f64,
    pub exact: f64,
    pub residual: f64,
}

/// Quadrature of `(1 / 2 pi i) int Gamma(w) x^{-w} dw` against `e^{-x}`.
pub fn cahen_mellin_check(x: f64, contour: &ContourSpec) -> Result<CahenMellinCheck> {
    if !(x > 0.0) {
        return Err(Error::domain(format!("x must be positive, got {x}")));
    }
    if contour.real_part < 0.5 {
        return Err(Error::domain("contour must sit on Re w >= 1/2"));
    }
    let ln_x = x.ln();
    let value = contour.integrate(|w| Ok(complex_gamma(w)? * (-w * ln_x).exp()))?;
    let exact = (-x).exp();
    Ok(CahenMellinCheck { x, quadrature: value.re, exact, residual: (value - exact).norm() })
}

/// The smoothed series and the contour integral it equals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmoothingCheck {
    pub series: Complex64,
    pub contour: Complex64,
    pub residual: f64,
    /// Bound on what truncating both Dirichlet series at the table limit drops.
    pub tail_estimate: f64,
}

/// Largest `m` with `e^{-m/Y} >= 1e-18`.
pub fn hard_truncation(y: f64) -> u64 {
    (y * (1.0 / HARD_TRUNCATION_WEIGHT).ln()).floor() as u64
}

/// `sum_{m > K} log m m^{-beta}` bounded by its integral (valid once the
/// summand decreases, i.e. `K >= e^{1/beta}`).
pub(crate) fn log_power_tail(k: f64, beta: f64) -> f64 {
    if beta <= 1.0 {
        return f64::INFINITY;
    }
    let b = beta - 1.0;
    k.powf(-b) * (k.ln() / b + 1.0 / (b * b))
}

const SERIES_TAIL_TARGET: f64 = 1e-7;

/// Compares `sum Lambda_f(m) m^{-s} e^{-m/Y}` with
/// `-(1/2 pi i) int_{(2)} (L'/L)(s + w) Gamma(w) Y^w dw`, both sides summed
/// from the table (absolutely convergent for `Re s >= 2`).
pub fn smoothed_series_vs_contour(
    table: &CoefficientTable,
    s: Complex64,
    y: f64,
    contour: &ContourSpec,
) -> Result<SmoothingCheck> {
    if s.re < 2.0 {
        return Err(Error::domain(format!("need Re s >= 2, got {s}")));
    }
    if y < 10.0 {
        return Err(Error::domain(format!("need Y >= 10, got {y}")));
    }
    contour.validate()?;
    let terms = table.lambda_terms();
    let ln_y = y.ln();

    // |Lambda_f(m)| <= n log m m^theta
    let theta = table.root_exponent.max(0.0);
    let k = table.limit as f64;
    let n = table.degree.max(1) as f64;
    let gamma_mass: f64 = contour
        .points()
        .map(|(w, weight)| complex_gamma(w).map(|g| g.norm() * weight))
        .sum::<Result<f64>>()?
        / (2.0 * PI);
    let line_tail = n * y.powf(contour.real_part) * gamma_mass * log_power_tail(k, s.re + contour.real_part - theta);
    let series_tail = n * (-k / y).exp() * log_power_tail(k, s.re - theta);
    let tail_estimate = line_tail.max(series_tail);
    if !terms.is_empty() && tail_estimate > SERIES_TAIL_TARGET {
        return Err(Error::TruncationNotReached { tail: tail_estimate, target: SERIES_TAIL_TARGET });
    }

    let series: Complex64 = terms
        .iter()
        .map(|&(m, lam)| {
            let m = m as f64;
            lam * (-s * m.ln()).exp() * (-m / y).exp()
        })
        .collect::<ComplexKahanSum>()
        .value();

    let weighted: Vec<(f64, Complex64)> =
        terms.iter().map(|&(m, lam)| ((m as f64).ln(), lam * (-s * (m as f64).ln()).exp())).collect();
    let contour_value = contour.integrate(|w| {
        let dirichlet: Complex64 = weighted
            .iter()
            .map(|&(ln_m, coef)| coef * (-w * ln_m).exp())
            .collect::<ComplexKahanSum>()
            .value();
        Ok(dirichlet * complex_gamma(w)? * (w * ln_y).exp())
    })?;

    Ok(SmoothingCheck { series, contour: contour_value, residual: (series - contour_value).norm(), tail_estimate })
}

/// Builds a table long enough for [`smoothed_series_vs_contour`] (doubling
/// from the hard truncation point) and runs it.
pub fn smoothed_series_vs_contour_for_form(
    form: &FormSpec,
    s: Complex64,
    y: f64,
    contour: &ContourSpec,
    tol: &Tolerances,
) -> Result<SmoothingCheck> {
    let mut limit = hard_truncation(y).max(1024);
    loop {
        let table = build_coefficient_table(form, limit, tol)?;
        match smoothed_series_vs_contour(&table, s, y, contour) {
            Err(Error::TruncationNotReached { .. }) if limit * 2 <= TABLE_CAP => limit *= 2,
            other => return other,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contour_validation() {
        assert!(ContourSpec::new(2.0, 40.0, 15).is_err());
        assert!(ContourSpec::new(2.0, 0.0, 100).is_err());
        assert!(ContourSpec::new(2.0, 40.0, 16).is_ok());
    }

    #[test]
    fn cahen_mellin_at_one() {
        let c = ContourSpec::new(2.0, 40.0, 2000).unwrap();
        let chk = cahen_mellin_check(1.0, &c).unwrap();
        assert!(chk.residual < 1e-6, "{chk:?}");
        assert!(cahen_mellin_check(1.0, &ContourSpec { real_part: 0.25, ..c }).is_err());
    }

    #[test]
    fn half_length_rule() {
        let v = ContourSpec::half_length_for(1e-6);
        assert!((-(PI / 2.0) * v).exp() < 1e-7 * 1.000001);
    }

    #[test]
    fn zero_table_gives_zero_on_both_sides() {
        let table = CoefficientTable::zero(100);
        let c = ContourSpec::new(2.0, 40.0, 400).unwrap();
        let chk = smoothed_series_vs_contour(&table, Complex64::new(2.5, 0.0), 50.0, &c).unwrap();
        assert_eq!(chk.series, Complex64::new(0.0, 0.0));
        assert_eq!(chk.contour, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn short_table_reports_tail() {
        let table = CoefficientTable::zeta_power(2, 50).unwrap();
        let c = ContourSpec::new(2.0, 40.0, 400).unwrap();
        let err = smoothed_series_vs_contour(&table, Complex64::new(2.5, 0.0), 50.0, &c).unwrap_err();
        assert!(matches!(err, Error::TruncationNotReached { .. }));
    }
}
