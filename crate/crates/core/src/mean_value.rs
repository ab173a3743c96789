//! Finite Dirichlet polynomials `sum a_m m^{-it}` and their exact mean
//! squares over `[T, 2T]`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hecke::CoefficientTable;
use crate::kernels::hard_truncation;
use crate::sum::{ComplexKahanSum, KahanSum};
use crate::tolerance::MEAN_SQUARE_TERM_CAP;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DirichletPolynomial {
    terms: Vec<(u64, Complex64)>,
}

impl DirichletPolynomial {
    /// Terms are sorted by frequency; repeated or zero frequencies are rejected.
    pub fn new(mut terms: Vec<(u64, Complex64)>) -> Result<Self> {
        terms.sort_by_key(|&(m, _)| m);
        if terms.first().is_some_and(|&(m, _)| m == 0) {
            return Err(Error::domain("frequencies must be positive"));
        }
        if let Some(w) = terms.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::domain(format!("duplicate frequency {}", w[0].0)));
        }
        Ok(DirichletPolynomial { terms })
    }

    pub fn terms(&self) -> &[(u64, Complex64)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        DirichletPolynomial { terms: self.terms.iter().map(|&(m, a)| (m, a * c)).collect() }
    }

    /// `sum |a_m|^2`.
    pub fn l2_mass(&self) -> f64 {
        self.terms.iter().map(|(_, a)| a.norm_sqr()).collect::<KahanSum>().value()
    }

    /// `sum m |a_m|^2`.
    pub fn mv_majorant_coeff(&self) -> f64 {
        self.terms.iter().map(|&(m, a)| m as f64 * a.norm_sqr()).collect::<KahanSum>().value()
    }

    /// `sum a_m m^{-it}`.
    pub fn eval(&self, t: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|&(m, a)| a * Complex64::from_polar(1.0, -t * (m as f64).ln()))
            .collect::<ComplexKahanSum>()
            .value()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanSquareResult {
    pub t: f64,
    pub exact: f64,
    /// `T sum |a_m|^2`.
    pub diagonal: f64,
    pub offdiag: f64,
    pub mv_majorant_coeff: f64,
}

const ROW_BLOCK: usize = 64;

/// `int_T^{2T} |sum a_m m^{-it}|^2 dt` in closed form.
pub fn exact_mean_square(poly: &DirichletPolynomial, t: f64) -> Result<MeanSquareResult> {
    mean_square_impl(poly, t, None)
}

/// Approximate variant keeping only pairs with `|k - m| <= band`; for
/// profiling only.
pub fn banded_mean_square(poly: &DirichletPolynomial, t: f64, band: u64) -> Result<MeanSquareResult> {
    mean_square_impl(poly, t, Some(band))
}

fn mean_square_impl(poly: &DirichletPolynomial, t: f64, band: Option<u64>) -> Result<MeanSquareResult> {
    if !(t >= 1.0) || !t.is_finite() {
        return Err(Error::domain(format!("need T >= 1, got {t}")));
    }
    if poly.len() > MEAN_SQUARE_TERM_CAP {
        return Err(Error::domain(format!(
            "{} terms exceed the mean-square cap of {MEAN_SQUARE_TERM_CAP}",
            poly.len()
        )));
    }
    let terms = poly.terms();
    let logs: Vec<f64> = terms.iter().map(|&(m, _)| (m as f64).ln()).collect();

    // Pair (m, k) and (k, m) are conjugate, so the off-diagonal part is
    // 2 Re sum_{m < k} a_m conj(a_k) ((k/m)^{2iT} - (k/m)^{iT}) / (i log(k/m)).
    let row = |i: usize| -> f64 {
        let (m, a) = terms[i];
        let mut acc = KahanSum::new();
        for j in i + 1..terms.len() {
            let (k, b) = terms[j];
            if band.is_some_and(|w| k - m > w) {
                break;
            }
            let l = logs[j] - logs[i];
            let (s1, c1) = (t * l).sin_cos();
            let (s2, c2) = (2.0 * t * l).sin_cos();
            // (e^{i2TL} - e^{iTL}) / (iL)
            let kernel = Complex64::new(s2 - s1, -(c2 - c1)) / l;
            acc.add((a * b.conj() * kernel).re);
        }
        acc.value()
    };
    let blocks: Vec<f64> = (0..terms.len().div_ceil(ROW_BLOCK))
        .into_par_iter()
        .map(|blk| {
            let start = blk * ROW_BLOCK;
            let end = (start + ROW_BLOCK).min(terms.len());
            (start..end).map(row).collect::<KahanSum>().value()
        })
        .collect();
    let offdiag = 2.0 * blocks.into_iter().collect::<KahanSum>().value();
    let diagonal = t * poly.l2_mass();
    Ok(MeanSquareResult {
        t,
        exact: diagonal + offdiag,
        diagonal,
        offdiag,
        mv_majorant_coeff: poly.mv_majorant_coeff(),
    })
}

/// `|offdiag| / sum m |a_m|^2`.
pub fn mv_discrepancy(poly: &DirichletPolynomial, t: f64) -> Result<f64> {
    let r = exact_mean_square(poly, t)?;
    if !(r.mv_majorant_coeff > 0.0) {
        return Err(Error::domain("mean-value discrepancy of the zero polynomial"));
    }
    Ok(r.offdiag.abs() / r.mv_majorant_coeff)
}

/// The smoothed polynomial `Lambda_f(m) e^{-m/Y} m^{-sigma0}` split at `(Y/2)(log Y)^2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailSplit {
    pub head: DirichletPolynomial,
    pub tail: DirichletPolynomial,
    /// Largest frequency in the head range.
    pub boundary: u64,
    /// Largest frequency whose weight `e^{-m/Y}` is at least `1e-18`.
    pub hard_truncation: u64,
}

impl TailSplit {
    pub fn full(&self) -> DirichletPolynomial {
        let mut terms = self.head.terms.clone();
        terms.extend_from_slice(&self.tail.terms);
        DirichletPolynomial { terms }
    }
}

/// `floor((Y/2)(log Y)^2)`.
pub fn head_boundary(y: f64) -> u64 {
    (0.5 * y * y.ln().powi(2)).floor() as u64
}

pub(crate) fn check_sigma_y(sigma0: f64, y: f64) -> Result<()> {
    if !(0.5 < sigma0 && sigma0 < 1.0) {
        return Err(Error::domain(format!("need 1/2 < sigma0 < 1, got {sigma0}")));
    }
    if !(y >= 10.0) || !y.is_finite() {
        return Err(Error::domain(format!("need Y >= 10, got {y}")));
    }
    Ok(())
}

pub fn truncated_tail_split(table: &CoefficientTable, sigma0: f64, y: f64) -> Result<TailSplit> {
    check_sigma_y(sigma0, y)?;
    let hard = hard_truncation(y);
    if table.limit < hard {
        return Err(Error::InsufficientTable { required: hard, available: table.limit });
    }
    let boundary = head_boundary(y);
    let weight = |m: u64, lam: Complex64| {
        let mf = m as f64;
        lam * ((-mf / y).exp() * mf.powf(-sigma0))
    };
    let (mut head, mut tail) = (Vec::new(), Vec::new());
    for &(m, lam) in table.lambda_terms_up_to(hard) {
        if m <= boundary {
            head.push((m, weight(m, lam)));
        } else {
            tail.push((m, weight(m, lam)));
        }
    }
    Ok(TailSplit {
        head: DirichletPolynomial { terms: head },
        tail: DirichletPolynomial { terms: tail },
        boundary,
        hard_truncation: hard,
    })
}
