//! Jensen's formula as a zero counter on discs.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscSpec {
    pub center: Complex64,
    pub radius: f64,
    /// Starting angular node count; doubled until the integral settles.
    pub nodes: usize,
}

impl DiscSpec {
    pub fn new(center: Complex64, radius: f64, nodes: usize) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::domain("disc radius must be positive"));
        }
        if nodes < 64 {
            return Err(Error::domain(format!("disc needs >= 64 angular nodes, got {nodes}")));
        }
        Ok(DiscSpec { center, radius, nodes })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JensenIntegral {
    /// `int_0^R n(r) / r dr`.
    pub value: f64,
    pub nodes: usize,
}

const SETTLE: f64 = 1e-8;
const MAX_NODES: usize = 1 << 22;

/// `(1/2 pi) int_0^{2 pi} log|f(c + R e^{i theta})| d theta - log|f(c)|`,
/// by the periodic trapezoid rule with node doubling until successive
/// values differ by less than 1e-8.
pub fn jensen_count<F>(f: F, disc: &DiscSpec) -> Result<JensenIntegral>
where
    F: Fn(Complex64) -> Complex64,
{
    let at_center = f(disc.center).norm();
    if at_center < 1e-300 {
        return Err(Error::domain(format!("|f(center)| = {at_center:e} is degenerate")));
    }
    let log_abs = |theta: f64| -> Result<f64> {
        let v = f(disc.center + Complex64::from_polar(disc.radius, theta)).norm().ln();
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Numeric(format!("f vanishes on the circle near angle {theta}")))
        }
    };

    let mut nodes = disc.nodes;
    let mut sum = 0.0;
    for k in 0..nodes {
        sum += log_abs(TAU * k as f64 / nodes as f64)?;
    }
    let mut mean = sum / nodes as f64;
    while nodes < MAX_NODES {
        // midpoints of the current grid
        let mut mid = 0.0;
        for k in 0..nodes {
            mid += log_abs(TAU * (k as f64 + 0.5) / nodes as f64)?;
        }
        sum += mid;
        nodes *= 2;
        let refined = sum / nodes as f64;
        let settled = (refined - mean).abs() < SETTLE;
        mean = refined;
        if settled {
            return Ok(JensenIntegral { value: mean - at_center.ln(), nodes });
        }
    }
    Err(Error::Numeric(format!("Jensen integral did not settle with {MAX_NODES} nodes")))
}

/// `n(r_inner) <= floor(jensen / log(R / r_inner))` since `n` is nondecreasing.
pub fn zero_count_bound(jensen_value: f64, radius: f64, r_inner: f64) -> Result<u64> {
    if !(0.0 < r_inner && r_inner < radius) {
        return Err(Error::domain(format!("need 0 < r_inner < R, got r_inner = {r_inner}, R = {radius}")));
    }
    Ok((jensen_value.max(0.0) / (radius / r_inner).ln()).floor() as u64)
}
