//! Complex Gamma via the Lanczos approximation (Pugh's 11-term set,
//! `r = 10.900511`), with reflection for `Re z < 1/2`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const LANCZOS_R: f64 = 10.900511;

const LANCZOS_D: [f64; 11] = [
    2.485_740_891_387_535_5e-5,
    1.051_423_785_817_219_7,
    -3.456_870_972_220_162_5,
    4.512_277_094_668_948,
    -2.982_852_253_235_766_4,
    1.056_397_115_771_267,
    -1.954_287_731_916_458_7e-1,
    1.709_705_434_044_412e-2,
    -5.719_261_174_043_057e-4,
    4.633_994_733_599_057e-6,
    -2.719_949_084_886_077_2e-9,
];

/// `ln(2 sqrt(e / pi))`
const LN_TWO_SQRT_E_OVER_PI: f64 = 0.620_782_237_635_245_2;

fn is_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

/// `ln Gamma(z)` on `Re z >= 1/2` (principal branch of the Lanczos form).
fn ln_gamma_right(z: Complex64) -> Complex64 {
    let series = LANCZOS_D
        .iter()
        .enumerate()
        .skip(1)
        .fold(Complex64::new(LANCZOS_D[0], 0.0), |acc, (k, &d)| acc + d / (z + (k as f64 - 1.0)));
    let shifted = z - 0.5;
    LN_TWO_SQRT_E_OVER_PI + shifted * ((shifted + LANCZOS_R).ln() - 1.0) + series.ln()
}

pub fn complex_gamma(z: Complex64) -> Result<Complex64> {
    if is_pole(z) {
        return Err(Error::domain(format!("Gamma has a pole at {z}")));
    }
    if z.re < 0.5 {
        // Gamma(z) Gamma(1 - z) = pi / sin(pi z)
        let reflected = ln_gamma_right(1.0 - z).exp();
        let sine = (PI * z).sin();
        return Ok(PI / (sine * reflected));
    }
    Ok(ln_gamma_right(z).exp())
}
