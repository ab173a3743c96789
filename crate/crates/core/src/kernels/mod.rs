//! Special functions and contour identities: complex Gamma, a zeta oracle,
//! vertical-line quadrature for the Gamma smoothing kernel, and Jensen's
//! formula.

pub mod contour;
pub mod gamma;
pub mod jensen;
pub mod zeta;

pub use contour::{
    cahen_mellin_check, hard_truncation, smoothed_series_vs_contour, smoothed_series_vs_contour_for_form,
    CahenMellinCheck, ContourSpec, SmoothingCheck,
};
pub use gamma::complex_gamma;
pub use jensen::{jensen_count, zero_count_bound, DiscSpec, JensenIntegral};
pub use zeta::{zeta, zeta_em, zeta_prime, zeta_real, ZetaOrder};
