//! Numerical companion to the mean-square theory of smoothed logarithmic
//! derivatives of degree-`n` L-functions.
//!
//! The crate is organised bottom-up: integer arithmetic ([`arith`]), Satake
//! parameters and their symmetric functions ([`satake`], [`roots`]), Hecke
//! coefficient tables ([`hecke`], [`form`], [`tau`]), analytic kernels
//! ([`kernels`]), exact mean squares of Dirichlet polynomials
//! ([`mean_value`]), and the experiment drivers ([`estimators`]).

pub mod arith;
pub mod error;
pub mod estimators;
pub mod form;
pub mod hecke;
pub mod kernels;
pub mod mean_value;
pub mod roots;
pub mod report;
pub mod satake;
pub mod sum;
pub mod tau;
pub mod tolerance;

pub use error::{Error, Result};
pub use form::FormSpec;
pub use mean_value::{DirichletPolynomial, MeanSquareResult};
pub use report::ExperimentReport;
pub use hecke::{build_coefficient_table, CoefficientTable};
pub use satake::SatakeLocal;
pub use tolerance::Tolerances;
