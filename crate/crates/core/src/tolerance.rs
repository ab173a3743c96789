//! Numeric tolerances and desk-scale caps shared by every module.
//!
//! The `default` profile is what the library and the acceptance suite use.
//! The `strict` profile tightens the invariant checks for callers that want
//! to see how close to the double-precision floor the data actually sits.

use serde::{Deserialize, Serialize};

/// Largest sieve limit accepted by [`crate::arith::sieve_primes`].
pub const SIEVE_CAP: u64 = 100_000_000;

/// Largest coefficient table accepted by [`crate::hecke::build_coefficient_table`].
pub const TABLE_CAP: u64 = 10_000_000;

/// Largest Dirichlet polynomial accepted by the exact mean-square integrator.
pub const MEAN_SQUARE_TERM_CAP: usize = 200_000;

/// Smoothing weights `e^{-m/Y}` below this are dropped (the double-precision floor).
pub const HARD_TRUNCATION_WEIGHT: f64 = 1e-18;

/// Relative slack allowed on `|alpha| <= p^theta`.
pub const BOUND_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Unit product of Satake roots, self-dual conjugation closure, dual symmetry.
    pub invariant: f64,
    /// Root-finder residual, scaled by `1 + max |coefficient|`.
    pub residual: f64,
    /// Direct versus Newton-identity power sums.
    pub newton: f64,
    /// Coefficient-table multiplicativity and realness checks.
    pub table: f64,
    /// Aberth iteration budget.
    pub root_iterations: u32,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        invariant: 1e-10,
        residual: 1e-9,
        newton: 1e-9,
        table: 1e-9,
        root_iterations: 200,
    };

    pub const STRICT: Tolerances = Tolerances {
        invariant: 1e-12,
        residual: 1e-11,
        newton: 1e-11,
        table: 1e-11,
        root_iterations: 400,
    };

    pub fn profile(name: &str) -> Option<Tolerances> {
        match name {
            "default" => Some(Self::DEFAULT),
            "strict" => Some(Self::STRICT),
            _ => None,
        }
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
