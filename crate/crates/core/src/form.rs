//! Self-dual forms described by where their local data comes from.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::sieve_primes;
use crate::error::{Error, Result};
use crate::satake::SatakeLocal;
use crate::tau::{cached_tau, delta_satake_pair, normalized_tau};
use crate::tolerance::Tolerances;

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExplicitPrime {
    pub p: u64,
    /// `[re, im]` pairs.
    pub alphas: Vec<[f64; 2]>,
}

impl ExplicitPrime {
    pub fn roots(&self) -> Vec<Complex64> {
        self.alphas.iter().map(|&[re, im]| Complex64::new(re, im)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum FormSource {
    /// Every Satake root equals 1: `L_f = zeta^n`.
    AllOnes,
    /// Conjugate pairs of random unit roots (plus a root 1 when `n` is odd),
    /// drawn per prime from a seeded stream.
    RandomUnitary { seed: u64 },
    /// The weight-12 discriminant form, unitarily normalized (`n = 2`).
    RamanujanDelta,
    /// Local data listed prime by prime.
    Explicit { primes: Vec<ExplicitPrime> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormSpec {
    pub name: String,
    pub degree: usize,
    pub self_dual: bool,
    pub source: FormSource,
}

impl FormSpec {
    pub fn all_ones(degree: usize) -> Self {
        FormSpec { name: format!("all-ones:{degree}"), degree, self_dual: true, source: FormSource::AllOnes }
    }

    pub fn random_unitary(degree: usize, seed: u64) -> Self {
        FormSpec {
            name: format!("random-unitary:{degree}:{seed}"),
            degree,
            self_dual: true,
            source: FormSource::RandomUnitary { seed },
        }
    }

    pub fn delta() -> Self {
        FormSpec { name: "delta".into(), degree: 2, self_dual: true, source: FormSource::RamanujanDelta }
    }

    /// Builtin names: `all-ones:N`, `random-unitary:N[:SEED]`, `delta`
    /// (also `ramanujan-delta`, `ramanujan-delta:2`).
    pub fn builtin(name: &str) -> Result<Self> {
        let parts: Vec<&str> = name.split(':').collect();
        let degree = |s: &str| -> Result<usize> {
            let n: usize = s.parse().map_err(|_| Error::domain(format!("bad degree `{s}` in `{name}`")))?;
            if n < 2 {
                return Err(Error::domain(format!("degree must be >= 2 in `{name}`")));
            }
            Ok(n)
        };
        match parts.as_slice() {
            ["all-ones", n] => Ok(Self::all_ones(degree(n)?)),
            ["random-unitary", n] => Ok(Self::random_unitary(degree(n)?, DEFAULT_SEED)),
            ["random-unitary", n, seed] => {
                let seed = seed.parse().map_err(|_| Error::domain(format!("bad seed `{seed}` in `{name}`")))?;
                Ok(Self::random_unitary(degree(n)?, seed))
            }
            ["delta"] | ["ramanujan-delta"] | ["ramanujan-delta", "2"] | ["delta", "2"] => Ok(Self::delta()),
            _ => Err(Error::domain(format!("unknown builtin form `{name}`"))),
        }
    }

    /// The forms every experiment grid runs over by default.
    pub fn builtins() -> Vec<Self> {
        vec![Self::all_ones(2), Self::all_ones(3), Self::random_unitary(4, DEFAULT_SEED), Self::delta()]
    }

    pub fn seed(&self) -> Option<u64> {
        match self.source {
            FormSource::RandomUnitary { seed } => Some(seed),
            _ => None,
        }
    }

    /// Checks the structural invariants and, for explicit sources, every
    /// listed local factor. Errors name the offending prime.
    pub fn validate(&self, tol: &Tolerances) -> Result<()> {
        if self.degree < 2 {
            return Err(Error::domain(format!("form `{}` has degree {} < 2", self.name, self.degree)));
        }
        if !self.self_dual {
            return Err(Error::domain(format!("form `{}` is not flagged self-dual", self.name)));
        }
        match &self.source {
            FormSource::RamanujanDelta if self.degree != 2 => {
                Err(Error::domain(format!("the discriminant form has degree 2, not {}", self.degree)))
            }
            FormSource::Explicit { primes } => {
                let mut last = 0;
                for entry in primes {
                    if entry.p <= last {
                        return Err(Error::InvalidLocal { p: entry.p, reason: "primes must be strictly increasing".into() });
                    }
                    last = entry.p;
                    if !crate::arith::factorize(entry.p).as_prime_power().is_some_and(|(_, e)| e == 1) {
                        return Err(Error::InvalidLocal { p: entry.p, reason: "not a prime".into() });
                    }
                    self.check_local(entry.p, entry.roots(), tol)?;
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    fn check_local(&self, p: u64, roots: Vec<Complex64>, tol: &Tolerances) -> Result<SatakeLocal> {
        if roots.len() != self.degree {
            return Err(Error::InvalidLocal {
                p,
                reason: format!("{} roots listed for a degree-{} form", roots.len(), self.degree),
            });
        }
        let local = SatakeLocal::new(p, roots, tol)?;
        if self.self_dual && !local.is_conjugation_closed(tol.invariant) {
            return Err(Error::InvalidLocal { p, reason: "roots are not closed under conjugation".into() });
        }
        Ok(local)
    }

    /// Local data at one prime.
    pub fn local(&self, p: u64, tol: &Tolerances) -> Result<SatakeLocal> {
        match &self.source {
            FormSource::AllOnes => SatakeLocal::new(p, vec![Complex64::new(1.0, 0.0); self.degree], tol),
            FormSource::RandomUnitary { seed } => SatakeLocal::new(p, random_unitary_roots(*seed, p, self.degree), tol),
            FormSource::RamanujanDelta => {
                let tau = cached_tau(p)?;
                let a = normalized_tau(tau[p as usize - 1], p);
                SatakeLocal::new(p, delta_satake_pair(a).to_vec(), tol)
            }
            FormSource::Explicit { primes } => {
                let idx = primes.binary_search_by_key(&p, |e| e.p).map_err(|_| Error::MissingPrime(p))?;
                self.check_local(p, primes[idx].roots(), tol)
            }
        }
    }

    /// Local data at every prime `<= prime_limit`.
    pub fn local_data(&self, prime_limit: u64, tol: &Tolerances) -> Result<LocalData> {
        self.validate(tol)?;
        if prime_limit < 2 {
            return Ok(LocalData { degree: self.degree, entries: Vec::new() });
        }
        if matches!(self.source, FormSource::RamanujanDelta) {
            // one table fill instead of a cache lookup per prime
            cached_tau(prime_limit)?;
        }
        let primes = sieve_primes(prime_limit)?;
        let entries = primes.primes().iter().map(|&p| self.local(p, tol)).collect::<Result<Vec<_>>>()?;
        Ok(LocalData { degree: self.degree, entries })
    }
}

/// Per-prime draw: `floor(n/2)` angles in `[0, pi)`, each giving `e^{+-i theta}`.
pub fn random_unitary_roots(seed: u64, p: u64, degree: usize) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(p);
    let mut roots = Vec::with_capacity(degree);
    for _ in 0..degree / 2 {
        let theta: f64 = rng.gen_range(0.0..std::f64::consts::PI);
        let z = Complex64::from_polar(1.0, theta);
        roots.push(z);
        roots.push(z.conj());
    }
    if degree % 2 == 1 {
        roots.push(Complex64::new(1.0, 0.0));
    }
    roots
}

/// Resolved local factors at all primes up to some limit, ascending in `p`.
#[derive(Debug, Clone)]
pub struct LocalData {
    pub degree: usize,
    pub entries: Vec<SatakeLocal>,
}

impl LocalData {
    pub fn get(&self, p: u64) -> Option<&SatakeLocal> {
        self.entries.binary_search_by_key(&p, |s| s.p()).ok().map(|i| &self.entries[i])
    }

    pub fn prime_limit_covered(&self) -> u64 {
        self.entries.last().map_or(0, |s| s.p())
    }
}
