//! Form ingestion, experiment orchestration and report persistence behind
//! the `gjl` binary.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use gjl_core::estimators::{
    lemma5_grid, lemma5_limit, lemma6_grid, lemma6_limit, line2_sandwich, rudnick_sarnak_partial,
    theorem1_majorant, theorem2_grid, zeta_oracle_crosscheck, Thresholds,
};
use gjl_core::hecke::{build_coefficient_table, tuple_coefficient, verify_hecke_relation, dual_symmetry_check};
use gjl_core::mean_value::{mv_discrepancy, DirichletPolynomial};
use gjl_core::satake::{alphas_from_hecke, hecke_from_alphas, multiset_distance, power_sum_checked};
use gjl_core::{Error, ExperimentReport, FormSpec, Tolerances};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments, unreadable or invalid form files, I/O failures.
    Config(String),
    /// Numeric or capacity failures inside an experiment.
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Numeric(m) => write!(f, "numeric error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::InvalidLocal { .. } | Error::MissingPrime(_) => CliError::Config(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Config(format!("{}: {e}", path.display()))
}

/// A builtin name (`all-ones:3`, `random-unitary:4:7`, `delta`) or a path
/// to a JSON form file.
pub fn load_form(arg: &str, tol: &Tolerances) -> CliResult<FormSpec> {
    let form = match FormSpec::builtin(arg) {
        Ok(f) => f,
        Err(builtin_err) => {
            let path = Path::new(arg);
            if !path.exists() {
                return Err(CliError::Config(format!("`{arg}` is neither a builtin form nor a file ({builtin_err})")));
            }
            let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
            serde_json::from_str::<FormSpec>(&text).map_err(|e| {
                CliError::Config(format!("{}:{}:{}: {e}", path.display(), e.line(), e.column()))
            })?
        }
    };
    form.validate(tol)?;
    Ok(form)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub command: String,
    pub args: Vec<String>,
    pub files: Vec<String>,
    pub reports: usize,
    pub complete: bool,
    pub passed: bool,
    pub error: Option<String>,
}

/// Collects reports for one invocation and writes them out.
pub struct Run {
    pub dir: PathBuf,
    pub command: String,
    pub args: Vec<String>,
    groups: Vec<(String, Vec<ExperimentReport>)>,
}

impl Run {
    pub fn new(dir: PathBuf, command: &str, args: Vec<String>) -> Self {
        Run { dir, command: command.into(), args, groups: Vec::new() }
    }

    pub fn push(&mut self, stem: &str, reports: Vec<ExperimentReport>) {
        if let Some((_, v)) = self.groups.iter_mut().find(|(s, _)| s == stem) {
            v.extend(reports);
        } else {
            self.groups.push((stem.into(), reports));
        }
    }

    pub fn reports(&self) -> impl Iterator<Item = &ExperimentReport> {
        self.groups.iter().flat_map(|(_, v)| v.iter())
    }

    pub fn passed(&self) -> bool {
        self.reports().all(ExperimentReport::passed)
    }

    /// Writes `<stem>.json` and `<stem>.csv` per group plus `manifest.json`.
    pub fn persist(&self, error: Option<&CliError>) -> CliResult<Manifest> {
        fs::create_dir_all(&self.dir).map_err(|e| io_error(&self.dir, e))?;
        let mut files = Vec::new();
        for (stem, reports) in &self.groups {
            let json = format!("{stem}.json");
            write_file(&self.dir.join(&json), &to_json(reports)?)?;
            files.push(json);
            let mut csv = String::from(ExperimentReport::CSV_HEADER);
            csv.push('\n');
            for r in reports {
                for row in r.csv_rows() {
                    csv.push_str(&row);
                    csv.push('\n');
                }
            }
            let name = format!("{stem}.csv");
            write_file(&self.dir.join(&name), &csv)?;
            files.push(name);
        }
        let manifest = Manifest {
            command: self.command.clone(),
            args: self.args.clone(),
            files,
            reports: self.reports().count(),
            complete: error.is_none(),
            passed: error.is_none() && self.passed(),
            error: error.map(|e| e.to_string()),
        };
        write_file(&self.dir.join("manifest.json"), &to_json(&manifest)?)?;
        Ok(manifest)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Numeric(format!("serialization: {e}")))?;
    s.push('\n');
    Ok(s)
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| io_error(path, e))
}

/// Coefficient table dump for `coeffs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientDump {
    pub form: String,
    pub degree: usize,
    pub limit: u64,
    /// `[m, re A(m), im A(m)]`.
    pub a: Vec<(u64, f64, f64)>,
    /// `[m, re Lambda_f(m), im Lambda_f(m)]` on prime powers.
    pub lambda: Vec<(u64, f64, f64)>,
}

pub fn coefficient_dump(form: &FormSpec, limit: u64, tol: &Tolerances) -> CliResult<CoefficientDump> {
    let table = build_coefficient_table(form, limit, tol)?;
    Ok(CoefficientDump {
        form: form.name.clone(),
        degree: form.degree,
        limit,
        a: (1..=limit).map(|m| (m, table.a(m).re, table.a(m).im)).collect(),
        lambda: table.lambda_terms().iter().map(|&(m, l)| (m, l.re, l.im)).collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Hecke,
    Satake,
    Dual,
}

fn exponent_tuples(len: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..=max).map(move |k| {
                    let mut t = t.clone();
                    t.push(k);
                    t
                })
            })
            .collect();
    }
    out
}

/// Local identity checks at every prime up to `limit`.
pub fn verify_suite(form: &FormSpec, suite: Suite, limit: u64, tol: &Tolerances) -> CliResult<ExperimentReport> {
    let locals = form.local_data(limit, tol)?;
    let n = form.degree;
    let name = match suite {
        Suite::Hecke => "verify_hecke",
        Suite::Satake => "verify_satake",
        Suite::Dual => "verify_dual",
    };
    let mut r = ExperimentReport::new(name, &form.name).with_seed(form.seed());
    r.param("prime_limit", limit as f64);
    let tuples = exponent_tuples(n - 1, 3);
    let mut worst: f64 = 0.0;
    let mut checks = 0usize;
    let threshold = match suite {
        Suite::Hecke => 1e-8,
        Suite::Satake => tol.newton.max(tol.residual),
        Suite::Dual => tol.invariant,
    };
    for s in &locals.entries {
        match suite {
            Suite::Hecke => {
                for a in 0..=3u32 {
                    for t in &tuples {
                        let chk = verify_hecke_relation(s, s.p().pow(a), t)?;
                        let scale = 1.0 + chk.lhs.norm().max(chk.rhs.norm());
                        worst = worst.max(chk.residual / scale);
                        checks += 1;
                    }
                }
            }
            Suite::Satake => {
                let back = alphas_from_hecke(&hecke_from_alphas(s), tol)?;
                worst = worst.max(multiset_distance(back.alphas(), s.alphas()));
                for rr in 1..=12 {
                    worst = worst.max(power_sum_checked(s, rr).discrepancy);
                }
                checks += 13;
            }
            Suite::Dual => {
                for t in &tuples {
                    let scale = 1.0 + tuple_coefficient(s, t)?.value.norm();
                    worst = worst.max(dual_symmetry_check(s, t)? / scale);
                    checks += 1;
                }
            }
        }
    }
    r.observe("checks", checks as f64).observe("worst_residual", worst);
    r.bound("threshold", threshold);
    r.ratio("worst_residual/threshold", worst, threshold);
    r.assert_flag("residuals_within_threshold", worst <= threshold);
    Ok(r)
}

/// Random polynomials with at most `max_terms` terms, frequencies up to
/// `max_freq` and coefficients in the unit box.
pub fn random_polynomial(rng: &mut ChaCha8Rng, max_terms: usize, max_freq: u64) -> DirichletPolynomial {
    let n = rng.gen_range(1..=max_terms);
    let mut freqs: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=max_freq)).collect();
    freqs.sort_unstable();
    freqs.dedup();
    let terms = freqs
        .into_iter()
        .map(|m| (m, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
        .collect();
    DirichletPolynomial::new(terms).expect("distinct sorted frequencies")
}

pub const MV_T_GRID: [f64; 3] = [10.0, 100.0, 1000.0];

/// Empirical Montgomery-Vaughan ratios over `samples` random polynomials
/// at each `T` in [`MV_T_GRID`], asserted against `3 pi`.
pub fn mv_experiment(samples: usize, seed: u64) -> CliResult<ExperimentReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let polys: Vec<DirichletPolynomial> = (0..samples).map(|_| random_polynomial(&mut rng, 100, 1000)).collect();
    let bound = 3.0 * std::f64::consts::PI;
    let mut r = ExperimentReport::new("mv_discrepancy", "random-polynomials").with_seed(Some(seed));
    r.param("samples", samples as f64).param("max_terms", 100.0).param("max_freq", 1000.0);
    r.bound("mv_constant", bound);
    let mut all_ok = true;
    for &t in &MV_T_GRID {
        let mut worst: f64 = 0.0;
        for p in &polys {
            worst = worst.max(mv_discrepancy(p, t)?);
        }
        r.observe(&format!("max_ratio[T={t}]"), worst);
        all_ok &= r.ratio(&format!("max_ratio/mv_constant[T={t}]"), worst, bound) <= 1.0;
    }
    r.assert_flag("ratio_le_3pi", all_ok);
    Ok(r)
}

pub fn lemma5_reports(form: &FormSpec, sigma0: f64, ys: &[f64], tol: &Tolerances) -> CliResult<Vec<ExperimentReport>> {
    let limit = ys.iter().map(|&y| lemma5_limit(y)).max().unwrap_or(1);
    let table = build_coefficient_table(form, limit, tol)?;
    Ok(lemma5_grid(&table, sigma0, ys, &Thresholds::default())?
        .into_iter()
        .map(|r| r.with_seed(form.seed()))
        .collect())
}

pub fn lemma6_reports(form: &FormSpec, sigma0: f64, ys: &[f64], tol: &Tolerances) -> CliResult<Vec<ExperimentReport>> {
    let limit = ys.iter().map(|&y| lemma6_limit(y)).max().unwrap_or(1);
    let table = build_coefficient_table(form, limit, tol)?;
    Ok(lemma6_grid(&table, sigma0, ys, &Thresholds::default())?
        .into_iter()
        .map(|r| r.with_seed(form.seed()))
        .collect())
}

/// Powers of ten from `10^3` below `plimit`, then `plimit` itself.
pub fn prime_grid(plimit: u64) -> Vec<u64> {
    let mut grid: Vec<u64> = std::iter::successors(Some(1000u64), |p| p.checked_mul(10)).take_while(|&p| p < plimit).collect();
    grid.push(plimit);
    grid
}

/// `{2, 5, 10, 20}` below `rmax`, then `rmax`.
pub fn rmax_grid(rmax: u32) -> Vec<u32> {
    let mut grid: Vec<u32> = [2, 5, 10, 20].into_iter().filter(|&r| r < rmax).collect();
    grid.push(rmax);
    grid
}

pub fn theorem1_reports(form: &FormSpec, eps1: f64, plimit: u64, rmax: u32, tol: &Tolerances) -> CliResult<Vec<ExperimentReport>> {
    if plimit < 2 {
        return Err(CliError::Config("--plimit must be >= 2".into()));
    }
    let p_grid = prime_grid(plimit);
    let thm1 = theorem1_majorant(form, eps1, &p_grid, &rmax_grid(rmax), tol)?;
    let rs = rudnick_sarnak_partial(form, &p_grid, rmax, tol)?;
    Ok(vec![thm1, rs])
}

pub fn theorem2_reports(form: &FormSpec, ts: &[f64], sigma0: f64, eta: f64, tol: &Tolerances) -> CliResult<Vec<ExperimentReport>> {
    Ok(theorem2_grid(form, ts, sigma0, eta, &Thresholds::default(), tol)?)
}

pub fn oracle_report(n: u32, t: f64, sigma0: f64, eta: f64, panels: Option<usize>) -> CliResult<ExperimentReport> {
    let panels = panels.unwrap_or((20.0 * t).ceil() as usize);
    Ok(zeta_oracle_crosscheck(n, t, sigma0, eta, panels, &Thresholds::default())?)
}

pub fn line2_reports(form: &FormSpec, ts: &[f64], plimit: u64, tol: &Tolerances) -> CliResult<Vec<ExperimentReport>> {
    ts.iter().map(|&t| line2_sandwich(form, t, plimit, tol).map_err(CliError::from)).collect()
}

/// Comma-separated list of reals (`1e2,1e3`).
pub fn parse_grid(s: &str) -> std::result::Result<Vec<f64>, String> {
    let grid: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| format!("bad grid entry `{x}`: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    if grid.is_empty() || grid.iter().any(|x| !x.is_finite()) {
        return Err("grid must be a nonempty list of finite numbers".into());
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err("grid must be strictly increasing".into());
    }
    Ok(grid)
}
