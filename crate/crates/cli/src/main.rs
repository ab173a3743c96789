use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gjl_cli::*;
use gjl_core::Tolerances;

#[derive(Parser)]
#[command(name = "gjl", version, about = "Coefficient tables and mean-square experiments for degree-n L-functions")]
struct Cli {
    /// Output directory (for `coeffs`, the output file).
    #[arg(long, global = true, default_value = "gjl-out")]
    out: PathBuf,
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long = "tol-profile", global = true, value_enum, default_value_t = Profile::Default)]
    tol_profile: Profile,
    #[command(subcommand)]
    command: Command,
}

/// Comma-separated reals, parsed as one argument.
#[derive(Clone)]
struct Grid(Vec<f64>);

fn grid(s: &str) -> Result<Grid, String> {
    parse_grid(s).map(Grid)
}

#[derive(Clone, Copy, ValueEnum)]
enum Profile {
    Default,
    Strict,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Hecke,
    Satake,
    Dual,
}

#[derive(Subcommand)]
enum Command {
    /// Dump A(m) and Lambda_f(m) for m <= limit as JSON.
    Coeffs {
        #[arg(long)]
        form: String,
        #[arg(long)]
        limit: u64,
    },
    /// Check local identities at every prime up to the limit.
    Verify {
        #[arg(long)]
        form: String,
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 100)]
        limit: u64,
    },
    /// Tail sums beyond (Y/2)(log Y)^2 over a Y grid.
    Lemma5 {
        #[arg(long)]
        form: String,
        #[arg(long, default_value_t = 0.75)]
        sigma0: f64,
        #[arg(long, default_value = "1e2,1e3,1e4", value_parser = grid)]
        ygrid: Grid,
    },
    /// Head sums against (log Y)^2 over a Y grid.
    Lemma6 {
        #[arg(long)]
        form: String,
        #[arg(long, default_value_t = 0.75)]
        sigma0: f64,
        #[arg(long, default_value = "1e2,1e3,1e4,1e5", value_parser = grid)]
        ygrid: Grid,
    },
    /// Prime-power double sums against the closed-form majorant.
    Thm1 {
        #[arg(long)]
        form: String,
        #[arg(long, default_value_t = 0.1)]
        eps1: f64,
        #[arg(long, default_value_t = 1_000_000)]
        plimit: u64,
        #[arg(long, default_value_t = 20)]
        rmax: u32,
    },
    /// Mean square of the smoothed log-derivative proxy over [T, 2T].
    Thm2 {
        #[arg(long)]
        form: String,
        #[arg(long = "Tgrid", default_value = "1e2,1e3,1e4", value_parser = grid)]
        tgrid: Grid,
        #[arg(long, default_value_t = 0.75)]
        sigma0: f64,
        #[arg(long, default_value_t = 0.4)]
        eta: f64,
    },
    /// Montgomery-Vaughan ratios of random Dirichlet polynomials.
    Mv {
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = gjl_core::form::DEFAULT_SEED)]
        seed: u64,
    },
    /// Proxy mean square for zeta^n against quadrature of |n zeta'/zeta|^2.
    Oracle {
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long = "T", default_value_t = 100.0)]
        t: f64,
        #[arg(long, default_value_t = 0.75)]
        sigma0: f64,
        #[arg(long, default_value_t = 0.4)]
        eta: f64,
        /// Simpson panels (default 20 T).
        #[arg(long)]
        panels: Option<usize>,
    },
    /// |L_f(2 + it)| against the Euler-product sandwich.
    Line2 {
        #[arg(long)]
        form: String,
        #[arg(long = "tgrid", default_value = "0,10,100", value_parser = grid)]
        tgrid: Grid,
        #[arg(long, default_value_t = 100_000)]
        plimit: u64,
    },
}

fn tolerances(p: Profile) -> Tolerances {
    match p {
        Profile::Default => Tolerances::DEFAULT,
        Profile::Strict => Tolerances::STRICT,
    }
}

fn run_command(cli: &Cli, run: &mut Run) -> CliResult<()> {
    let tol = tolerances(cli.tol_profile);
    match &cli.command {
        Command::Coeffs { .. } => unreachable!("handled separately"),
        Command::Verify { form, suite, limit } => {
            let form = load_form(form, &tol)?;
            let suite = match suite {
                SuiteArg::Hecke => Suite::Hecke,
                SuiteArg::Satake => Suite::Satake,
                SuiteArg::Dual => Suite::Dual,
            };
            run.push("verify", vec![verify_suite(&form, suite, *limit, &tol)?]);
        }
        Command::Lemma5 { form, sigma0, ygrid } => {
            let form = load_form(form, &tol)?;
            run.push("lemma5", lemma5_reports(&form, *sigma0, &ygrid.0, &tol)?);
        }
        Command::Lemma6 { form, sigma0, ygrid } => {
            let form = load_form(form, &tol)?;
            run.push("lemma6", lemma6_reports(&form, *sigma0, &ygrid.0, &tol)?);
        }
        Command::Thm1 { form, eps1, plimit, rmax } => {
            let form = load_form(form, &tol)?;
            run.push("thm1", theorem1_reports(&form, *eps1, *plimit, *rmax, &tol)?);
        }
        Command::Thm2 { form, tgrid, sigma0, eta } => {
            let form = load_form(form, &tol)?;
            run.push("thm2", theorem2_reports(&form, &tgrid.0, *sigma0, *eta, &tol)?);
        }
        Command::Mv { samples, seed } => run.push("mv", vec![mv_experiment(*samples, *seed)?]),
        Command::Oracle { n, t, sigma0, eta, panels } => {
            run.push("oracle", vec![oracle_report(*n, *t, *sigma0, *eta, *panels)?]);
        }
        Command::Line2 { form, tgrid, plimit } => {
            let form = load_form(form, &tol)?;
            run.push("line2", line2_reports(&form, &tgrid.0, *plimit, &tol)?);
        }
    }
    Ok(())
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Coeffs { .. } => "coeffs",
        Command::Verify { .. } => "verify",
        Command::Lemma5 { .. } => "lemma5",
        Command::Lemma6 { .. } => "lemma6",
        Command::Thm1 { .. } => "thm1",
        Command::Thm2 { .. } => "thm2",
        Command::Mv { .. } => "mv",
        Command::Oracle { .. } => "oracle",
        Command::Line2 { .. } => "line2",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            eprintln!("configuration error: worker pool: {e}");
            return ExitCode::from(2);
        }
    }

    if let Command::Coeffs { form, limit } = &cli.command {
        let tol = tolerances(cli.tol_profile);
        let result = load_form(form, &tol)
            .and_then(|f| coefficient_dump(&f, *limit, &tol))
            .and_then(|d| to_json(&d))
            .and_then(|s| {
                if let Some(parent) = cli.out.parent().filter(|p| !p.as_os_str().is_empty()) {
                    std::fs::create_dir_all(parent).map_err(|e| CliError::Config(format!("{}: {e}", parent.display())))?;
                }
                std::fs::write(&cli.out, s).map_err(|e| CliError::Config(format!("{}: {e}", cli.out.display())))
            });
        return match result {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("{e}");
                ExitCode::from(e.exit_code() as u8)
            }
        };
    }

    let args: Vec<String> = std::env::args().skip(1).collect();
    let mut run = Run::new(cli.out.clone(), command_name(&cli.command), args);
    let outcome = run_command(&cli, &mut run);
    let error = outcome.err();
    if let Err(e) = run.persist(error.as_ref()) {
        eprintln!("{e}");
        return ExitCode::from(e.exit_code() as u8);
    }
    for r in run.reports() {
        let status = if r.passed() { "PASS" } else { "FAIL" };
        let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        println!("{status} {} {} [{}]", r.experiment, r.form_id, params.join(", "));
    }
    match error {
        Some(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
        None if run.passed() => ExitCode::SUCCESS,
        None => ExitCode::from(1),
    }
}
