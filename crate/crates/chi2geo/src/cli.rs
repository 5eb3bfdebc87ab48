//! Command-line surface: `characterize`, `cumulants`, `verify`, `generate`.
//!
//! Exit codes: 0 = analysis completed (and, for `verify`, all gates passed);
//! 1 = a statistical gate failed; 2 = malformed input or usage;
//! 3 = dimension/validation failure; 4 = parameter out of range.

use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::characterize::{characterize, DEFAULT_TOL};
use crate::error::Error;
use crate::generate::{generate_spec, GenerateParams};
use crate::moments::{chisq_cumulants, quadratic_norm_cumulants};
use crate::report::{CharacterizeReport, CumulantsReport, SpecDocument, VerifyReport};
use crate::rng::resolve_generator_id;
use crate::verify::{verify, Thresholds};

pub const EXIT_OK: i32 = 0;
pub const EXIT_GATE_FAILED: i32 = 1;
pub const EXIT_BAD_INPUT: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;
pub const EXIT_BAD_PARAM: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "chi2geo",
    about = "Decide whether ||X||^2 is chi-square for X ~ N(mu, C), and verify it numerically"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Human,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Side {
    Both,
    Norm,
    Chisq,
}

#[derive(Debug, Args)]
struct CommonFlags {
    /// Tolerance for all characterization checks.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide chi-square-ness of ||X||^2 and report df and noncentrality.
    Characterize {
        /// Spec JSON file ("-" for stdin).
        input: PathBuf,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Analytic cumulants of ||X||^2 and/or the matched chi-square.
    Cumulants {
        input: PathBuf,
        /// Number of cumulants (max 20).
        #[arg(long, default_value_t = 4)]
        order: usize,
        /// Which cumulant sequence(s) to emit.
        #[arg(long, value_enum, default_value_t = Side::Both)]
        side: Side,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Monte Carlo verification of the verdict.
    Verify {
        input: PathBuf,
        /// Number of draws.
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        /// RNG seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Minimum KS p-value gate.
        #[arg(long, default_value_t = 0.01)]
        ks_alpha: f64,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Emit a random projection spec (optionally perturbed off chi-square-ness).
    Generate {
        /// Ambient dimension n.
        #[arg(long)]
        dim: usize,
        /// Projection rank k (0 <= k <= n).
        #[arg(long)]
        rank: usize,
        /// Target noncentrality nu = ||mu||.
        #[arg(long, default_value_t = 0.0)]
        ncp: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Shift one eigenvalue by this amount (guaranteed-negative case).
        #[arg(long, default_value_t = 0.0)]
        perturb: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::DimensionMismatch { .. }
        | Error::NonSymmetric { .. }
        | Error::NotPositiveSemidefinite { .. }
        | Error::InvalidSubspace { .. }
        | Error::ConvergenceFailure { .. } => EXIT_VALIDATION,
        Error::OrderTooLarge { .. } | Error::InvalidParameter { .. } | Error::OutOfDomain { .. } => {
            EXIT_BAD_PARAM
        }
        Error::TooFewSamples { .. } => EXIT_BAD_INPUT,
        Error::NotIdempotent { .. } => EXIT_VALIDATION,
    }
}

fn read_document(path: &PathBuf) -> Result<SpecDocument, i32> {
    let raw = if path.as_os_str() == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf).map_err(|e| {
            eprintln!("error: cannot read stdin: {e}");
            EXIT_BAD_INPUT
        })?;
        buf
    } else {
        std::fs::read_to_string(path).map_err(|e| {
            eprintln!("error: cannot read {}: {e}", path.display());
            EXIT_BAD_INPUT
        })?
    };
    serde_json::from_str(&raw).map_err(|e| {
        eprintln!("error: malformed spec document: {e}");
        EXIT_BAD_INPUT
    })
}

fn load_spec(path: &PathBuf) -> Result<(SpecDocument, crate::gaussian::GaussianSpec), i32> {
    let doc = read_document(path)?;
    let spec = doc.to_spec().map_err(|e| {
        eprintln!("error: {e}");
        exit_code_for(&e)
    })?;
    Ok((doc, spec))
}

fn emit<T: serde::Serialize>(value: &T, human: Option<String>, format: Format) {
    match format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(value).expect("reports serialize")
        ),
        Format::Human => print!("{}", human.unwrap_or_default()),
    }
}

/// Runs the CLI; returns the process exit code.
pub fn run() -> i32 {
    run_from(std::env::args_os())
}

/// Testable entry point.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version with success
            let code = if e.use_stderr() { EXIT_BAD_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    if let Err(msg) = resolve_generator_id() {
        eprintln!("error: {msg}");
        return EXIT_BAD_INPUT;
    }
    match cli.command {
        Command::Characterize { input, common } => cmd_characterize(&input, &common),
        Command::Cumulants {
            input,
            order,
            side,
            common,
        } => cmd_cumulants(&input, order, side, &common),
        Command::Verify {
            input,
            samples,
            seed,
            ks_alpha,
            common,
        } => cmd_verify(&input, samples, seed, ks_alpha, &common),
        Command::Generate {
            dim,
            rank,
            ncp,
            seed,
            perturb,
            format,
        } => cmd_generate(dim, rank, ncp, seed, perturb, format),
    }
}

fn cmd_characterize(input: &PathBuf, common: &CommonFlags) -> i32 {
    let (doc, spec) = match load_spec(input) {
        Ok(v) => v,
        Err(code) => return code,
    };
    let verdict = characterize(&spec, common.tol);
    let report = CharacterizeReport {
        label: doc.label,
        tol: common.tol,
        ncp_lambda: verdict.ncp_lambda(),
        verdict,
    };
    let human = report.render_human();
    emit(&report, Some(human), common.format);
    EXIT_OK
}

fn cmd_cumulants(input: &PathBuf, order: usize, side: Side, common: &CommonFlags) -> i32 {
    let (doc, spec) = match load_spec(input) {
        Ok(v) => v,
        Err(code) => return code,
    };
    let verdict = characterize(&spec, common.tol);

    let norm_side = match side {
        Side::Both | Side::Norm => match quadratic_norm_cumulants(&spec, order) {
            Ok(c) => Some(c.values().to_vec()),
            Err(e) => {
                eprintln!("error: {e}");
                return exit_code_for(&e);
            }
        },
        Side::Chisq => None,
    };
    let chisq_side = if matches!(side, Side::Both | Side::Chisq) && verdict.is_chi_square {
        match chisq_cumulants(verdict.df.unwrap_or(0), verdict.ncp.unwrap_or(0.0), order) {
            Ok(c) => Some(c.values().to_vec()),
            Err(e) => {
                eprintln!("error: {e}");
                return exit_code_for(&e);
            }
        }
    } else {
        None
    };
    let max_relative_gap = match (&norm_side, &chisq_side) {
        (Some(a), Some(b)) => Some(
            a.iter()
                .zip(b)
                .map(|(x, y)| (x - y).abs() / y.abs().max(1.0))
                .fold(0.0f64, f64::max),
        ),
        _ => None,
    };
    let report = CumulantsReport {
        label: doc.label,
        order,
        norm_cumulants: norm_side,
        chisq_cumulants: chisq_side,
        max_relative_gap,
        verdict,
    };
    let human = report.render_human();
    emit(&report, Some(human), common.format);
    EXIT_OK
}

fn cmd_verify(input: &PathBuf, samples: usize, seed: u64, ks_alpha: f64, common: &CommonFlags) -> i32 {
    let (doc, spec) = match load_spec(input) {
        Ok(v) => v,
        Err(code) => return code,
    };
    let thresholds = Thresholds {
        tol: common.tol,
        ks_alpha,
        ..Thresholds::default()
    };
    let report = match verify(&spec, samples, seed, &thresholds) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code_for(&e);
        }
    };
    let gated = report.verdict.is_chi_square;
    let passed = report.passed;
    let report = VerifyReport {
        label: doc.label,
        report,
    };
    let human = report.render_human();
    emit(&report, Some(human), common.format);
    if gated && !passed {
        EXIT_GATE_FAILED
    } else {
        EXIT_OK
    }
}

fn cmd_generate(dim: usize, rank: usize, ncp: f64, seed: u64, perturb: f64, format: Format) -> i32 {
    let params = GenerateParams {
        dim,
        rank,
        ncp,
        seed,
        perturb,
    };
    let spec = match generate_spec(&params) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code_for(&e);
        }
    };
    let label = format!(
        "generated dim={dim} rank={rank} ncp={ncp} seed={seed} perturb={perturb}"
    );
    let doc = SpecDocument::from_spec(&spec, Some(label));
    match format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&doc).expect("documents serialize")
        ),
        Format::Human => {
            println!("mu  = {:?}", doc.mu);
            println!("cov = [");
            for row in &doc.cov {
                println!("  {row:?},");
            }
            println!("]");
        }
    }
    EXIT_OK
}
