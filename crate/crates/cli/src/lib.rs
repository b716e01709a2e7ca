//! Command-line front end for the `lkernel` library.
//!
//! Every subcommand prints one JSON [`RunReport`](report::RunReport).
//! Exit codes: 0 when every verdict passes, 2 when one fails, 1 on usage or
//! parameter errors.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

mod commands;
pub mod report;

use report::RunReport;

#[derive(Debug, Parser)]
#[command(name = "lkernel", version, about = "Kernel-function coefficients, exponential sums and nonvanishing certificates")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Override the relative stopping tolerance of every series.
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,
    /// Override the largest summation index of every series.
    #[arg(long, global = true)]
    pub n_cap: Option<u64>,
    /// Write the report to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Include wall-clock time in the report (makes it non-reproducible).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Gauss sum of a Dirichlet character, exactly and numerically.
    GaussSum {
        #[arg(long)]
        modulus: u64,
        /// Index in the canonical enumeration (lexicographic in generator exponents).
        #[arg(long)]
        char_index: usize,
    },
    /// The exponential sums K, S and H.
    #[command(subcommand)]
    Expsum(ExpsumCmd),
    /// Grid verifications.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// m-th coefficient of the kernel function at a general point s.
    KernelCoeff(KernelCoeffArgs),
    /// Explicit nonvanishing certificates.
    #[command(subcommand)]
    Nonvanishing(NonvanishingCmd),
}

#[derive(Debug, Args)]
pub struct SumArgs {
    #[arg(long = "N")]
    pub level: i64,
    #[arg(long)]
    pub n: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub m: i64,
    /// Negative fundamental discriminant.
    #[arg(long = "D", allow_hyphen_values = true)]
    pub d: i64,
}

#[derive(Debug, Subcommand)]
pub enum ExpsumCmd {
    /// K_{N,n}(m, D), by the (a, c, l) parametrization.
    K(SumArgs),
    /// S_{N,n}(m, D), by quadratic forms and genus characters.
    S(SumArgs),
    /// H_{N,n}(D, r, D', r').
    H {
        #[arg(long = "N")]
        level: i64,
        #[arg(long)]
        n: i64,
        #[arg(long = "D", allow_hyphen_values = true)]
        d: i64,
        #[arg(long, allow_hyphen_values = true)]
        r: i64,
        #[arg(long = "Dp", allow_hyphen_values = true)]
        dp: i64,
        #[arg(long = "rp", allow_hyphen_values = true)]
        rp: i64,
    },
}

#[derive(Debug, Subcommand)]
pub enum VerifyCmd {
    /// S = K exactly on the grid N <= max-level, n = N·{1..max-j}, m <= max-m.
    SEqualsK {
        #[arg(long, default_value_t = 6)]
        max_level: i64,
        #[arg(long, default_value_t = 40)]
        max_j: i64,
        #[arg(long, default_value_t = 10)]
        max_m: i64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "-3,-4,-7,-8,-11,-15,-20")]
        discs: Vec<i64>,
    },
    /// The S–H divisor-sum identity for every fundamental D = r² − 4N·nJ coprime to N.
    GkzLemma {
        #[arg(long, default_value_t = 4)]
        max_level: i64,
        #[arg(long, default_value_t = 30)]
        max_nj: i64,
        #[arg(long, default_value_t = 12)]
        max_m: i64,
        /// Pass if |LHS − RHS| <= tol·(1 + |LHS|).
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Kernel coefficient at the center against both lifted Poincaré paths.
    WaldspurgerKernel {
        /// Half the elliptic weight; the Jacobi weight is k + 1.
        #[arg(long)]
        k: i64,
        #[arg(long = "N")]
        level: i64,
        #[arg(long = "D", allow_hyphen_values = true)]
        d: i64,
        /// Square root of D mod 4N; the least one by default.
        #[arg(long, allow_hyphen_values = true)]
        r: Option<i64>,
        #[arg(long, default_value_t = 6)]
        m_max: i64,
    },
}

#[derive(Debug, Args)]
pub struct CharArgs {
    #[arg(long)]
    pub k: i64,
    #[arg(long = "N")]
    pub level: u64,
    /// Index of ψ among the characters mod N.
    #[arg(long, default_value_t = 0)]
    pub psi_index: usize,
    #[arg(long)]
    pub chi_modulus: u64,
    #[arg(long)]
    pub chi_index: usize,
}

#[derive(Debug, Args)]
pub struct KernelCoeffArgs {
    #[command(flatten)]
    pub chars: CharArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub s_re: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub s_im: f64,
    #[arg(long)]
    pub m: i64,
}

#[derive(Debug, Subcommand)]
pub enum NonvanishingCmd {
    /// Smallest certified weight for fixed level.
    MinWeight {
        #[arg(long, allow_hyphen_values = true)]
        t0: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long = "N")]
        level: i64,
        #[arg(long)]
        m: i64,
        #[arg(long)]
        h: i64,
        #[arg(long, default_value_t = lkernel::analysis::DELTA_GRID)]
        grid_intervals: usize,
    },
    /// Smallest certified level for fixed weight.
    MinLevel {
        #[arg(long, allow_hyphen_values = true)]
        t0: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        k: i64,
        #[arg(long)]
        m: i64,
        #[arg(long)]
        h: i64,
        #[arg(long, default_value_t = lkernel::analysis::DELTA_GRID)]
        grid_intervals: usize,
    },
    /// Both sides of the estimate at one point k/2 ∓ δ − i·t0.
    Breakdown {
        #[arg(long)]
        k: i64,
        #[arg(long = "N")]
        level: i64,
        #[arg(long)]
        h: i64,
        #[arg(long)]
        m: i64,
        #[arg(long)]
        delta: f64,
        #[arg(long, allow_hyphen_values = true)]
        t0: f64,
        /// Evaluate at k/2 + δ − i·t0 instead (level >= 2 only).
        #[arg(long)]
        right: bool,
    },
    /// Kernel coefficient along a horizontal segment, flagging possible zeros.
    Scan {
        #[command(flatten)]
        chars: CharArgs,
        #[arg(long)]
        m: i64,
        #[arg(long, allow_hyphen_values = true)]
        t0: f64,
        #[arg(long)]
        lo: f64,
        #[arg(long)]
        hi: f64,
        #[arg(long)]
        step: f64,
        #[arg(long, default_value_t = 0.0)]
        threshold: f64,
        /// Emit CSV (sigma, coeff_re, coeff_im, abs, err) instead of JSON.
        #[arg(long)]
        csv: bool,
    },
}

/// What a command produced.
pub(crate) enum Output {
    Report(RunReport),
    /// CSV text, plus the report that would otherwise be printed (for the exit code).
    Csv(String, RunReport),
}

pub(crate) enum Failure {
    /// Bad flags or parameters outside the supported region.
    Usage(String),
    /// The computation itself failed; the partial report records why.
    Verdict(RunReport),
}

/// Parses `args` (including the program name), runs the command and writes
/// its output. Returns the process exit code.
pub fn run(args: &[String]) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let start = Instant::now();
    let (code, text) = match commands::execute(&cli) {
        Ok(Output::Report(mut r)) => {
            if cli.global.timing {
                r.timing_ms = Some(start.elapsed().as_millis() as u64);
            }
            (if r.passed() { 0 } else { 2 }, r.to_json())
        }
        Ok(Output::Csv(csv, r)) => (if r.passed() { 0 } else { 2 }, csv),
        Err(Failure::Verdict(r)) => (2, r.to_json()),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return 1;
        }
    };
    match &cli.global.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return 1;
            }
        }
        None => print!("{text}"),
    }
    code
}
