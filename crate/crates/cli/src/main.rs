//! Command-line surface for the finite-key guessing-probability
//! analysis: single-point bounds, the fixed-point solve, the reference
//! comparison tables, hashing of key files, and the exhaustive
//! verification suites.
//!
//! Exit codes: 0 success, 2 bad flags, 3 infeasible parameters,
//! 4 I/O or format error, 5 oracle failure.

mod output;
mod suites;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use guessprob::bounds::{
    analyze, fixed_point_n2, known_bits_bound, reference_rows, BoundsError, ProtocolParams,
    DEFAULT_EPSILON, DEFAULT_F, DEFAULT_Q_TOL,
};
use guessprob::files::{
    key_file_to_string, read_key_file, write_key_file, write_matrix_file, FileError,
};
use guessprob::hashing::{random_matrix, toeplitz_matrix, BitVector, HashSeed, HashingError};
use guessprob::numerics::Log2Prob;

#[derive(Parser)]
#[command(
    name = "guessprob",
    version,
    about = "Finite-key guessing-probability bounds and two-universal hashing"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Full bound analysis for one parameter set
    Bound(BoundArgs),
    /// Solve only the fixed point 2^-n = eps(n)
    FixedPoint(FixedPointArgs),
    /// Reference comparison tables at N_tol = 1e4, 1e5, 1e6
    Tables(TablesArgs),
    /// Hash a key file with a seeded two-universal matrix
    Hash(HashArgs),
    /// Run the exhaustive verification suites
    Oracle(OracleArgs),
}

#[derive(Args)]
struct BoundArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Bits of the truncated key assumed known to the attacker
    #[arg(long)]
    known_bits: Option<u64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct FixedPointArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct TablesArgs {
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ParamArgs {
    /// Total sifted length N_tol (accepts scientific notation, e.g. 1e6)
    #[arg(long, value_parser = parse_count)]
    n_total: u64,
    /// Key block length N (default: 0.78 * N_tol, rounded)
    #[arg(long, value_parser = parse_count)]
    n_key: Option<u64>,
    /// Parameter-estimation block length N_z (default: N_tol - N)
    #[arg(long, value_parser = parse_count)]
    n_pe: Option<u64>,
    /// Channel error tolerance Q_tol
    #[arg(long, default_value_t = DEFAULT_Q_TOL)]
    q_tol: f64,
    /// Error-correction inefficiency f
    #[arg(long, default_value_t = DEFAULT_F)]
    f: f64,
    /// Target security level epsilon
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Significant digits for decimal probability strings
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(1..=17))]
    digits: u8,
    /// Write the report to this file instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Args)]
struct HashArgs {
    /// Input key file (`bits=<len>` header, one hex key per line)
    key_file: PathBuf,
    /// Generator seed for the matrix
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output key length n (matrix row count)
    #[arg(long, value_parser = parse_count)]
    n_key: u64,
    /// Matrix construction
    #[arg(long, value_enum, default_value_t = KindArg::Toeplitz)]
    kind: KindArg,
    /// Also emit keys truncated to this length (requires --out)
    #[arg(long, value_parser = parse_count)]
    truncate_to: Option<u64>,
    /// Write <out>, <out>.truncated, and <out>.matrix instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    /// Fully random matrix
    Random,
    /// Identity block next to a Toeplitz block
    Toeplitz,
}

#[derive(Args)]
struct OracleArgs {
    /// Base seed for the randomized sweeps
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// A whole number, in plain or scientific notation.
fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if !v.is_finite() || v < 0.0 || v > 2f64.powi(53) || v.fract() != 0.0 {
        return Err(format!("`{s}` is not a representable whole count"));
    }
    Ok(v as u64)
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }

    fn oracle_failure(message: impl Into<String>) -> Self {
        CliError { code: 5, message: message.into() }
    }
}

impl From<BoundsError> for CliError {
    fn from(e: BoundsError) -> Self {
        let code = match e {
            // Rejected flag values are usage errors; the rest mean the
            // parameter set admits no key.
            BoundsError::InvalidParams(_) | BoundsError::KnownBitsExceedKey { .. } => 2,
            _ => 3,
        };
        CliError { code, message: e.to_string() }
    }
}

impl From<FileError> for CliError {
    fn from(e: FileError) -> Self {
        CliError { code: 4, message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError { code: 4, message: e.to_string() }
    }
}

impl From<HashingError> for CliError {
    fn from(e: HashingError) -> Self {
        CliError { code: 4, message: e.to_string() }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Bound(args) => cmd_bound(args),
        Cmd::FixedPoint(args) => cmd_fixed_point(args),
        Cmd::Tables(args) => cmd_tables(args),
        Cmd::Hash(args) => cmd_hash(args),
        Cmd::Oracle(args) => cmd_oracle(args),
    }
}

fn resolve_params(args: &ParamArgs) -> Result<ProtocolParams, CliError> {
    let eps = Log2Prob::from_prob(args.epsilon)
        .map_err(|e| CliError::usage(format!("--epsilon: {e}")))?;
    let (n_key, n_pe) = match (args.n_key, args.n_pe) {
        (None, None) => {
            return ProtocolParams::with_standard_split(args.n_total, args.q_tol, args.f, eps)
                .map_err(CliError::from)
        }
        (Some(k), Some(z)) => (k, z),
        (Some(k), None) => (
            k,
            args.n_total
                .checked_sub(k)
                .ok_or_else(|| CliError::usage("--n-key exceeds --n-total"))?,
        ),
        (None, Some(z)) => (
            args.n_total
                .checked_sub(z)
                .ok_or_else(|| CliError::usage("--n-pe exceeds --n-total"))?,
            z,
        ),
    };
    ProtocolParams::new(args.n_total, n_key, n_pe, args.q_tol, args.f, eps)
        .map_err(CliError::from)
}

/// Prints to stdout, or writes the file named by --out.
fn emit(output: &OutputArgs, text: &str) -> Result<(), CliError> {
    match &output.out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError { code: 4, message: format!("{}: {e}", path.display()) }),
    }
}

fn cmd_bound(args: BoundArgs) -> Result<(), CliError> {
    let params = resolve_params(&args.params)?;
    let report = analyze(&params)?;
    let known = match args.known_bits {
        Some(t) => Some(output::KnownBits { t, bound: known_bits_bound(report.n2, t)? }),
        None => None,
    };
    let text = output::render_bound(&params, &report, known, args.output.format, args.output.digits);
    emit(&args.output, &text)
}

fn cmd_fixed_point(args: FixedPointArgs) -> Result<(), CliError> {
    let params = resolve_params(&args.params)?;
    let fp = fixed_point_n2(&params)?;
    let text = output::render_fixed_point(&params, &fp, args.output.format, args.output.digits);
    emit(&args.output, &text)
}

fn cmd_tables(args: TablesArgs) -> Result<(), CliError> {
    let rows = reference_rows()?;
    let text = output::render_tables(&rows, args.output.format, args.output.digits);
    emit(&args.output, &text)
}

/// `path` with `suffix` appended to its final component.
fn path_with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(suffix);
    PathBuf::from(name)
}

fn cmd_hash(args: HashArgs) -> Result<(), CliError> {
    if args.n_key == 0 {
        return Err(CliError::usage("--n-key must be positive"));
    }
    if let Some(m) = args.truncate_to {
        if args.out.is_none() {
            return Err(CliError::usage("--truncate-to requires --out"));
        }
        if m == 0 || m > args.n_key {
            return Err(CliError::usage(format!(
                "--truncate-to must be between 1 and --n-key ({})",
                args.n_key
            )));
        }
    }
    let (bits, keys) = read_key_file(&args.key_file)
        .map_err(|e| CliError { code: 4, message: format!("{}: {e}", args.key_file.display()) })?;
    let n = args.n_key as usize;
    let matrix = match args.kind {
        KindArg::Random => random_matrix(HashSeed(args.seed), n, bits),
        KindArg::Toeplitz => toeplitz_matrix(HashSeed(args.seed), n, bits),
    }?;
    let hashed: Vec<BitVector> = keys
        .iter()
        .map(|k| matrix.hash_key(k))
        .collect::<Result<_, _>>()?;
    match &args.out {
        None => {
            print!("{}", key_file_to_string(n, &hashed));
        }
        Some(out) => {
            write_key_file(out, n, &hashed)?;
            println!("wrote {}", out.display());
            if let Some(m) = args.truncate_to {
                let m = m as usize;
                let truncated: Vec<BitVector> = hashed
                    .iter()
                    .map(|k| k.truncated(m))
                    .collect::<Result<_, _>>()?;
                let path = path_with_suffix(out, ".truncated");
                write_key_file(&path, m, &truncated)?;
                println!("wrote {}", path.display());
            }
            let path = path_with_suffix(out, ".matrix");
            write_matrix_file(&path, &matrix)?;
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn cmd_oracle(args: OracleArgs) -> Result<(), CliError> {
    if suites::run(args.seed) {
        println!("oracle suite: all invariants hold");
        Ok(())
    } else {
        println!("oracle suite: FAILED");
        Err(CliError::oracle_failure("one or more oracle invariants failed"))
    }
}
