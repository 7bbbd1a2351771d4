//! `flecklab`: evaluate Fleck quotients, run the congruence suites, scan the
//! prime-power period conjecture and print class-field data.

mod args;
mod commands;
mod emit;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use flecklab::FleckError;

use emit::Format;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Lib(FleckError),
    Io(io::Error),
}

impl From<FleckError> for CliError {
    fn from(e: FleckError) -> Self {
        CliError::Lib(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Lib(e) => match e {
                FleckError::NotPrime(_)
                | FleckError::PreconditionViolation(_)
                | FleckError::NonUnit { .. } => 2,
                FleckError::ResourceLimit { .. } => 3,
                _ => 1,
            },
            CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o: {e}"),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "flecklab",
    version,
    about = "Fleck quotients and their congruences, computed exactly"
)]
struct Cli {
    /// Output format for data records.
    #[arg(long, value_enum, default_value = "json-lines", global = true)]
    format: Format,

    /// Worker threads (default: one per core).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate F_{p^a}(n, r) with its raw sum and normalizing exponent.
    Eval(EvalArgs),
    /// Run a named congruence suite.
    Verify(VerifyArgs),
    /// Search for counterexamples to the prime-power period conjecture.
    Scan(ScanArgs),
    /// Class numbers, fundamental unit and regularity for each prime.
    Class(ClassArgs),
    /// Tabulate F_{p^a}(n, r) over ranges of n and r.
    Table(TableArgs),
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    p: String,
    #[arg(long, default_value = "1")]
    a: String,
    #[arg(long, allow_hyphen_values = true)]
    n: String,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    r: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Thm11,
    Thm12,
    Thm13,
    Kummer,
    Remark,
    Classnum,
    Sharpness,
    Period,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    /// Prime or `lo..hi` range of primes.
    #[arg(long)]
    p: String,
    #[arg(long, allow_hyphen_values = true)]
    n: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    r: Option<String>,
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    l: Option<String>,
    /// Sub-family for the remark suite: all, wolstenholme, central_binomial,
    /// glaisher, binomial_pair, binomial_sum, half_sum_class_number,
    /// regularity_criterion.
    #[arg(long, default_value = "all")]
    selector: String,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long)]
    conjecture: String,
    #[arg(long, default_value = "2..3")]
    p: String,
    #[arg(long, default_value = "1..2")]
    a: String,
    #[arg(long, default_value = "1..2")]
    b: String,
    #[arg(long, default_value = "200")]
    n_max: String,
    #[arg(long, allow_hyphen_values = true)]
    r: Option<String>,
    /// File holding the last completed `p a b n r`; read to resume, rewritten
    /// after every block.
    #[arg(long)]
    cursor: Option<std::path::PathBuf>,
    /// Values of n evaluated per block.
    #[arg(long, default_value = "16")]
    block: usize,
    /// Stop after this many blocks.
    #[arg(long)]
    max_blocks: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ClassArgs {
    #[arg(long)]
    p: String,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long)]
    p: String,
    #[arg(long, default_value = "1")]
    a: String,
    #[arg(long, allow_hyphen_values = true)]
    n: String,
    #[arg(long, allow_hyphen_values = true)]
    r: Option<String>,
    /// Print least residues modulo p instead of exact values.
    #[arg(long)]
    residue: bool,
}

fn run(cli: Cli) -> Result<bool, CliError> {
    if let Ok(s) = std::env::var("FLECKLAB_MAX_N") {
        flecklab::sums::set_max_n(args::nonneg("FLECKLAB_MAX_N", &s)?);
    }
    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(j) = cli.jobs {
            if j == 0 {
                return Err(CliError::Usage("--jobs must be at least 1".into()));
            }
            b = b.num_threads(j);
        }
        b.build()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?
    };
    let format = cli.format;
    let mut buf = Vec::new();
    let out = &mut buf;
    let ok = pool.install(|| match &cli.command {
        Command::Eval(a) => commands::eval(a, format, out),
        Command::Verify(a) => commands::verify(a, format, out),
        Command::Scan(a) => commands::scan(a, format, out),
        Command::Class(a) => commands::class(a, format, out),
        Command::Table(a) => commands::table(a, format, out),
    })?;
    let mut stdout = io::stdout().lock();
    stdout.write_all(&buf)?;
    stdout.flush()?;
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("flecklab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
