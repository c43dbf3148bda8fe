//! `opnorm`: command-line front end. Every command prints one JSON report
//! line on stdout; diagnostics go to stderr.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use opnorm_core::io::MatrixFormat;
use opnorm_core::{Error, Exponent, NormKind};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "opnorm",
    version,
    about = "Matrix p->q norms, Label Cover reductions and embeddings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate ||A||_{p->q} of a matrix file.
    Norm(NormArgs),
    /// Build the reduction matrix of a Label Cover instance.
    Reduce(ReduceArgs),
    /// Build an embedding into l_q and measure its distortion.
    Embed(EmbedArgs),
    /// Check multiplicativity of the norm under tensor products.
    Tensor(TensorArgs),
    /// Run acceptance suites by name or number (all when none given).
    Verify(VerifyArgs),
    /// Time the exact and heuristic engines on random square matrices.
    Bench(BenchArgs),
}

fn exponent(s: &str) -> Result<Exponent, String> {
    s.parse::<Exponent>().map_err(|e| e.to_string())
}

fn kind(s: &str) -> Result<NormKind, String> {
    s.parse::<NormKind>().map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    /// Exact route if one exists, else the heuristic.
    Auto,
    /// Fail unless an exact route applies.
    Exact,
    Heuristic,
    /// Angle grid, at most three columns.
    Grid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Mm,
    Csv,
    Bin,
}

impl From<Format> for MatrixFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Mm => MatrixFormat::MatrixMarket,
            Format::Csv => MatrixFormat::Csv,
            Format::Bin => MatrixFormat::Binary,
        }
    }
}

#[derive(Args, Serialize)]
pub struct EngineArgs {
    #[arg(long, value_enum, default_value = "auto")]
    pub engine: Engine,
    /// Random restarts of the heuristic.
    #[arg(long, default_value_t = 16)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest sign-enumeration dimension.
    #[arg(long, default_value_t = 24)]
    pub max_enum_dim: usize,
    /// Grid cells per half-turn for the grid engine.
    #[arg(long, default_value_t = 512)]
    pub grid_resolution: usize,
}

#[derive(Args, Serialize)]
pub struct NormArgs {
    /// Matrix Market, CSV or binary matrix file.
    pub matrix: PathBuf,
    /// Domain exponent, a real >= 1 or "inf".
    #[arg(long, value_parser = exponent)]
    pub p: Exponent,
    /// Target exponent, a real >= 1 or "inf".
    #[arg(long, value_parser = exponent)]
    pub q: Exponent,
    /// "counting" or "expectation".
    #[arg(long, value_parser = kind, default_value = "counting")]
    pub kind: NormKind,
    #[command(flatten)]
    pub engine: EngineArgs,
}

#[derive(Args, Serialize)]
pub struct ReduceArgs {
    /// Instance file; omit to plant one with the --vertices.. flags.
    #[arg(long, conflicts_with = "vertices")]
    pub instance: Option<PathBuf>,
    /// Labeling file, checked for completeness.
    #[arg(long, requires = "instance")]
    pub labeling: Option<PathBuf>,
    #[arg(long)]
    pub vertices: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub degree: usize,
    #[arg(long, default_value_t = 2)]
    pub big_labels: usize,
    #[arg(long, default_value_t = 2)]
    pub small_labels: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Plant a scrambled (not necessarily satisfiable) instance.
    #[arg(long)]
    pub scrambled: bool,
    /// Write the planted instance here.
    #[arg(long)]
    pub instance_out: Option<PathBuf>,
    /// Output matrix file.
    #[arg(long)]
    pub out: PathBuf,
    /// Output format; defaults from the extension, else Matrix Market.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Cap on the matrix dimension V * 2^R.
    #[arg(long, default_value_t = 8192)]
    pub max_dim: usize,
    /// Also estimate the expectation 2->r norm with this r.
    #[arg(long)]
    pub soundness_r: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EmbedKind {
    Gaussian,
    Kwise,
    Stable,
}

#[derive(Args, Serialize)]
pub struct EmbedArgs {
    #[arg(value_enum)]
    pub kind: EmbedKind,
    /// Source dimension.
    #[arg(long)]
    pub n: usize,
    /// Target exponent q.
    #[arg(long)]
    pub q: f64,
    /// Rows of the Gaussian embedding.
    #[arg(long, default_value_t = 20_000)]
    pub m: usize,
    /// Source exponent of the stable embedding.
    #[arg(long, default_value_t = 1.5)]
    pub p: f64,
    #[arg(long, default_value_t = 0.2)]
    pub eps: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Test vectors.
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    /// Write the embedding matrix here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Serialize)]
pub struct TensorArgs {
    pub a: PathBuf,
    /// Second factor; with it the run compares ||A (x) B|| with ||A|| ||B||.
    pub b: Option<PathBuf>,
    #[arg(long, value_parser = exponent)]
    pub p: Exponent,
    #[arg(long, value_parser = exponent)]
    pub q: Exponent,
    /// Tensor power of A to check instead.
    #[arg(long, conflicts_with = "b")]
    pub k: Option<usize>,
    /// Cap on entries of the product matrix.
    #[arg(long, default_value_t = opnorm_core::linalg::DEFAULT_MAX_ENTRIES)]
    pub max_entries: usize,
    /// Relative tolerance of the equality check.
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
    #[arg(long, default_value_t = 16)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 24)]
    pub max_enum_dim: usize,
    #[arg(long, default_value_t = 512)]
    pub grid_resolution: usize,
}

#[derive(Args, Serialize)]
pub struct VerifyArgs {
    pub suites: Vec<String>,
}

#[derive(Args, Serialize)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value = "auto")]
    pub engine: BenchEngine,
    /// Comma-separated matrix sizes.
    #[arg(long, value_delimiter = ',', default_value = "4,8,12,16")]
    pub sizes: Vec<usize>,
    #[arg(long, value_parser = exponent, default_value = "inf")]
    pub p: Exponent,
    #[arg(long, value_parser = exponent, default_value = "1.5")]
    pub q: Exponent,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BenchEngine {
    Exact,
    Heuristic,
    /// Both engines on every size.
    Auto,
}

/// What went wrong, mapped onto the exit code.
#[derive(Debug)]
pub enum Failure {
    Core(Error),
    Usage(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Core(Error::Resource(_)) => 3,
            Failure::Core(_) | Failure::Usage(_) => 2,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Usage(m) => write!(f, "{m}"),
            Failure::Verification(m) => write!(f, "verification failed: {m}"),
        }
    }
}

fn init_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("OPNORM_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        Failure::Usage(format!(
            "OPNORM_THREADS must be a positive integer, got {raw:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Usage(format!("cannot size the thread pool: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = init_threads().and_then(|_| match &cli.command {
        Command::Norm(a) => commands::norm(a),
        Command::Reduce(a) => commands::reduce(a),
        Command::Embed(a) => commands::embed(a),
        Command::Tensor(a) => commands::tensor(a),
        Command::Verify(a) => commands::verify(a),
        Command::Bench(a) => commands::bench(a),
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("opnorm: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
