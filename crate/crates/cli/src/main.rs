mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use formlab_core::analyze::DEFAULT_BUDGET;
use formlab_core::grassmann::DEFAULT_GRASS_CAP;

/// Exact rank, k-nullity and certificates for alternating forms.
#[derive(Debug, Parser)]
#[command(name = "formlab", version)]
pub struct Cli {
    /// Worker threads; falls back to FORMLAB_THREADS, then all cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Projective points allowed per nullity decision.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,

    /// Indent JSON output.
    #[arg(long, global = true)]
    pub pretty: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rank of a form and a basis of its radical.
    Rank(FormArgs),
    /// Exact k-nullity over a prime field, or a single decision.
    Nullity(NullityArgs),
    /// Bracket the nullity over Q between a witness and prime reductions.
    Certify(CertifyArgs),
    /// Triple form of a compact simple Lie algebra and its nullity certificate.
    Lie(LieArgs),
    /// Orbit label of a scalar 3-form of rank at most 6.
    Classify(FormArgs),
    /// Nullity frequencies of random scalar 3-forms.
    Scan(ScanArgs),
    /// Nullity frequencies of random vector-valued 2-forms.
    Goodwillie(GoodwillieArgs),
    /// Cross-checks of the wedge-span membership criterion.
    #[command(subcommand)]
    GrassCheck(GrassCommand),
    /// Cut-number bound implied by a rational cup form.
    CutBound(CutBoundArgs),
}

#[derive(Debug, Args)]
pub struct FormArgs {
    pub file: PathBuf,
    /// Reduce the form to this field first (`Q` or `gf:<p>`).
    #[arg(long)]
    pub field: Option<String>,
}

#[derive(Debug, Args)]
pub struct NullityArgs {
    pub file: PathBuf,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long)]
    pub field: Option<String>,
    /// Decide `null_k ≥ R`; exit 1 if it fails.
    #[arg(long, value_name = "R", conflicts_with = "assert_leq")]
    pub geq: Option<usize>,
    /// Decide `null_k ≤ R`; exit 1 if it fails.
    #[arg(long, value_name = "R")]
    pub assert_leq: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    pub file: PathBuf,
    #[arg(long, value_delimiter = ',', required = true)]
    pub primes: Vec<u64>,
}

#[derive(Debug, Args)]
pub struct LieArgs {
    /// Type and rank, e.g. `A2` or `G2`.
    #[arg(long = "type")]
    pub label: String,
    #[arg(long, value_delimiter = ',', default_value = "3")]
    pub primes: Vec<u64>,
    /// Write the form here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long, value_delimiter = ',', default_value = "4,5,6,7,8,9")]
    pub dims: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "3,5")]
    pub primes: Vec<u32>,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// Also write the per-cell counts as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Write every exemplar form into this directory.
    #[arg(long)]
    pub exemplars: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GoodwillieArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_delimiter = ',', default_value = "3,5,7")]
    pub primes: Vec<u32>,
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub exemplars: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum GrassCommand {
    /// Compare the enumeration criterion with the search on one form.
    Form(GrassFormArgs),
    /// Compare the wedge-span dimension formula with computed spans.
    Iota(IotaArgs),
}

#[derive(Debug, Args)]
pub struct GrassFormArgs {
    pub file: PathBuf,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, value_delimiter = ',', default_value = "2,3")]
    pub r: Vec<usize>,
    #[arg(long)]
    pub field: Option<String>,
    /// Largest Grassmannian the enumeration may visit.
    #[arg(long, default_value_t = DEFAULT_GRASS_CAP)]
    pub cap: u128,
}

#[derive(Debug, Args)]
pub struct IotaArgs {
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 5)]
    pub q: u32,
    #[arg(long, default_value_t = 8)]
    pub max_n: usize,
    /// Skip arities whose exterior power has more coordinates than this.
    #[arg(long, default_value_t = 70)]
    pub max_coords: u128,
    #[arg(long, default_value_t = 5)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct CutBoundArgs {
    pub file: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "3,5")]
    pub primes: Vec<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli
        .threads
        .or_else(|| std::env::var("FORMLAB_THREADS").ok().and_then(|v| v.parse().ok()));
    if let Some(t) = threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("formlab: cannot start {t} worker threads: {e}");
            return ExitCode::from(2);
        }
    }
    let invocation = commands::invocation(std::env::args());
    match commands::run(&cli, invocation) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("formlab: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
