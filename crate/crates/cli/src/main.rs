mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "apollo", version, about = "Exact Lorentzian computations for generalized Apollonian packings")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Lattice rank, 4 to 10.
    #[arg(long, global = true, value_parser = clap::value_parser!(u8).range(4..=10))]
    rho: Option<u8>,

    /// Largest curvature to keep. Defaults depend on rho.
    #[arg(long, global = true, value_parser = clap::value_parser!(i64).range(0..))]
    kmax: Option<i64>,

    /// Isotropic vector used as the point at infinity, e.g. "1,1,0,0".
    #[arg(long, global = true, allow_hyphen_values = true)]
    perspective: Option<String>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write the artifact here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Seed for randomized sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Csv,
    Dot,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WindowArg {
    Cell,
    Margin,
    Explored,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GraphArg {
    /// Reflection faces of the domain at --rho.
    Faces,
    Apollonian,
    Gamma,
    GammaPrime,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Domain checklist plus pairwise packing check at --kmax.
    Verify,
    /// Prism vertex tables.
    Vertices,
    /// Packing spheres up to --kmax.
    Enumerate {
        #[arg(long, value_enum, default_value_t = WindowArg::Cell)]
        window: WindowArg,
        /// Width of the margin window, in cells.
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(i64).range(1..))]
        margin: i64,
    },
    /// Certified tangent cluster containing a sphere.
    Cluster {
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
    },
    /// Coxeter graph of a generator set.
    Coxeter {
        #[arg(long, value_enum, default_value_t = GraphArg::Faces)]
        graph: GraphArg,
    },
    /// SVG figure: the strip gasket at rho 4, a cross-section at rho 5.
    Render,
    /// Descartes relation on random tangent clusters.
    Descartes {
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 12)]
        max_len: usize,
    },
}

/// Why a run did not succeed.
#[derive(Debug)]
pub enum Failure {
    /// Bad arguments; exit 2.
    Usage(String),
    /// A check failed; exit 1.
    Check(String),
}

impl From<apollonian::Error> for Failure {
    fn from(err: apollonian::Error) -> Self {
        use apollonian::Error as E;
        match err {
            E::Parse { .. }
            | E::RhoOutOfRange(_)
            | E::DimensionMismatch { .. }
            | E::NotIsotropic(_)
            | E::NotSpacelike(_)
            | E::Io(_) => Failure::Usage(err.to_string()),
            _ => Failure::Check(err.to_string()),
        }
    }
}

/// What a command produced.
pub struct Outcome {
    pub body: String,
    pub first_failure: Option<String>,
    /// Listed on stderr, never fatal.
    pub notes: Vec<String>,
}

fn init_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("APOLLO_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Usage(format!("APOLLO_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn run(cli: Cli) -> Result<Outcome, Failure> {
    init_threads()?;
    let ctx = commands::Ctx {
        rho: cli.rho.map(usize::from),
        kmax: cli.kmax,
        perspective: cli.perspective,
        format: cli.format,
        seed: cli.seed,
    };
    let outcome = match cli.command {
        Command::Verify => commands::verify(&ctx),
        Command::Vertices => commands::vertices(&ctx),
        Command::Enumerate { window, margin } => commands::enumerate(&ctx, window, margin),
        Command::Cluster { vector } => commands::cluster(&ctx, &vector),
        Command::Coxeter { graph } => commands::coxeter(&ctx, graph),
        Command::Render => commands::render(&ctx),
        Command::Descartes { samples, max_len } => commands::descartes(&ctx, samples, max_len),
    }?;
    match &cli.out {
        Some(path) => std::fs::write(path, &outcome.body)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(outcome.body.as_bytes());
        }
    }
    Ok(outcome)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) => {
            for note in &outcome.notes {
                eprintln!("note: {note}");
            }
            match outcome.first_failure {
                None => ExitCode::SUCCESS,
                Some(f) => {
                    eprintln!("FAIL: {f}");
                    ExitCode::from(1)
                }
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("FAIL: {msg}");
            ExitCode::from(1)
        }
    }
}
