mod commands;
mod table;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use areabound::asymptotics::Quantity;
use areabound::PalKind;
use clap::{Args, Parser, Subcommand};

use table::Format;

/// Exit statuses shared by every subcommand.
pub const EXIT_PASS: u8 = 0;
pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "areabound",
    version,
    about = "Area bounds for convex hypersurfaces from displacement maps"
)]
struct Cli {
    /// Worker threads for parallel evaluation (0 = all cores)
    #[arg(long, global = true, env = "AREABOUND_THREADS", default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Pretty)]
    pub format: Format,
    /// Write to this path instead of standard output
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Per-dimension constants table, or bound values at given ratios
    Constants {
        /// Dimensions: `a..b`, `a..=b`, `a,b,c` or a single value
        #[arg(long, default_value = "2..=10")]
        n: commands::Dims,
        /// Evaluate the bounds at these displacement ratios instead
        #[arg(long, value_delimiter = ',')]
        rho: Vec<f64>,
        #[arg(long, default_value = "pal_firey", value_parser = parse_kind)]
        kind: PalKind,
        #[command(flatten)]
        common: Common,
    },
    /// Check the branch-offset inequality over a range of dimensions
    ScanAb {
        #[arg(long, default_value = "2..=100000")]
        n: commands::Dims,
        #[arg(long, default_value = "pal_firey", value_parser = parse_kind)]
        kind: PalKind,
        #[command(flatten)]
        common: Common,
    },
    /// Compare exact quantities with their large-dimension asymptotics
    Asymptotics {
        #[arg(long, default_value = "log_h_n", value_parser = parse_quantity)]
        quantity: Quantity,
        #[arg(long, default_value = "100,1000,10000")]
        n: commands::Dims,
        #[arg(long, default_value = "pal_firey", value_parser = parse_kind)]
        kind: PalKind,
        /// Report the measured thresholds instead
        #[arg(long)]
        thresholds: bool,
        /// Scan limit for --thresholds
        #[arg(long, default_value_t = areabound::asymptotics::THRESHOLD_SCAN_LIMIT)]
        limit: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Run the inequality checks on a suite or on given bodies
    Verify {
        /// Named suite: default or quick
        #[arg(long, default_value = "default")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Override the suite's samples per estimator
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value = "pal_firey", value_parser = parse_kind)]
        kind: PalKind,
        /// Inline body, e.g. `cube:edge=2`; replaces the suite's bodies
        #[arg(long)]
        body: Vec<String>,
        /// Body file in the plain-text format; replaces the suite's bodies
        #[arg(long)]
        body_file: Vec<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Intrinsic distance between two boundary points
    Geodesic {
        #[arg(long, default_value = "cube")]
        body: String,
        #[arg(long)]
        body_file: Option<PathBuf>,
        /// `vertex:i`, `face-center:i` or comma-separated coordinates
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// Steiner points per polytope edge
        #[arg(long, default_value_t = areabound::geometry::DEFAULT_STEINER_POINTS)]
        subdiv: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Write body definitions, or convert a record file between formats
    Export {
        #[arg(long)]
        body: Vec<String>,
        /// Export every body of a named suite
        #[arg(long)]
        suite: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Record file (CSV or JSON lines) to re-emit in --format
        #[arg(long, conflicts_with_all = ["body", "suite"])]
        records: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

fn parse_kind(s: &str) -> Result<PalKind, String> {
    s.parse().map_err(|e: areabound::Error| e.to_string())
}

fn parse_quantity(s: &str) -> Result<Quantity, String> {
    s.parse().map_err(|e: areabound::Error| e.to_string())
}

/// Failure of a command, carrying its exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<areabound::Error> for Failure {
    fn from(e: areabound::Error) -> Self {
        use areabound::Error::*;
        let code = match e {
            Numerical { .. } | Divergence { .. } | InvalidMap(_) => EXIT_NUMERICAL,
            Domain(_) | Config(_) | Parse { .. } | Io(_) => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::usage(format!("i/o error: {e}"))
    }
}

pub fn open_output(common: &Common) -> Result<Box<dyn Write>, Failure> {
    Ok(match &common.output {
        Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|e| {
            Failure::usage(format!("cannot create {}: {e}", path.display()))
        })?)),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    })
}

fn run(cli: Cli) -> Result<u8, Failure> {
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .map_err(|e| Failure::usage(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::Constants {
            n,
            rho,
            kind,
            common,
        } => commands::constants(&n, &rho, kind, &common),
        Command::ScanAb { n, kind, common } => commands::scan_ab(&n, kind, &common),
        Command::Asymptotics {
            quantity,
            n,
            kind,
            thresholds,
            limit,
            common,
        } => {
            if thresholds {
                commands::thresholds(kind, limit, &common)
            } else {
                commands::asymptotics(quantity, &n, kind, &common)
            }
        }
        Command::Verify {
            suite,
            seed,
            samples,
            kind,
            body,
            body_file,
            common,
        } => commands::verify(&suite, seed, samples, kind, &body, &body_file, &common),
        Command::Geodesic {
            body,
            body_file,
            from,
            to,
            subdiv,
            common,
        } => commands::geodesic(&body, body_file.as_deref(), &from, &to, subdiv, &common),
        Command::Export {
            body,
            suite,
            seed,
            records,
            common,
        } => match records {
            Some(path) => commands::convert_records(&path, &common),
            None => commands::export_bodies(&body, suite.as_deref(), seed, &common),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
