//! `wpc`: quadruple checks, polytope reports, class atlases and polygon
//! classification from the command line.

mod commands;
mod config;
mod svg;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{Config, Format, Overrides, ATLAS_DIR_ENV};

#[derive(Debug, Parser)]
#[command(
    name = "wpc",
    version,
    about = "Weighted plane curves, their polytopes and polygon classes"
)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Directory for atlas files; beats WPC_ATLAS_DIR and wpc.toml.
    #[arg(long, global = true)]
    atlas_dir: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Shorthand for `--format json`.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Quadruple validity.
    #[command(subcommand)]
    Quad(QuadCommand),
    /// Polytope of a quadruple.
    #[command(subcommand)]
    Poly(PolyCommand),
    /// Group the g-good quadruples up to a degree bound into polygon classes.
    Classify(ClassifyArgs),
    /// Abstract lattice polygons.
    #[command(subcommand)]
    Polygons(PolygonsCommand),
    /// Carry a curve from one quadruple to another in the same class.
    MapCurve(MapCurveArgs),
}

#[derive(Debug, Subcommand)]
enum QuadCommand {
    /// Report the monomial conditions and the genus.
    Check(QuadArgs),
}

#[derive(Debug, Args)]
struct QuadArgs {
    #[arg(allow_negative_numbers = true)]
    w0: i64,
    #[arg(allow_negative_numbers = true)]
    w1: i64,
    #[arg(allow_negative_numbers = true)]
    w2: i64,
    #[arg(allow_negative_numbers = true)]
    d: i64,
}

#[derive(Debug, Subcommand)]
enum PolyCommand {
    /// Lattice points, minors, distinguished triangle and projection.
    Analyze(AnalyzeArgs),
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    quad: QuadArgs,
    /// Write an SVG of the projected polygon.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Write the projected polygon as JSON.
    #[arg(long)]
    polygon_json: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    #[arg(long)]
    genus: u64,
    #[arg(long)]
    dmax: i64,
    /// Also write the member table as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Class counts at these degree bounds, comma separated.
    #[arg(long, value_delimiter = ',')]
    steps: Vec<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum MethodArg {
    Inductive,
    Box,
}

#[derive(Debug, Subcommand)]
enum PolygonsCommand {
    /// Canonical forms of all classes with `g` interior points, one JSON line each.
    Enum(EnumArgs),
    /// Canonical form of a polygon read from a JSON file (`-` for stdin).
    Canonical(CanonicalArgs),
    /// Whether two polygons are equivalent, with a witness map.
    Equiv(EquivArgs),
    /// Random checks of Pick counts, triangulations and canonical forms.
    Fuzz(FuzzArgs),
}

#[derive(Debug, Args)]
struct EnumArgs {
    #[arg(long)]
    genus: u64,
    #[arg(long, value_enum, default_value = "inductive")]
    method: MethodArg,
    /// Grid bound for the box method.
    #[arg(long = "box")]
    bound: Option<i64>,
    /// Largest lattice-point count for the inductive method.
    #[arg(long)]
    nmax: Option<usize>,
    /// Run both methods and fail on any difference.
    #[arg(long)]
    cross_check: bool,
}

#[derive(Debug, Args)]
struct CanonicalArgs {
    polygon: PathBuf,
    /// Allow orientation-preserving maps only.
    #[arg(long)]
    special: bool,
}

#[derive(Debug, Args)]
struct EquivArgs {
    first: PathBuf,
    second: PathBuf,
    /// Print every witness map.
    #[arg(long)]
    all: bool,
}

#[derive(Debug, Args)]
struct FuzzArgs {
    #[arg(long, default_value_t = 1)]
    genus: u64,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Random maps per sampled polygon.
    #[arg(long, default_value_t = 100)]
    maps: usize,
    #[arg(long)]
    nmax: Option<usize>,
}

#[derive(Debug, Args)]
struct MapCurveArgs {
    /// Source quadruple, e.g. `1,3,2,7`.
    #[arg(long, value_parser = parse_quadruple)]
    from: wpc_core::Quadruple,
    /// Target quadruple.
    #[arg(long, value_parser = parse_quadruple)]
    to: wpc_core::Quadruple,
    /// Curve JSON; defaults to every monomial with coefficient one.
    #[arg(long)]
    curve: Option<PathBuf>,
}

fn parse_quadruple(s: &str) -> Result<wpc_core::Quadruple, String> {
    let parts: Vec<i64> = s
        .split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|e| format!("{x:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [a, b, c, d] => wpc_core::Quadruple::new(a, b, c, d).map_err(|e| e.to_string()),
        _ => Err(format!("expected four comma-separated integers, got {s:?}")),
    }
}

/// A failed command and its exit status.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: 1,
            message: message.into(),
        }
    }

    pub fn invariant(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<wpc_core::Error> for CliError {
    fn from(e: wpc_core::Error) -> Self {
        CliError {
            code: if e.is_invariant_violation() { 2 } else { 1 },
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::usage(e.to_string())
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let flags = Overrides {
        threads: cli.threads,
        atlas_dir: cli.atlas_dir.clone(),
        format: if cli.json {
            Some(Format::Json)
        } else {
            cli.format
        },
        seed: match &cli.command {
            Command::Polygons(PolygonsCommand::Fuzz(a)) => a.seed,
            _ => None,
        },
    };
    let cwd = std::env::current_dir()?;
    let env_atlas = std::env::var_os(ATLAS_DIR_ENV).map(PathBuf::from);
    let config = Config::load(&cwd, env_atlas, &flags)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = config.threads {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| CliError::usage(e.to_string()))?;
    pool.install(|| commands::dispatch(cli.command, &config))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
