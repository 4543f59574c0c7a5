mod commands;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use harmonia::geodesy::MetricKind;
use harmonia::suite::DEFAULT_SEED;

const EXIT_CODES: &str = "\
Exit codes:
  0  success
  1  a checked property failed (verify, nochka bullets, defect relation)
  2  input error: unreadable or malformed files, bad flags, unmet preconditions
  3  degenerate geometry: singular immersion points or curves inside a hyperplane

Set HARMONIA_THREADS to cap the number of worker threads.";

#[derive(Parser)]
#[command(name = "harmonia", version, about = "Harmonic surfaces, their Gauss maps and value distribution", after_help = EXIT_CODES)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone, Debug)]
pub struct Common {
    /// Directory that receives the reports; created if missing.
    #[arg(long, global = true, default_value = "harmonia-out")]
    pub out: PathBuf,
    /// Seed for the randomized property suites.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Table format; `svg` also writes a heatmap where a grid field exists.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum Metric {
    Induced,
    Klotz,
}

impl From<Metric> for MetricKind {
    fn from(m: Metric) -> Self {
        match m {
            Metric::Induced => MetricKind::Induced,
            Metric::Klotz => MetricKind::Klotz,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Metric, Hopf differential and curvature over the grid, plus the
    /// quasiconformal constant K.
    Analyze {
        /// Surface config: {"dimension", "phi", "domain"}.
        #[arg(long)]
        config: PathBuf,
        /// Override the grid resolution of the config.
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Run the numbered verification criteria.
    Verify {
        /// A suite name (surface, gauss, derived, nochka, defect, geodesy) or a criterion number.
        #[arg(long)]
        only: Option<String>,
        /// Hyperplanes for checking the weights given with --weights.
        #[arg(long, requires = "weights")]
        planes: Option<PathBuf>,
        /// Weights file {"omega", "theta", "n", "k"} to check against --planes.
        #[arg(long, requires = "planes")]
        weights: Option<PathBuf>,
    },
    /// Classical defects of a polynomial curve, and modified defects from
    /// harmonic certificates.
    Defect {
        /// Curve config {"curve", "domain"} or a surface config, whose Gauss map is used.
        #[arg(long)]
        config: PathBuf,
        /// Hyperplanes [{"normal": [[re, im], ...]}, ...].
        #[arg(long)]
        planes: PathBuf,
        /// Certificates [{"plane", "eta", "mu": {"c", "g", "hre"}}, ...].
        #[arg(long)]
        certificates: Option<PathBuf>,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Nochka weights of hyperplanes in subgeneral position, with every
    /// weight property checked. Exits 1 if one fails.
    Nochka {
        #[arg(long)]
        planes: PathBuf,
        /// Subgeneral index n; defaults to k (general position).
        #[arg(long)]
        subgeneral: Option<usize>,
    },
    /// Grid distance to the boundary under the induced or Klotz metric.
    Geodesic {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum, default_value_t = Metric::Induced)]
        metric: Metric,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Empirical constant C in |K| <= C / d^2 for a surface whose normal
    /// omits seven directions. Exits 2 if the directions are unsuitable.
    CurvatureScan {
        #[arg(long)]
        config: PathBuf,
        /// Seven directions [[x, y, z], ...].
        #[arg(long)]
        directions: PathBuf,
        #[arg(long)]
        grid: Option<usize>,
    },
}

/// Why a command stopped, mapped onto the exit code.
#[derive(Debug)]
pub enum Failure {
    Property(String),
    Input(String),
    Degenerate(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Property(_) => 1,
            Failure::Input(_) => 2,
            Failure::Degenerate(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Property(m) | Failure::Input(m) | Failure::Degenerate(m) => m,
        }
    }
}

impl From<harmonia::error::Error> for Failure {
    fn from(e: harmonia::error::Error) -> Self {
        use harmonia::error::Error::*;
        let msg = e.to_string();
        match e {
            DegeneratePoint(_) | NotQuasiconformal(_) | IndeterminatePoint(_) | DegenerateCurve => {
                Failure::Degenerate(msg)
            }
            Infeasible(_) | NoWitness(_) => Failure::Property(msg),
            _ => Failure::Input(msg),
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("HARMONIA_THREADS") else { return Ok(()) };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Input(format!("HARMONIA_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Input(format!("cannot size the thread pool: {e}")))
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads()?;
    let c = &cli.common;
    match cli.command {
        Command::Analyze { config, grid } => commands::analyze(c, &config, grid),
        Command::Verify { only, planes, weights } => {
            commands::verify(c, only.as_deref(), planes.as_deref().zip(weights.as_deref()))
        }
        Command::Defect { config, planes, certificates, grid } => {
            commands::defect(c, &config, &planes, certificates.as_deref(), grid)
        }
        Command::Nochka { planes, subgeneral } => commands::nochka(c, &planes, subgeneral),
        Command::Geodesic { config, metric, grid } => commands::geodesic(c, &config, metric.into(), grid),
        Command::CurvatureScan { config, directions, grid } => commands::curvature_scan(c, &config, &directions, grid),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("harmonia: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
