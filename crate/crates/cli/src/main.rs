mod commands;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lpmink::Error;

#[derive(Parser, Debug)]
#[command(
    name = "lpmink",
    version,
    about = "Planar L_p Minkowski problem solver (0 < p < 1)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve S_{K,p} = μ for a measure given as JSON.
    Solve(SolveArgs),
    /// Check a polygon against a measure.
    Verify(VerifyArgs),
    /// L_p surface area measure of a polygon.
    Measure(MeasureArgs),
    /// Discretize a measure onto a grid of atoms.
    Discretize(DiscretizeArgs),
    /// Tables for the two explicit constructions.
    Gallery(GalleryArgs),
}

#[derive(Args, Debug)]
struct SolveArgs {
    /// Measure JSON.
    #[arg(long)]
    input: PathBuf,
    /// Polygon JSON; stdout if omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Report JSON; stdout if omitted.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, value_parser = parse_p)]
    p: f64,
    /// `auto`, `none`, `C<k>` or `D<k>:<axis>`.
    #[arg(long, default_value = "auto")]
    symmetry: String,
    #[arg(long)]
    m0: Option<usize>,
    #[arg(long)]
    m_max: Option<usize>,
    /// Residual tolerance of the discrete solver.
    #[arg(long)]
    tol: Option<f64>,
    /// Write an SVG plot of the body and the measure.
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Measure JSON.
    #[arg(long)]
    input: PathBuf,
    /// Polygon JSON.
    #[arg(long)]
    body: PathBuf,
    #[arg(long, value_parser = parse_p)]
    p: f64,
    /// Pass threshold (default 1e-6 for atomic measures, 1e-2 otherwise).
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MeasureArgs {
    /// Polygon JSON.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_parser = parse_p)]
    p: f64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DiscretizeArgs {
    /// Measure JSON.
    #[arg(long)]
    input: PathBuf,
    /// Number of atoms (approximate for symmetric grids).
    #[arg(long)]
    m: usize,
    /// `none`, `auto`, `C<k>` or `D<k>:<axis>`.
    #[arg(long, default_value = "none")]
    symmetry: String,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Example {
    Oboundary,
    Highdimno,
}

#[derive(Args, Debug)]
struct GalleryArgs {
    example: Example,
    #[arg(long)]
    p: f64,
    /// Ambient dimension (oboundary).
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Number of radii (oboundary).
    #[arg(long, default_value_t = 64)]
    samples: usize,
    /// Comma-separated polytope indices (highdimno).
    #[arg(long, value_delimiter = ',', default_value = "10,100,1000,10000")]
    m: Vec<f64>,
    /// Polytope JSON of the last `m` (highdimno).
    #[arg(long)]
    polytope: Option<PathBuf>,
    /// CSV output; stdout if omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn parse_p(s: &str) -> Result<f64, String> {
    let p: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if p > 0.0 && p < 1.0 {
        Ok(p)
    } else {
        Err(format!("p = {p} must lie in (0, 1)"))
    }
}

fn init_logging() {
    let level = match std::env::var("LPMINK_LOG").as_deref() {
        Ok("debug") => log::LevelFilter::Debug,
        Ok("info") => log::LevelFilter::Info,
        _ => log::LevelFilter::Off,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .init();
}

/// Exit status for a failed command.
pub(crate) fn exit_code(e: &Error) -> u8 {
    match e {
        Error::AntipodalPair => 2,
        Error::NoConvergence { .. } | Error::MaxItersExceeded(_) => 3,
        _ => 1,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidInput(_) => "invalid_input",
        Error::InvalidP(_) => "invalid_p",
        Error::AntipodalPair => "antipodal_pair",
        Error::NoConvergence { .. } => "no_convergence",
        Error::MaxItersExceeded(_) => "max_iters_exceeded",
        Error::NotSymmetric { .. } => "not_symmetric",
        Error::Unbounded => "unbounded",
        Error::EmptyBody => "empty_body",
        Error::OriginOutside { .. } => "origin_outside",
        _ => "error",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_logging();
    let result = match cli.command {
        Command::Solve(a) => commands::cmd_solve(a),
        Command::Verify(a) => commands::cmd_verify(a),
        Command::Measure(a) => commands::cmd_measure(a),
        Command::Discretize(a) => commands::cmd_discretize(a),
        Command::Gallery(a) => commands::cmd_gallery(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let body = serde_json::json!({ "error": error_kind(&e), "message": e.to_string() });
            eprintln!("{body}");
            ExitCode::from(exit_code(&e))
        }
    }
}
