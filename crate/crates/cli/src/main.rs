//! `bandcert`: band structure and certified spectral gaps of periodic
//! graphs given as quotient-graph JSON files.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use bandcert_core::floquet;
use bandcert_core::io::{parse_spec, parse_spec_structural, ReportFile};
use bandcert_core::pipeline::analyze;
use bandcert_core::{AnalysisOptions, GraphSpec};

/// Exit code for a failed inclusion verdict: the sampled bands escaped the
/// bracketing intervals, which signals an internal inconsistency rather
/// than bad input.
const EXIT_INCONSISTENT: u8 = 3;

const POINT_WARN_THRESHOLD: u128 = 10_000_000;

#[derive(Parser)]
#[command(
    name = "bandcert",
    about = "Band structure and certified spectral gaps of periodic graphs",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Spec file (JSON quotient graph).
    spec: PathBuf,
    /// Torus grid resolution per dimension (even, at least 2).
    #[arg(long, default_value_t = 32)]
    grid: usize,
    /// Relative tolerance for flagging flat-band candidates.
    #[arg(long, default_value_t = 1e-8)]
    flat_tol: f64,
    /// Re-scan a neighborhood of each band extremum at 8x resolution.
    #[arg(long)]
    refine: bool,
    /// Write the output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Try all per-class gauge offsets with components in [-R, R] and keep
    /// the gauge certifying the most gap length.
    #[arg(long, default_value_t = 0, value_name = "R")]
    gauge_radius: i64,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a spec file describes a connected periodic graph.
    Validate {
        spec: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample the spectral bands and report the observed gaps.
    Bands(CommonArgs),
    /// Bracket every band between finite-graph eigenvalues and certify gaps.
    Bracket(CommonArgs),
    /// Upper bounds on the total length of all spectral bands.
    Estimate(CommonArgs),
    /// Emit the full JSON report.
    Report(CommonArgs),
    /// Sample the bands along a piecewise-linear quasimomentum path (CSV).
    Bandpath {
        spec: PathBuf,
        /// Waypoints as colon-separated points of comma-separated
        /// components; components accept plain numbers or multiples of pi
        /// ("pi", "-pi", "0.5pi").
        #[arg(long)]
        path: String,
        /// Subdivisions per path segment.
        #[arg(long, default_value_t = 50)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("THREADS") {
        match threads.parse::<usize>() {
            Ok(n) if n >= 1 => {
                if let Err(e) = bandcert_core::configure_threads(n) {
                    eprintln!("error: {e}");
                    return ExitCode::FAILURE;
                }
            }
            _ => {
                eprintln!("error: THREADS must be a positive integer, got `{threads}`");
                return ExitCode::FAILURE;
            }
        }
    }
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Box<dyn std::error::Error>> {
    match cli.command {
        Command::Validate { spec, out } => {
            let text = read_spec(&spec)?;
            let parsed = parse_spec_structural(&text)?;
            let report = parsed.validate()?;
            let mut buf = String::new();
            writeln!(buf, "dimension: {}", parsed.dimension)?;
            writeln!(buf, "classes: {}, edges: {}", parsed.nu(), parsed.edges.len())?;
            writeln!(
                buf,
                "fundamental multigraph connected: {}",
                yes_no(report.multigraph_connected)
            )?;
            writeln!(
                buf,
                "cycle lattice spans Z^d: {} (invariant factors {:?})",
                yes_no(report.lattice_spans),
                report.invariant_factors
            )?;
            writeln!(buf, "degrees finite: {}", yes_no(report.degrees_finite))?;
            writeln!(buf, "valid: {}", yes_no(report.is_valid()))?;
            emit(&out, &buf)?;
            if let Some(reason) = report.failure_reason() {
                eprintln!("error: invalid spec: {reason}");
                return Ok(ExitCode::FAILURE);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Bands(args) => {
            let (spec, options) = load(&args)?;
            let analysis = analyze(&spec, &options)?;
            let mut buf = String::new();
            for entry in ReportFile::from_analysis(&analysis).bands {
                write!(buf, "band {}: [{}, {}]", entry.n, entry.lo, entry.hi)?;
                if entry.flat_candidate {
                    write!(buf, " flat-candidate")?;
                }
                writeln!(buf)?;
            }
            if analysis.bands.gaps.is_empty() {
                writeln!(buf, "no gaps observed")?;
            } else {
                for gap in &analysis.bands.gaps {
                    writeln!(buf, "gap observed: ({}, {})", gap.lo, gap.hi)?;
                }
            }
            emit(&args.out, &buf)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Bracket(args) => {
            let (spec, options) = load(&args)?;
            let analysis = analyze(&spec, &options)?;
            let out = BracketOut::from(&analysis);
            emit(
                &args.out,
                &format!("{}\n", serde_json::to_string_pretty(&out)?),
            )?;
            finish_checked(&analysis)
        }
        Command::Estimate(args) => {
            let (spec, options) = load(&args)?;
            let analysis = analyze(&spec, &options)?;
            let mut buf = String::new();
            writeln!(buf, "est1 = {}", analysis.report.est1)?;
            writeln!(buf, "est2 = {}", analysis.report.est2)?;
            writeln!(
                buf,
                "total_band_length = {}",
                analysis.report.total_band_length
            )?;
            emit(&args.out, &buf)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Report(args) => {
            let (spec, options) = load(&args)?;
            let analysis = analyze(&spec, &options)?;
            let report = ReportFile::from_analysis(&analysis);
            emit(&args.out, &format!("{}\n", report.to_json()))?;
            finish_checked(&analysis)
        }
        Command::Bandpath {
            spec,
            path,
            steps,
            out,
        } => {
            let parsed = parse_spec(&read_spec(&spec)?)?;
            let waypoints = parse_path(&path, parsed.dimension)?;
            let rows = floquet::band_path(&parsed, &waypoints, steps)?;
            let mut buf = String::new();
            write!(buf, "s")?;
            for i in 1..=parsed.dimension {
                write!(buf, ",theta_{i}")?;
            }
            for i in 1..=parsed.nu() {
                write!(buf, ",lambda_{i}")?;
            }
            writeln!(buf)?;
            for row in rows {
                write!(buf, "{}", row.arclength)?;
                for t in &row.theta {
                    write!(buf, ",{t}")?;
                }
                for v in &row.values {
                    write!(buf, ",{v}")?;
                }
                writeln!(buf)?;
            }
            emit(&out, &buf)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Bracketing output: the interval families and certificates, plus the
/// gauge they were computed at.
#[derive(Serialize)]
struct BracketOut {
    gauge_offsets: Vec<Vec<i64>>,
    #[serde(rename = "J")]
    j: Vec<[f64; 2]>,
    #[serde(rename = "J_tilde")]
    j_tilde: Vec<[f64; 2]>,
    #[serde(rename = "J_cap")]
    j_cap: Vec<Option<[f64; 2]>>,
    inclusion_ok: bool,
    certified_gaps: Vec<[f64; 2]>,
    estimates: bandcert_core::io::Estimates,
}

impl From<&bandcert_core::Analysis> for BracketOut {
    fn from(analysis: &bandcert_core::Analysis) -> Self {
        let file = ReportFile::from_analysis(analysis);
        BracketOut {
            gauge_offsets: analysis.gauge_offsets.clone(),
            j: file.j,
            j_tilde: file.j_tilde,
            j_cap: file.j_cap,
            inclusion_ok: file.inclusion_ok,
            certified_gaps: file.certified_gaps,
            estimates: file.estimates,
        }
    }
}

fn yes_no(flag: bool) -> &'static str {
    if flag {
        "yes"
    } else {
        "no"
    }
}

fn read_spec(path: &PathBuf) -> Result<String, Box<dyn std::error::Error>> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn load(args: &CommonArgs) -> Result<(GraphSpec, AnalysisOptions), Box<dyn std::error::Error>> {
    let spec = parse_spec(&read_spec(&args.spec)?)?;
    let points = (args.grid as u128).pow(spec.dimension.min(u32::MAX as usize) as u32);
    if points > POINT_WARN_THRESHOLD {
        eprintln!(
            "warning: grid has {points} points ({} per dimension in {} dimensions)",
            args.grid, spec.dimension
        );
    }
    let options = AnalysisOptions {
        grid: args.grid,
        flat_tol: args.flat_tol,
        refine: args.refine,
        gauge_radius: args.gauge_radius,
    };
    Ok((spec, options))
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), Box<dyn std::error::Error>> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| format!("{}: {e}", path.display()).into()),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn finish_checked(analysis: &bandcert_core::Analysis) -> Result<ExitCode, Box<dyn std::error::Error>> {
    if analysis.report.inclusion_ok {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("error: inclusion verdict failed: sampled bands escaped the bracketing intervals");
        Ok(ExitCode::from(EXIT_INCONSISTENT))
    }
}

/// Parses "a,b:c,d:..." into waypoints; components are plain numbers or
/// multiples of pi such as "pi", "-pi", "0.5pi".
fn parse_path(text: &str, dimension: usize) -> Result<Vec<Vec<f64>>, String> {
    let mut waypoints = Vec::new();
    for (i, point) in text.split(':').enumerate() {
        let components: Result<Vec<f64>, String> = point
            .split(',')
            .map(|c| parse_component(c.trim()))
            .collect();
        let components = components?;
        if components.len() != dimension {
            return Err(format!(
                "waypoint {i} (`{point}`) has {} components, expected {dimension}",
                components.len()
            ));
        }
        waypoints.push(components);
    }
    Ok(waypoints)
}

fn parse_component(text: &str) -> Result<f64, String> {
    if let Some(prefix) = text.strip_suffix("pi") {
        let factor = match prefix {
            "" | "+" => 1.0,
            "-" => -1.0,
            other => other
                .parse::<f64>()
                .map_err(|_| format!("bad path component `{text}`"))?,
        };
        return Ok(factor * std::f64::consts::PI);
    }
    text.parse::<f64>()
        .map_err(|_| format!("bad path component `{text}`"))
}
