//! `cpdeg`: critical point degree analysis of periodic graph operators.
//!
//! Exit status is 0 on success, 2 when the input (graph document, parameter
//! file, seed) is rejected, and 1 for any other failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use cpdeg_core::analysis::Analysis;
use cpdeg_core::bounds::compute_bounds;
use cpdeg_core::graph::parse_graph;
use cpdeg_core::params::{parse_params, DEFAULT_SEED};
use cpdeg_core::report::{self, ReportOptions};
use cpdeg_core::Error;

const SEED_ENV: &str = "BLOCH_SEED";

#[derive(Parser)]
#[command(
    name = "cpdeg",
    version,
    about = "Bounds on the number of critical points of periodic graph operators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the dispersion polynomial and its support.
    Dispersion(Common),
    /// Print the Newton polytope: vertices, facet normals, volume.
    Polytope(Common),
    /// Print every face with its classification and initial-form data.
    Faces(Common),
    /// Compute the upper and corner lower bounds.
    Bounds(Common),
    /// Compute the critical points at the corners of the real torus.
    Corners(Common),
    /// Run the full pipeline and emit the analysis report.
    Report(Common),
}

#[derive(Args)]
struct Common {
    /// Graph document (JSON).
    input: PathBuf,
    /// Parameter values (JSON object: symbol → integer or "p/q").
    #[arg(long)]
    params: Option<PathBuf>,
    /// Run the singular-point refinement of the disconnected-face count.
    #[arg(long)]
    refine: bool,
    /// Seed for random parameter draws; the BLOCH_SEED variable overrides it.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Write the initial graph of every face to DIR/face_<id>.dot.
    #[arg(long, value_name = "DIR")]
    emit_dot: Option<PathBuf>,
    /// Write the Newton polytope in OFF format (three-dimensional only).
    #[arg(long, value_name = "FILE")]
    emit_off: Option<PathBuf>,
    /// Write the JSON output to FILE instead of standard output.
    #[arg(long, value_name = "FILE")]
    json: Option<PathBuf>,
}

enum Failure {
    Input(String),
    Other(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Other(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Syntax { .. }
            | Error::InvalidGraph(_)
            | Error::InvalidParams(_)
            | Error::MissingParameter(_)
            | Error::DimensionMismatch { .. }
            | Error::SizeGuard { .. } => Failure::Input(e.to_string()),
            other => Failure::Other(other.into()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn seed(flag: u64) -> Result<u64, Failure> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Input(format!("{SEED_ENV}={v:?} is not a nonnegative integer"))),
        Err(_) => Ok(flag),
    }
}

fn write_json(value: &impl serde::Serialize, to: Option<&Path>) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).context("serializing output")? + "\n";
    match to {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn emit_files(an: &Analysis, c: &Common) -> Result<(), Failure> {
    if let Some(dir) = &c.emit_dot {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for face in &an.faces {
            let g = an.initial(face)?.graph;
            let path = dir.join(format!("face_{}.dot", face.id));
            fs::write(&path, g.to_dot(&format!("face_{}", face.id)))
                .with_context(|| format!("writing {}", path.display()))?;
        }
    }
    if let Some(path) = &c.emit_off {
        fs::write(path, an.polytope.to_off()?)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let (Command::Dispersion(c)
    | Command::Polytope(c)
    | Command::Faces(c)
    | Command::Bounds(c)
    | Command::Corners(c)
    | Command::Report(c)) = &cli.command;
    let graph = parse_graph(&read(&c.input)?)?;
    let params = match &c.params {
        Some(p) => Some(parse_params(&read(p)?, &graph.symbols())?),
        None => None,
    };
    let opts = ReportOptions {
        params,
        seed: seed(c.seed)?,
        refine: c.refine,
    };
    let an = Analysis::new(graph)?;
    emit_files(&an, c)?;
    let out = c.json.as_deref();
    match &cli.command {
        Command::Dispersion(_) => {
            let d = report::dispersion_section(&an);
            if out.is_some() {
                write_json(&d, out)?;
            } else {
                println!("{}", d.polynomial);
                println!(
                    "terms: {} ({} with parameter monomials)  cycle covers: {}",
                    d.terms, d.expanded_terms, d.cycle_covers
                );
                for p in &d.support {
                    println!("{p:?}");
                }
            }
        }
        Command::Polytope(_) => write_json(&report::polytope_section(&an), out)?,
        Command::Faces(_) => write_json(&report::face_table(&an, &opts)?, out)?,
        Command::Bounds(_) => {
            let b = compute_bounds(&an, &opts.bound_options())?;
            write_json(&b, out)?;
        }
        Command::Corners(_) => write_json(&report::corner_section(&an, &opts)?, out)?,
        Command::Report(_) => write_json(&report::build_report(&an, &opts)?, out)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
