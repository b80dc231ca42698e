//! `triphase` — scenario sweeps, figure presets, and the acceptance
//! selftest on the command line.
//!
//! Exit codes: 0 success, 1 configuration error, 2 numerical failure,
//! 3 I/O error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use triphase::acceptance;
use triphase::report;
use triphase::scenario::{self, Engine, Row, ScenarioConfig, ScenarioError};

/// Environment variable selecting the default worker count.
const JOBS_ENV: &str = "TRIPHASE_JOBS";

const EXIT_CONFIG: u8 = 1;
const EXIT_NUMERIC: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(
    name = "triphase",
    version,
    about = "Two-phase estimation sweeps for squeezed three-mode probes"
)]
struct Cli {
    /// Override the engine selection of every scenario.
    #[arg(long, global = true, value_enum)]
    engine: Option<EngineArg>,
    /// Worker threads for sweep points (default: $TRIPHASE_JOBS, else one
    /// per available core).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a scenario config file; CSV goes to stdout unless --out is
    /// given.
    Run {
        /// Scenario file in the `key = value` grammar.
        config: PathBuf,
        /// Write the CSV (plus a `.log` sidecar if any row carries a
        /// diagnostic) to this path instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a built-in figure preset into `<out>/<preset>.csv`.
    Figure {
        /// One of: fig2a, fig2b, fig3a, fig3b, fig4a, fig4b, fig5a, fig5b.
        preset: String,
        /// Output directory (created if missing).
        #[arg(long)]
        out: PathBuf,
        /// Also render `<out>/<preset>.svg`.
        #[arg(long)]
        plot: bool,
    },
    /// Run the acceptance criteria and print one pass/fail line each.
    Selftest {
        /// Criterion ids to run (default: all ten).
        ids: Vec<u32>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Cfpoly,
    Focksim,
    Both,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Engine {
        match e {
            EngineArg::Cfpoly => Engine::CfPoly,
            EngineArg::Focksim => Engine::FockSim,
            EngineArg::Both => Engine::Both,
        }
    }
}

enum CliError {
    Config(String),
    Numeric(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Numeric(_) => EXIT_NUMERIC,
            CliError::Io(_) => EXIT_IO,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Numeric(m) | CliError::Io(m) => m,
        }
    }
}

fn io_err(context: &str, e: &std::io::Error) -> CliError {
    CliError::Io(format!("{context}: {e}"))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_CONFIG,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let pool = build_pool(cli.jobs)?;
    match cli.command {
        Command::Run { config, out } => run_config(&config, out.as_deref(), cli.engine, &pool),
        Command::Figure { preset, out, plot } => run_figure(&preset, &out, plot, cli.engine, &pool),
        Command::Selftest { ids } => selftest(&ids),
    }
}

/// Resolve the worker count: `--jobs` beats `$TRIPHASE_JOBS` beats the
/// rayon default (one worker per available execution unit).
fn build_pool(jobs_flag: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    let jobs = match jobs_flag {
        Some(0) => return Err(CliError::Config("--jobs must be at least 1".to_owned())),
        Some(j) => Some(j),
        None => match std::env::var(JOBS_ENV) {
            Ok(raw) => {
                let j: usize = raw.parse().map_err(|_| {
                    CliError::Config(format!("{JOBS_ENV}={raw} is not a worker count"))
                })?;
                if j == 0 {
                    return Err(CliError::Config(format!("{JOBS_ENV} must be at least 1")));
                }
                Some(j)
            }
            Err(_) => None,
        },
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        builder = builder.num_threads(j);
    }
    builder
        .build()
        .map_err(|e| CliError::Numeric(format!("worker pool: {e}")))
}

/// Evaluate scenario points in the worker pool, then sort deterministically;
/// output is byte-identical for any worker count.
fn evaluate(
    cfgs: &[ScenarioConfig],
    pool: &rayon::ThreadPool,
) -> Result<Vec<Row>, CliError> {
    let points = scenario::scenario_points(cfgs);
    let results: Vec<Result<Vec<Row>, ScenarioError>> = pool.install(|| {
        points
            .par_iter()
            .map(|&(i, n)| scenario::compute_rows(&cfgs[i], n))
            .collect()
    });
    let mut rows = Vec::new();
    for result in results {
        rows.extend(result.map_err(|e| CliError::Numeric(e.to_string()))?);
    }
    scenario::sort_rows(&mut rows);
    Ok(rows)
}

fn run_config(
    path: &Path,
    out: Option<&Path>,
    engine: Option<EngineArg>,
    pool: &rayon::ThreadPool,
) -> Result<(), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| io_err(&format!("reading {}", path.display()), &e))?;
    let mut cfg = scenario::parse_config(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    cfg.tag = tag_from_path(path);
    if let Some(e) = engine {
        cfg.engine = e.into();
    }
    let rows = evaluate(std::slice::from_ref(&cfg), pool)?;
    match out {
        Some(dest) => report::emit_csv(&rows, dest)
            .map_err(|e| io_err(&format!("writing {}", dest.display()), &e))?,
        None => {
            print!("{}", report::render_csv(&rows));
            let sidecar = report::render_sidecar(&rows);
            if !sidecar.is_empty() {
                eprint!("{sidecar}");
            }
        }
    }
    Ok(())
}

/// Scenario tag for a config file: its stem, with CSV-hostile characters
/// replaced so the column stays parseable.
fn tag_from_path(path: &Path) -> String {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "scenario".to_owned());
    stem.replace([',', '\n', '\r'], "_")
}

fn run_figure(
    preset: &str,
    out_dir: &Path,
    plot: bool,
    engine: Option<EngineArg>,
    pool: &rayon::ThreadPool,
) -> Result<(), CliError> {
    let mut family =
        scenario::figure_preset(preset).map_err(|e| CliError::Config(e.to_string()))?;
    if let Some(e) = engine {
        for cfg in &mut family.configs {
            cfg.engine = e.into();
        }
    }
    let rows = evaluate(&family.configs, pool)?;
    std::fs::create_dir_all(out_dir)
        .map_err(|e| io_err(&format!("creating {}", out_dir.display()), &e))?;
    let csv_path = out_dir.join(format!("{}.csv", family.name));
    report::emit_csv(&rows, &csv_path)
        .map_err(|e| io_err(&format!("writing {}", csv_path.display()), &e))?;
    eprintln!("wrote {}", csv_path.display());
    if plot {
        let svg_path = out_dir.join(format!("{}.svg", family.name));
        let svg = report::render_plot(&rows, family.axis, family.ordinate, family.name)
            .map_err(|e| CliError::Numeric(e.to_string()))?;
        std::fs::write(&svg_path, svg)
            .map_err(|e| io_err(&format!("writing {}", svg_path.display()), &e))?;
        eprintln!("wrote {}", svg_path.display());
    }
    Ok(())
}

fn selftest(ids: &[u32]) -> Result<(), CliError> {
    let ids: Vec<u32> = if ids.is_empty() {
        (1..=acceptance::CRITERION_COUNT).collect()
    } else {
        for &id in ids {
            if !(1..=acceptance::CRITERION_COUNT).contains(&id) {
                return Err(CliError::Config(format!(
                    "criterion id {id} out of range 1..={}",
                    acceptance::CRITERION_COUNT
                )));
            }
        }
        ids.to_vec()
    };
    let mut all_passed = true;
    for id in ids {
        let rep = acceptance::run_criterion(id);
        println!("{}", rep.line());
        all_passed &= rep.passed;
    }
    if all_passed {
        Ok(())
    } else {
        Err(CliError::Numeric(
            "one or more acceptance criteria failed".to_owned(),
        ))
    }
}
