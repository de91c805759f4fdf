//! `greenlane` command-line driver.
//!
//! Exit codes: 0 ok, 1 a hard invariant failed, 2 configuration error, 3 resource abort
//! (vertex cap, iteration cap, or a failed write).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod report;
mod run;

use clap::{Parser, Subcommand};
use config::{validate, Experiment, ExperimentConfig, Level, SCHEMA_VERSION};
use greenlane::Error;
use report::{report_bytes, write_report, RunReport};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

const EXIT_INVARIANT: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

#[derive(Parser)]
#[command(name = "greenlane", version, about = "Dirichlet Green functions, unit currents and nonexistence criteria on weighted graphs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Worker thread cap (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Report path; CSV sidecars are written beside it. Without it the report goes to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Relative residual target for linear solves.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Vertex cap for graph builders; overrides GREENLANE_MAX_VERTICES.
    #[arg(long, global = true)]
    max_vertices: Option<usize>,
    /// Record wall-clock seconds in the report (breaks byte-for-byte reproducibility).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand)]
enum Cmd {
    #[command(flatten)]
    Experiment(Experiment),
    /// List every violated constraint of a config without executing it.
    Validate {
        /// JSON config, e.g. the `config` block of an earlier report.
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(subcommand)]
        experiment: Option<Experiment>,
    },
    /// Execute a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

fn load_config(path: &PathBuf) -> Result<ExperimentConfig, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Invariant(_) => EXIT_INVARIANT,
        Error::Resource(_) | Error::NotConverged { .. } => EXIT_RESOURCE,
        _ => EXIT_CONFIG,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: threads: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    }
    let from_args = |experiment: Experiment| ExperimentConfig { schema_version: SCHEMA_VERSION, experiment, tol: cli.tol, max_vertices: cli.max_vertices };
    let from_file = |path: &PathBuf| {
        load_config(path).map(|mut c| {
            c.tol = cli.tol.or(c.tol);
            c.max_vertices = cli.max_vertices.or(c.max_vertices);
            c
        })
    };
    let (cfg, validate_only) = match &cli.cmd {
        Cmd::Experiment(e) => (Ok(from_args(e.clone())), false),
        Cmd::Run { config } => (from_file(config), false),
        Cmd::Validate { config: Some(_), experiment: Some(_) } => (Err("give either --config or an experiment subcommand, not both".to_string()), true),
        Cmd::Validate { config: Some(path), .. } => (from_file(path), true),
        Cmd::Validate { experiment: Some(e), .. } => (Ok(from_args(e.clone())), true),
        Cmd::Validate { .. } => (Err("validate needs --config FILE or an experiment subcommand".to_string()), true),
    };
    let cfg = match cfg {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: config: {msg}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };

    let diags = validate(&cfg);
    let errors = diags.iter().filter(|d| d.level == Level::Error).count();
    if validate_only {
        for d in &diags {
            println!("{d}");
        }
        if diags.is_empty() {
            println!("ok: {} config is valid", cfg.experiment.name());
        }
        return if errors > 0 { ExitCode::from(EXIT_CONFIG) } else { ExitCode::SUCCESS };
    }
    for d in &diags {
        eprintln!("{d}");
    }
    if errors > 0 {
        return ExitCode::from(EXIT_CONFIG);
    }
    if let Some(cap) = cfg.max_vertices {
        std::env::set_var("GREENLANE_MAX_VERTICES", cap.to_string());
    }

    let start = Instant::now();
    let outcome = match run::execute(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let warnings = diags.iter().map(|d| d.to_string()).collect();
    let mut rep = RunReport::new(cfg, warnings, &outcome);
    if cli.timing {
        rep.wall_clock_seconds = Some(start.elapsed().as_secs_f64());
    }
    let written = match &cli.out {
        Some(path) => write_report(path, &rep, &outcome.tables),
        None => report_bytes(&rep).and_then(|b| std::io::stdout().write_all(&b)),
    };
    if let Err(e) = written {
        eprintln!("error: writing report: {e}");
        return ExitCode::from(EXIT_RESOURCE);
    }

    let inv = &rep.invariants;
    for c in inv.checks.iter().filter(|c| !c.passed) {
        eprintln!("{} {}: {}", if c.hard { "FAILED" } else { "warning: soft check failed" }, c.name, c.detail);
    }
    eprintln!("{}: {} checks passed, {} failed ({} hard)", rep.config.experiment.name(), inv.passed, inv.failed, inv.hard_failed);
    if inv.hard_failed > 0 {
        ExitCode::from(EXIT_INVARIANT)
    } else {
        ExitCode::SUCCESS
    }
}
