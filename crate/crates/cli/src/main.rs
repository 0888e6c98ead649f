//! `purity` — config-driven driver for channel output-purity computations.
//!
//! Exit codes: 0 when every check passes, 1 when the run completes but some
//! verdict fails, 2 for usage or configuration errors.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Parser, Subcommand};

use purity_core::linalg::NormOrder;

use config::{OutputFormat, RunConfig};
use report::{ReportDocument, Results, Summary, Timings, ToolInfo};

#[derive(Parser)]
#[command(
    name = "purity",
    version,
    about = "Output-purity toolkit for finite-dimensional quantum channels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// TOML run configuration; flags below override its fields.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Norm orders, comma separated; "inf" is accepted (e.g. --p 1,2.5,inf).
    #[arg(long, global = true, value_delimiter = ',', value_name = "ORDERS")]
    p: Option<Vec<String>>,

    /// Ascent restarts per optimization.
    #[arg(long, global = true)]
    restarts: Option<u32>,

    /// Base seed for all random draws.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Write the report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Report format.
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,

    /// Ascent convergence tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Attach wall-clock timings (makes reports non-reproducible byte for
    /// byte).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Clone, Copy, Subcommand)]
enum Command {
    /// Maximal output purity of each configured channel at each order.
    Nu,
    /// Joint-versus-product comparison over the configured factor list.
    CheckMult,
    /// Seeded batches of the trace bound and the expansion identity.
    VerifyLemma,
    /// Random-channel search for multiplicativity violations.
    Search,
    /// Trace preservation and complete positivity checks.
    Validate,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Nu => "nu",
            Command::CheckMult => "check-mult",
            Command::VerifyLemma => "verify-lemma",
            Command::Search => "search",
            Command::Validate => "validate",
        }
    }
}

fn resolve_config(cli: &Cli) -> Result<RunConfig, String> {
    let mut cfg = config::load(cli.config.as_deref())?;
    if let Some(raw) = &cli.p {
        cfg.p = raw
            .iter()
            .map(|s| NormOrder::from_str(s).map_err(|e| format!("--p {s}: {e}")))
            .collect::<Result<Vec<_>, String>>()?;
    }
    if let Some(restarts) = cli.restarts {
        cfg.restarts = restarts;
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &cli.out {
        cfg.out = Some(out.clone());
    }
    if let Some(format) = cli.format {
        cfg.format = format;
    }
    if let Some(tol) = cli.tol {
        cfg.tol = tol;
    }
    if cfg.p.is_empty() {
        return Err("at least one norm order is required".into());
    }
    if cfg.restarts == 0 {
        return Err("restarts must be at least 1".into());
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<bool, String> {
    let cfg = resolve_config(cli)?;
    let started = Instant::now();
    let (results, summary): (Results, Summary) = match cli.command {
        Command::Nu => commands::cmd_nu(&cfg)?,
        Command::CheckMult => commands::cmd_check_mult(&cfg)?,
        Command::VerifyLemma => commands::cmd_verify_lemma(&cfg)?,
        Command::Search => commands::cmd_search(&cfg)?,
        Command::Validate => commands::cmd_validate(&cfg)?,
    };
    let timings = cli.timings.then(|| Timings {
        total_ms: started.elapsed().as_millis(),
    });

    let passed = summary.all_passed();
    let out = cfg.out.clone();
    let format = cfg.format;
    let document = ReportDocument {
        tool: ToolInfo::current(),
        command: cli.command.name(),
        config: cfg,
        results,
        summary,
        timings,
    };
    let rendered = match format {
        OutputFormat::Json => document.to_json()?,
        OutputFormat::Csv => document.to_csv()?,
    };
    match out {
        Some(path) => std::fs::write(&path, rendered)
            .map_err(|e| format!("cannot write report {}: {e}", path.display()))?,
        None => print!("{rendered}"),
    }
    Ok(passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
