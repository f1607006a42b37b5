use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use ico_cqed::presets::FigurePreset;
use ico_cqed::sweep::{run_joined, SweepConfig};
use ico_cqed::verify::verify;
use ico_cqed::{SweepError, UsageError};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "ico-cqed",
    version,
    about = "Atom crossing two cavities in a superposition of orders"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep gT for a JSON config and write CSV
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// CSV destination (stdout if omitted); metadata goes next to it
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reproduce the data behind one figure panel (fig2a ... fig5c)
    Figure {
        id: FigurePreset,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare closed forms with the truncated-propagator pipeline
    Verify {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        draws: u32,
    },
}

#[derive(Serialize)]
struct Metadata<'a> {
    tool: &'static str,
    version: &'static str,
    core_version: &'static str,
    source: String,
    configs: &'a [SweepConfig],
}

enum Failure {
    Usage(anyhow::Error),
    Verification,
    Other(anyhow::Error),
}

impl From<SweepError> for Failure {
    fn from(e: SweepError) -> Self {
        match e {
            SweepError::Usage(u) => Failure::Usage(u.into()),
            other => Failure::Other(other.into()),
        }
    }
}

impl From<UsageError> for Failure {
    fn from(e: UsageError) -> Self {
        Failure::Usage(e.into())
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Other(e)
    }
}

fn sidecar_path(out: &Path) -> PathBuf {
    out.with_extension("meta.json")
}

fn emit(configs: &[SweepConfig], source: String, out: Option<&Path>) -> Result<(), Failure> {
    let csv = run_joined(configs)?.to_csv();
    match out {
        None => {
            std::io::stdout()
                .write_all(csv.as_bytes())
                .context("writing CSV to stdout")?;
        }
        Some(path) => {
            fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?;
            let meta = Metadata {
                tool: "ico-cqed",
                version: ico_cqed::VERSION,
                core_version: ico_cqed_core::VERSION,
                source,
                configs,
            };
            let meta_path = sidecar_path(path);
            let text = serde_json::to_string_pretty(&meta).context("encoding metadata")? + "\n";
            fs::write(&meta_path, text)
                .with_context(|| format!("writing {}", meta_path.display()))?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Sweep { config, out } => {
            let text = fs::read_to_string(&config)
                .with_context(|| format!("reading {}", config.display()))
                .map_err(Failure::Usage)?;
            let cfg: SweepConfig = serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", config.display()))
                .map_err(Failure::Usage)?;
            emit(
                &[cfg],
                format!("sweep {}", config.display()),
                out.as_deref(),
            )
        }
        Command::Figure { id, out } => emit(&id.configs(), format!("figure {id}"), out.as_deref()),
        Command::Verify { seed, draws } => {
            let report = verify(seed, draws)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&report).context("encoding report")?
            );
            if report.passed {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Verification) => {
            eprintln!("verification failed");
            ExitCode::from(2)
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
