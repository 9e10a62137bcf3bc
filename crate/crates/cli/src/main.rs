use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use spinsync_cli::config::{Format, Mode};
use spinsync_cli::quantity::EntropyBase;
use spinsync_cli::{parse_config, run_job};

#[derive(Parser)]
#[command(name = "spinsync", version, about = "Steady states and phase-locking measures of dissipative spin-1 chains")]
struct Cli {
    /// Job description; omitted keys take their defaults
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (stdout when absent)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    format: Option<Format>,
    /// Worker threads, 0 = all cores
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Logarithm base for entropies: e or 2
    #[arg(long, global = true)]
    entropy_base: Option<EntropyBase>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Single steady state
    Steady,
    /// Phase distributions of the steady state
    Dist,
    /// Two-parameter grid of steady-state quantities
    Sweep2d,
    /// Coupling-induced blockade loci
    Locus,
    /// Perturbative series or polynomial coefficients
    Perturb,
    /// Grid of entanglement and correlation measures
    Entangle,
}

impl From<Command> for Mode {
    fn from(c: Command) -> Self {
        match c {
            Command::Steady => Mode::Steady,
            Command::Dist => Mode::Dist,
            Command::Sweep2d => Mode::Sweep2d,
            Command::Locus => Mode::Locus,
            Command::Perturb => Mode::Perturb,
            Command::Entangle => Mode::Entangle,
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let text = match &cli.config {
        Some(path) => std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?,
        None => String::new(),
    };
    let mut spec = parse_config(&text).with_context(|| match &cli.config {
        Some(p) => format!("in {}", p.display()),
        None => "in the default job".into(),
    })?;
    if let Some(c) = cli.command {
        spec.mode = c.into();
    }
    if let Some(out) = cli.out {
        spec.out = Some(out);
    }
    if let Some(f) = cli.format {
        spec.format = f;
    }
    if let Some(w) = cli.workers {
        spec.workers = w;
    }
    if let Some(b) = cli.entropy_base {
        spec.entropy_base = b;
    }
    spec.validate()?;
    for path in run_job(&spec)? {
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
