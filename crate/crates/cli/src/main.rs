//! `lipswiss`: builds Swiss-cheese domains and writes CSV tables and SVG figures
//! for the content series, area density, remainder terms and contour bounds.
//!
//! Exit status is 0 when every check passes, 1 when a check fails, 2 for
//! usage, configuration, parameter or construction errors and 3 for other
//! failures.

mod commands;
mod config;
mod output;
mod plot;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context as _;
use clap::{Parser, Subcommand};

use commands::Run;
use config::{ConfigError, RunConfig};
use output::Summary;

#[derive(Parser)]
#[command(name = "lipswiss", version, about = "Swiss-cheese domains for analytic Lipschitz spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Flat `key = value` configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory; overrides `out` in the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Overrides `seed` in the config.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Monte Carlo sample count; overrides `mc_samples` in the config.
    #[arg(long, global = true)]
    samples: Option<usize>,
}

#[derive(Subcommand, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Hole table and domain figure.
    Build,
    /// Partial sums of the content series against the harmonic lower bound.
    Series,
    /// Area density of the exceptional set and the hole-distance bounds.
    Density,
    /// Remainder-term decomposition and the empirical remainder ratio.
    VerifyA,
    /// Radius obstruction for a geometric radius rule.
    Appendix,
    /// Contour integrals against content times seminorm.
    Melnikov,
    /// Every command above.
    All,
}

type Step = fn(&mut Run<'_>) -> anyhow::Result<()>;

fn steps(cmd: Command) -> Vec<Step> {
    match cmd {
        Command::Build => vec![commands::build],
        Command::Series => vec![commands::series],
        Command::Density => vec![commands::density],
        Command::VerifyA => vec![commands::verify_a],
        Command::Appendix => vec![commands::appendix],
        Command::Melnikov => vec![commands::melnikov],
        Command::All => vec![
            commands::build,
            commands::series,
            commands::density,
            commands::verify_a,
            commands::appendix,
            commands::melnikov,
        ],
    }
}

fn load(cli: &Cli) -> anyhow::Result<RunConfig> {
    let path = cli.config.as_ref().ok_or_else(|| ConfigError { line: None, message: "--config is required".into() })?;
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut cfg = RunConfig::parse(&text).with_context(|| format!("in {}", path.display()))?;
    if let Some(out) = &cli.out {
        cfg.out = out.clone();
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(samples) = cli.samples {
        cfg.mc_samples = samples;
    }
    Ok(cfg)
}

fn is_usage(err: &anyhow::Error) -> bool {
    err.chain().any(|e| {
        e.is::<ConfigError>()
            || e.downcast_ref::<std::io::Error>().is_some_and(|io| io.kind() == std::io::ErrorKind::NotFound)
            || matches!(
                e.downcast_ref::<lipswiss_core::Error>(),
                Some(
                    lipswiss_core::Error::Parameter(_)
                        | lipswiss_core::Error::Usage(_)
                        | lipswiss_core::Error::Construction(_)
                )
            )
    })
}

fn run(cli: &Cli) -> anyhow::Result<Summary> {
    let cfg = load(cli)?;
    fs::create_dir_all(&cfg.out).with_context(|| format!("creating {}", cfg.out.display()))?;
    let mut summary = Summary::default();
    for step in steps(cli.command) {
        step(&mut Run { cfg: &cfg, out: &cfg.out, summary: &mut summary })?;
    }
    summary.write(&cfg.out)?;
    Ok(summary)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(summary) => {
            for c in &summary.checks {
                let tag = if c.passed { "PASS" } else { "FAIL" };
                println!("[{tag}] {}: {} = {:.6e} (threshold {:.6e})", c.command, c.name, c.value, c.threshold);
            }
            for c in summary.failures() {
                eprintln!("FAIL {}: {}", c.command, c.name);
            }
            if summary.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(if is_usage(&err) { 2 } else { 3 })
        }
    }
}
