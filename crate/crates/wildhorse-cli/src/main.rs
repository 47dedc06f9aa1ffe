//! Experiment runner for the wild-horseshoe constructions.
//!
//! Exit codes: 0 success, 1 usage/config/IO error, 2 parameter-check failure,
//! 3 construction failure, 4 verification failure.

mod config;
mod stages;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{Backend, ExperimentConfig};
use stages::Failure;

#[derive(Parser)]
#[command(name = "wildhorse", version, about = "Wild horseshoe constructions and orbit statistics")]
struct Cli {
    /// key = value configuration file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the config backend
    #[arg(long, global = true)]
    backend: Option<Backend>,
    /// Precision of the mpfr-like backend
    #[arg(long, global = true)]
    precision_bits: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Extra `key=value` settings applied after the config file
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every parameter inequality
    ParamsCheck,
    /// Thickness tables and bridge listings
    Cantor,
    /// Initial linked pair and linear growth
    Link,
    /// Critical chain and wandering rectangles
    Chain,
    /// Designed orbits and their statistics
    Simulate,
    /// Every stage plus the target, Dirac and historic experiments
    RunAll,
}

fn load(cli: &Cli) -> anyhow::Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    for kv in &cli.set {
        let (k, v) = kv.split_once('=').ok_or_else(|| anyhow::anyhow!("--set expects KEY=VALUE, got {kv:?}"))?;
        cfg.set(k.trim(), v.trim())?;
    }
    if let Some(b) = cli.backend {
        cfg.backend = b;
    }
    if cli.precision_bits.is_some() {
        cfg.precision_bits = cli.precision_bits;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(1);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    let cfg = match load(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    let out = cli.out.as_path();
    let result = match cli.command {
        Command::ParamsCheck => stages::params_check(&cfg, out).map(|_| ()),
        Command::Cantor => stages::cantor(&cfg, out),
        Command::Link => stages::link(&cfg, out),
        Command::Chain => stages::chain(&cfg, out),
        Command::Simulate => stages::simulate(&cfg, out).map(|_| ()),
        Command::RunAll => stages::run_all(&cfg, out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(Failure::exit_code(&e) as u8)
        }
    }
}
