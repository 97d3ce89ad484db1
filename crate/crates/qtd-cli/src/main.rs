use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use qtd_cli::config::{parse_config, Emit, RunConfig};
use qtd_cli::{log, runner};

/// Linear-optics quantum target detection laboratory.
///
/// Models a photon-pair target detection experiment in unpolarized
/// background light, compares a classical (separable polarization) and a
/// quantum (Bell-state analyzer) strategy, and locates the noise level where
/// the quantum advantage disappears. Emits plot-ready CSV/JSON artifacts.
#[derive(Parser)]
#[command(name = "qtd", version, about, long_about)]
struct Cli {
    /// Path to a `key = value` configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Master seed for all stochastic runs (overrides the config).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory for artifacts (overrides the config).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the analytic model over the configured g grid
    /// (emits fig3.csv and/or fig4.csv).
    ModelSweep,
    /// Run the Monte Carlo validation campaign against the analytic model
    /// (emits mc_validation.csv; exit status reflects the 3-sigma checks).
    Simulate {
        /// Also dump one seeded event stream per layout and hypothesis.
        #[arg(long)]
        dump_events: bool,
    },
    /// Fit the pair rate (unless configured) and locate the
    /// quantum/classical crossover for each configured window
    /// (emits crossover.json).
    Crossover,
    /// Reproduce a canned analysis with default experiment parameters.
    Reproduce {
        #[arg(value_enum)]
        target: ReproduceTarget,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ReproduceTarget {
    /// Conditional probabilities versus noise ratio.
    Fig3,
    /// Mutual information versus noise ratio.
    Fig4,
    /// Crossover shift from a 5 ns to a 100 ps coincidence window.
    WindowClaim,
}

fn load_config(path: Option<&PathBuf>) -> Result<RunConfig> {
    match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .with_context(|| format!("reading config {}", p.display()))?;
            let cfg = parse_config(&text).map_err(|e| anyhow::anyhow!("{}: {e}", p.display()))?;
            Ok(cfg)
        }
        None => Ok(RunConfig::default()),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("qtd: error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run() -> Result<bool> {
    let cli = Cli::parse();
    let mut cfg = load_config(cli.config.as_ref())?;
    if let Some(seed) = cli.seed {
        cfg.master_seed = seed;
    }

    let (label, dump_events) = match &cli.command {
        Command::ModelSweep => {
            if !cfg
                .emit
                .iter()
                .any(|e| matches!(e, Emit::Fig3 | Emit::Fig4))
            {
                cfg.emit = BTreeSet::from([Emit::Fig3, Emit::Fig4]);
            } else {
                cfg.emit.retain(|e| matches!(e, Emit::Fig3 | Emit::Fig4));
            }
            ("model-sweep".to_string(), false)
        }
        Command::Simulate { dump_events } => {
            cfg.emit = BTreeSet::from([Emit::McValidation]);
            ("simulate".to_string(), *dump_events)
        }
        Command::Crossover => {
            cfg.emit = BTreeSet::from([Emit::Crossover]);
            ("crossover".to_string(), false)
        }
        Command::Reproduce { target } => {
            let (emit, name) = match target {
                ReproduceTarget::Fig3 => (Emit::Fig3, "fig3"),
                ReproduceTarget::Fig4 => (Emit::Fig4, "fig4"),
                ReproduceTarget::WindowClaim => {
                    cfg.windows = vec![5e-9, 1e-10];
                    (Emit::Crossover, "window-claim")
                }
            };
            cfg.emit = BTreeSet::from([emit]);
            (format!("reproduce {name}"), false)
        }
    };

    let out_dir = cli
        .out
        .or_else(|| cfg.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("qtd-out"));

    log::debug(format!("output directory: {}", out_dir.display()));
    let summary = runner::run(&cfg, &out_dir, &label, dump_events)?;
    Ok(summary.validations_passed)
}
