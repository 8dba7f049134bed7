use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use std::path::{Path, PathBuf};

use phasefront::harness::{self, Mode, RunConfig};
use phasefront::profiles::ProfileTable;

#[derive(Parser)]
#[command(name = "phasefront", version, about = "Phase-field cell motility experiments")]
struct Cli {
    /// Worker threads for parameter sweeps (defaults to all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct RunArgs {
    /// TOML configuration or a manifest from a previous run.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides the configuration).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed recorded with the run (overrides the configuration).
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the mode named in the configuration.
    Run(RunArgs),
    /// Convergence study of the 1D front in eps.
    Converge(RunArgs),
    /// Phase-field contour against the curve law in 2D.
    Compare(RunArgs),
    /// Tabulate Phi(V).
    PhiTable {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded property checks on random inputs.
    Check {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random cases per property.
        #[arg(long, default_value_t = 100)]
        cases: usize,
    },
}

fn load(args: &RunArgs, mode: Option<Mode>) -> Result<RunConfig> {
    let mut config =
        RunConfig::load(&args.config).with_context(|| format!("reading {}", args.config.display()))?;
    if let Some(mode) = mode {
        if config.mode != mode {
            bail!(
                "configuration is for mode {}, this command runs {}",
                config.mode.name(),
                mode.name()
            );
        }
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    Ok(config)
}

fn execute(config: &RunConfig, out: Option<&Path>) -> Result<()> {
    let artifact = harness::run(config, out)?;
    println!("{} finished in {:.1} s -> {}", config.mode.name(), artifact.wall_time, artifact.out_dir.display());
    for (key, value) in &artifact.summary {
        println!("  {key} = {value}");
    }
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .context("configuring the worker pool")?;
    }
    match cli.command {
        Command::Run(args) => execute(&load(&args, None)?, args.out.as_deref()),
        Command::Converge(args) => execute(&load(&args, Some(Mode::Converge1d))?, args.out.as_deref()),
        Command::Compare(args) => execute(&load(&args, Some(Mode::Compare2d))?, args.out.as_deref()),
        Command::PhiTable { config, out } => {
            let config = match config {
                Some(path) => RunConfig::load(&path).with_context(|| format!("reading {}", path.display()))?,
                None => RunConfig::new(Mode::PhiTable),
            };
            if config.mode != Mode::PhiTable {
                bail!("configuration is for mode {}, expected phi_table", config.mode.name());
            }
            execute(&config, out.as_deref())
        }
        Command::Check { seed, cases } => {
            let profile = ProfileTable::build(40.0, 0.02)?;
            let outcomes = harness::property_suite(seed, cases, &profile)?;
            let mut failed = 0;
            for o in &outcomes {
                println!("{} {:<26} {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail);
                failed += usize::from(!o.passed);
            }
            if failed > 0 {
                bail!("{failed} of {} checks failed", outcomes.len());
            }
            Ok(())
        }
    }
}
