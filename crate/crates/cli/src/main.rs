//! Batch CLI: every experiment as one reproducible invocation.
//!
//! Exit codes: 0 on success, 2 on usage errors (clap), 1 on runtime
//! errors. Identical argv (including `--seed`) produces byte-identical
//! artifacts; `CHAOSLAB_THREADS` caps the worker pool (0 = automatic)
//! without affecting any output.

mod commands;
mod output;

use clap::{Parser, Subcommand};

use commands::{forecast, game, lattice, map};
use output::{Emit, OutputFormat};

#[derive(Parser)]
#[command(name = "chaoslab", version, about = "Deterministic-chaos laboratory")]
struct Cli {
    /// Output directory for artifacts.
    #[arg(long, global = true, default_value = "out")]
    out: std::path::PathBuf,

    /// Seed for every random stream in the run.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Data artifact format: csv files, or arrays embedded in the report.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// First-order map dynamics.
    #[command(subcommand)]
    Map(map::MapCommand),
    /// Nonlinear forecasting.
    #[command(subcommand)]
    Forecast(forecast::ForecastCommand),
    /// Host-parasitoid coupled-map lattice.
    #[command(subcommand)]
    Lattice(lattice::LatticeCommand),
    /// Spatial Prisoner's Dilemma.
    #[command(subcommand)]
    Game(game::GameCommand),
}

fn configure_threads() {
    if let Ok(raw) = std::env::var("CHAOSLAB_THREADS") {
        if let Ok(threads) = raw.trim().parse::<usize>() {
            if threads > 0 {
                // Ignore failure: the pool may already be initialized.
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build_global();
            }
        }
    }
}

fn main() {
    configure_threads();
    let cli = Cli::parse();
    let emit = Emit {
        out: cli.out,
        seed: cli.seed,
        format: cli.format,
    };
    let result = match cli.command {
        Command::Map(cmd) => map::run(cmd, &emit),
        Command::Forecast(cmd) => forecast::run(cmd, &emit),
        Command::Lattice(cmd) => lattice::run(cmd, &emit),
        Command::Game(cmd) => game::run(cmd, &emit),
    };
    if let Err(err) = result {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}
