//! `chaoslab game ...`: spatial Prisoner's Dilemma runs, kaleidoscopes,
//! cluster experiments, and the theoretical cooperator fraction.

use anyhow::{bail, Result};
use clap::{Args, Subcommand};
use serde::Serialize;

use chaoslab::games::{
    cluster_experiment, fc_theory, run as run_game, ClusterSpec, GameBoundary, GameConfig,
    GameInit, GameRun, Neighborhood, RecordMode, UpdateSpec,
};

use crate::output::{float, frame_stem, Emit};

#[derive(Subcommand)]
pub enum GameCommand {
    /// Run the spatial game and record f_C per generation.
    Run(RunArgs),
    /// Symmetric run from a single central defector.
    Kaleidoscope(KaleidoscopeArgs),
    /// Embed a strategy block and watch it grow or shrink.
    Cluster(ClusterArgs),
    /// Print the predicted asymptotic cooperator fraction 12 ln 2 - 8.
    FcTheory,
}

#[derive(Args, Clone)]
pub struct RuleArgs {
    /// Defector advantage (temptation payoff).
    #[arg(long, default_value_t = 1.9)]
    b: f64,
    /// Punishment payoff (0 = canonical).
    #[arg(long, default_value_t = 0.0)]
    e: f64,
    #[arg(long, value_parser = ["moore8+self", "moore8", "von-neumann4"], default_value = "moore8+self")]
    neighborhood: String,
    #[arg(long, value_parser = ["fixed", "periodic"], default_value = "fixed")]
    boundary: String,
    #[arg(long, value_parser = ["sync-deterministic", "sync-probabilistic", "async-random-order"],
          default_value = "sync-deterministic")]
    update: String,
    /// Stiffness for probabilistic winning.
    #[arg(long, default_value_t = 8.0)]
    m: f64,
}

impl RuleArgs {
    fn parts(&self) -> Result<(Neighborhood, GameBoundary, UpdateSpec)> {
        let neighborhood = Neighborhood::parse(&self.neighborhood)
            .ok_or_else(|| anyhow::anyhow!("unknown neighborhood '{}'", self.neighborhood))?;
        let boundary = GameBoundary::parse(&self.boundary)
            .ok_or_else(|| anyhow::anyhow!("unknown boundary '{}'", self.boundary))?;
        let update = match self.update.as_str() {
            "sync-deterministic" => UpdateSpec::SyncDeterministic,
            "sync-probabilistic" => UpdateSpec::SyncProbabilistic { m: self.m },
            "async-random-order" => UpdateSpec::AsyncRandomOrder,
            other => bail!("unknown update rule '{other}'"),
        };
        Ok((neighborhood, boundary, update))
    }
}

#[derive(Args)]
pub struct RunArgs {
    #[arg(long, default_value_t = 400)]
    n: usize,
    #[command(flatten)]
    rule: RuleArgs,
    #[arg(long, default_value_t = 300)]
    generations: usize,
    #[arg(long, value_parser = ["random", "single-d-center"], default_value = "random")]
    init: String,
    /// Initial cooperator fraction for random init.
    #[arg(long = "fraction-c", default_value_t = 0.6)]
    fraction_c: f64,
    /// Write a PPM frame every K generations.
    #[arg(long = "frames-every")]
    frames_every: Option<usize>,
}

#[derive(Args)]
pub struct KaleidoscopeArgs {
    #[arg(long, default_value_t = 99)]
    n: usize,
    #[arg(long, default_value_t = 1.9)]
    b: f64,
    #[arg(long, default_value_t = 200)]
    generations: usize,
    #[arg(long = "frames-every")]
    frames_every: Option<usize>,
}

#[derive(Args)]
pub struct ClusterArgs {
    #[arg(long, default_value_t = 1.9)]
    b: f64,
    #[arg(long, value_parser = ["d-block", "c-block"], default_value = "d-block")]
    cluster: String,
    /// Block side length.
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 12)]
    generations: usize,
    /// Lattice side; defaults to a size the frontier cannot escape.
    #[arg(long)]
    n: Option<usize>,
    /// Punishment payoff.
    #[arg(long, default_value_t = 0.0)]
    e: f64,
}

pub fn run(command: GameCommand, emit: &Emit) -> Result<()> {
    emit.ensure_dir()?;
    match command {
        GameCommand::Run(args) => game_run(args, emit),
        GameCommand::Kaleidoscope(args) => kaleidoscope(args, emit),
        GameCommand::Cluster(args) => cluster(args, emit),
        GameCommand::FcTheory => fc_theory_cmd(emit),
    }
}

fn emit_game_outputs(record: &GameRun, frames: Option<usize>, emit: &Emit) -> Result<()> {
    emit.table(
        "fc",
        "t,f_C",
        record
            .fc
            .iter()
            .enumerate()
            .map(|(t, fc)| format!("{t},{}", float(*fc))),
    )?;
    if frames.is_some() {
        for board in &record.snapshots {
            emit.write_frame(&board.frame(), &frame_stem("game", board.generation()))?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct GameResults {
    final_fc: f64,
    mean_fc_last_third: f64,
    degenerate_sites: usize,
    fc: Option<Vec<f64>>,
}

impl GameResults {
    fn from(record: &GameRun, emit: &Emit) -> Self {
        let tail_start = record.fc.len() * 2 / 3;
        let tail = &record.fc[tail_start..];
        Self {
            final_fc: *record.fc.last().unwrap(),
            mean_fc_last_third: tail.iter().sum::<f64>() / tail.len() as f64,
            degenerate_sites: record.degenerate_sites,
            fc: matches!(emit.format, crate::output::OutputFormat::Json).then(|| record.fc.clone()),
        }
    }
}

fn game_run(args: RunArgs, emit: &Emit) -> Result<()> {
    let (neighborhood, boundary, update) = args.rule.parts()?;
    let init = match args.init.as_str() {
        "random" => GameInit::Random {
            fraction_c: args.fraction_c,
        },
        "single-d-center" => GameInit::SingleDefectorCenter,
        other => bail!("unknown init '{other}'"),
    };
    let config = GameConfig {
        n: args.n,
        b: args.rule.b,
        eps: args.rule.e,
        neighborhood,
        boundary,
        update,
        generations: args.generations,
        init,
        seed: emit.seed,
    };
    let record_mode = match args.frames_every {
        Some(k) => RecordMode::FramesEvery(k),
        None => RecordMode::Summary,
    };
    let record = run_game(&config, record_mode)?;
    emit_game_outputs(&record, args.frames_every, emit)?;
    emit.report("game run", &config, GameResults::from(&record, emit))?;
    println!(
        "f_C(0) = {:.4}, f_C({}) = {:.4}, mean over last third = {:.4}",
        record.fc[0],
        record.fc.len() - 1,
        record.fc.last().unwrap(),
        GameResults::from(&record, emit).mean_fc_last_third
    );
    Ok(())
}

fn kaleidoscope(args: KaleidoscopeArgs, emit: &Emit) -> Result<()> {
    if args.n.is_multiple_of(2) {
        bail!("kaleidoscope needs an odd side so the defector sits centrally");
    }
    let config = GameConfig {
        n: args.n,
        b: args.b,
        eps: 0.0,
        neighborhood: Neighborhood::Moore8Self,
        boundary: GameBoundary::Fixed,
        update: UpdateSpec::SyncDeterministic,
        generations: args.generations,
        init: GameInit::SingleDefectorCenter,
        seed: emit.seed,
    };
    // Always snapshot: the symmetry check wants every generation.
    let stride = args.frames_every.unwrap_or(1);
    let record = run_game(&config, RecordMode::FramesEvery(stride.max(1)))?;
    let symmetric = record.snapshots.iter().all(|b| b.has_square_symmetry());
    emit_game_outputs(&record, args.frames_every, emit)?;

    #[derive(Serialize)]
    struct Results {
        symmetric_every_snapshot: bool,
        final_fc: f64,
        fc: Option<Vec<f64>>,
    }
    emit.report(
        "game kaleidoscope",
        &config,
        Results {
            symmetric_every_snapshot: symmetric,
            final_fc: *record.fc.last().unwrap(),
            fc: matches!(emit.format, crate::output::OutputFormat::Json).then(|| record.fc.clone()),
        },
    )?;
    println!(
        "kaleidoscope: {} generations, symmetric snapshots: {symmetric}, final f_C = {:.4}",
        args.generations,
        record.fc.last().unwrap()
    );
    Ok(())
}

fn cluster(args: ClusterArgs, emit: &Emit) -> Result<()> {
    let cluster = match args.cluster.as_str() {
        "d-block" => ClusterSpec::DBlock { k: args.k },
        "c-block" => ClusterSpec::CBlock { k: args.k },
        other => bail!("unknown cluster kind '{other}'"),
    };
    let outcome = cluster_experiment(
        args.b,
        cluster,
        args.generations,
        args.n,
        args.e,
        Neighborhood::Moore8Self,
    )?;
    emit.table(
        "cluster_counts",
        "t,count",
        outcome
            .counts
            .iter()
            .enumerate()
            .map(|(t, c)| format!("{t},{c}")),
    )?;
    #[derive(Serialize)]
    struct Config {
        b: f64,
        cluster: ClusterSpec,
        generations: usize,
        n: Option<usize>,
        eps: f64,
    }
    emit.report(
        "game cluster",
        Config {
            b: args.b,
            cluster,
            generations: args.generations,
            n: args.n,
            eps: args.e,
        },
        &outcome,
    )?;
    println!(
        "{:?} block of {}: {} -> {} cells over {} generations",
        outcome.verdict, args.k, outcome.initial, outcome.final_count, args.generations
    );
    Ok(())
}

fn fc_theory_cmd(emit: &Emit) -> Result<()> {
    let value = fc_theory();
    #[derive(Serialize)]
    struct Results {
        fc: f64,
    }
    emit.report("game fc-theory", (), Results { fc: value })?;
    println!("{value:.10}");
    Ok(())
}
