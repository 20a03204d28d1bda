//! `chaoslab lattice ...`: coupled-map-lattice runs and regime reports.

use anyhow::{bail, Result};
use clap::{Args, Subcommand};
use serde::Serialize;

use chaoslab::lattice::{
    classify_regime, nb_equilibrium, render_frame, simulate, Boundary, LatticeConfig, LatticeInit,
    PatchParams, RecordMode, RegimeReport, RegimeThresholds,
};

use crate::output::{float, frame_stem, Emit};

#[derive(Subcommand)]
pub enum LatticeCommand {
    /// Simulate and write the summary series (and optional frames).
    Run(LatticeArgs),
    /// Simulate and classify the regime.
    Classify(LatticeArgs),
}

#[derive(Args)]
pub struct LatticeArgs {
    /// Side length in patches (1 = single-patch baseline).
    #[arg(long, default_value_t = 30)]
    n: usize,
    #[arg(long, default_value_t = 2.0)]
    r0: f64,
    #[arg(long, default_value_t = 1.0)]
    attack: f64,
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    #[arg(long = "mu-h", default_value_t = 1.0)]
    mu_h: f64,
    #[arg(long = "mu-p", default_value_t = 0.89)]
    mu_p: f64,
    #[arg(long, default_value_t = 2000)]
    steps: usize,
    #[arg(long, value_parser = ["cyclic", "absorbing", "redistribute"], default_value = "cyclic")]
    boundary: String,
    /// Initial condition: equilibrium times seeded random factors, or a
    /// central seed.
    #[arg(long, value_parser = ["random", "central"], default_value = "random")]
    init: String,
    /// Low random factor (random init).
    #[arg(long, default_value_t = 0.9)]
    lo: f64,
    /// High random factor (random init).
    #[arg(long, default_value_t = 1.1)]
    hi: f64,
    /// Central-seed host density; defaults to H*.
    #[arg(long)]
    h0: Option<f64>,
    /// Central-seed parasitoid density; defaults to P*.
    #[arg(long)]
    p0: Option<f64>,
    /// Extinction threshold on the global host mean.
    #[arg(long = "extinction-eps")]
    extinction_eps: Option<f64>,
    /// Write a PGM frame every K generations.
    #[arg(long = "frames-every")]
    frames_every: Option<usize>,
}

#[derive(Serialize)]
struct Config {
    lattice: LatticeConfig,
    params: PatchParams,
    frames_every: Option<usize>,
}

pub fn run(command: LatticeCommand, emit: &Emit) -> Result<()> {
    emit.ensure_dir()?;
    match command {
        LatticeCommand::Run(args) => run_impl(args, emit, false),
        LatticeCommand::Classify(args) => run_impl(args, emit, true),
    }
}

fn run_impl(args: LatticeArgs, emit: &Emit, classify: bool) -> Result<()> {
    let params = PatchParams::new(args.r0, args.attack, args.c)?;
    let boundary = Boundary::parse(&args.boundary)
        .ok_or_else(|| anyhow::anyhow!("unknown boundary '{}'", args.boundary))?;
    let init = match args.init.as_str() {
        "random" => LatticeInit::UniformRandom {
            lo: args.lo,
            hi: args.hi,
            seed: emit.seed,
        },
        "central" => {
            let (h_star, p_star) = nb_equilibrium(&params)?;
            LatticeInit::CentralSeed {
                h0: args.h0.unwrap_or(h_star),
                p0: args.p0.unwrap_or(p_star),
            }
        }
        other => bail!("unknown init '{other}'"),
    };
    let config = LatticeConfig {
        n: args.n,
        mu_h: args.mu_h,
        mu_p: args.mu_p,
        boundary,
        init,
        steps: args.steps,
        extinction_eps: args.extinction_eps,
    };
    let record_mode = match args.frames_every {
        Some(k) => RecordMode::FramesEvery(k),
        None => RecordMode::Summary,
    };
    let record = simulate(&config, &params, record_mode)?;

    emit.table(
        "summary",
        "t,meanH,meanP",
        record
            .mean_h
            .iter()
            .zip(&record.mean_p)
            .enumerate()
            .map(|(t, (h, p))| format!("{t},{},{}", float(*h), float(*p))),
    )?;

    if args.frames_every.is_some() {
        let (h_star, p_star) = record
            .equilibrium
            .unwrap_or((record.mean_h[0].max(f64::MIN_POSITIVE), 1.0));
        for state in &record.snapshots {
            let frame = render_frame(state, h_star, p_star);
            emit.write_frame(&frame, &frame_stem("lattice", state.t))?;
        }
    }

    // `lattice classify` must classify; `lattice run` reports the regime
    // when the run is long enough and plain summary stats otherwise.
    let regime: Option<RegimeReport> = match classify_regime(&record, &RegimeThresholds::default())
    {
        Ok(report) => Some(report),
        Err(err) if classify => return Err(err.into()),
        Err(_) => None,
    };

    let command = if classify {
        "lattice classify"
    } else {
        "lattice run"
    };
    emit.report(
        command,
        Config {
            lattice: config,
            params,
            frames_every: args.frames_every,
        },
        RunResults {
            generations: record.mean_h.len() - 1,
            extinct_at: record.extinct_at,
            final_mean_h: *record.mean_h.last().unwrap(),
            final_mean_p: *record.mean_p.last().unwrap(),
            equilibrium: record.equilibrium,
            extinction_eps: record.extinction_eps,
            regime: regime.clone(),
        },
    )?;

    if let Some(regime) = &regime {
        println!("regime: {}", regime.label.name());
    }
    println!(
        "{} generations, final mean H = {:.6}, mean P = {:.6}{}",
        record.mean_h.len() - 1,
        record.mean_h.last().unwrap(),
        record.mean_p.last().unwrap(),
        match record.extinct_at {
            Some(t) => format!(", extinct at t = {t}"),
            None => String::new(),
        }
    );
    Ok(())
}

#[derive(Serialize)]
struct RunResults {
    generations: usize,
    extinct_at: Option<usize>,
    final_mean_h: f64,
    final_mean_p: f64,
    equilibrium: Option<(f64, f64)>,
    extinction_eps: f64,
    regime: Option<RegimeReport>,
}
