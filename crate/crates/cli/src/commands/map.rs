//! `chaoslab map ...`: orbits, Lyapunov exponents, bifurcation scans,
//! invariant densities.

use anyhow::{bail, Result};
use clap::{Args, Subcommand};
use serde::Serialize;

use chaoslab::maps::{
    arcsine_bin_masses, arcsine_transform, bifurcation_scan, density_histogram, family, iterate,
    l1_distance, lyapunov, lyapunov_horizon, uniform_bin_masses, MapParams, MapSpec,
    DEFAULT_TRANSIENT, DEFAULT_X0,
};

use crate::output::{float, Emit};

#[derive(Args, Clone)]
pub struct MapSelect {
    /// Map family: logistic or ricker.
    #[arg(long = "map", default_value = "logistic")]
    pub map: String,

    /// Logistic control parameter.
    #[arg(long)]
    pub a: Option<f64>,

    /// Ricker intrinsic rate.
    #[arg(long)]
    pub r0: Option<f64>,

    /// Ricker density scale.
    #[arg(long)]
    pub scale: Option<f64>,
}

impl MapSelect {
    fn spec(&self) -> Result<MapSpec> {
        let family = family(&self.map)?;
        let spec = (family.build_spec)(&MapParams {
            a: self.a,
            r0: self.r0,
            scale: self.scale,
        })?;
        Ok(spec)
    }
}

#[derive(Subcommand)]
pub enum MapCommand {
    /// Iterate the map and record the orbit.
    Orbit(OrbitArgs),
    /// Estimate the Lyapunov exponent (and optionally local exponents).
    Lyapunov(LyapunovArgs),
    /// Sweep the control parameter and record attractor samples.
    Bifurcate(BifurcateArgs),
    /// Histogram the invariant density against a reference.
    Density(DensityArgs),
}

#[derive(Args)]
pub struct OrbitArgs {
    #[command(flatten)]
    select: MapSelect,
    #[arg(long, default_value_t = DEFAULT_X0)]
    x0: f64,
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = DEFAULT_TRANSIENT)]
    transient: usize,
}

#[derive(Args)]
pub struct LyapunovArgs {
    #[command(flatten)]
    select: MapSelect,
    #[arg(long, default_value_t = DEFAULT_X0)]
    x0: f64,
    #[arg(long, default_value_t = 1_000_000)]
    n: usize,
    #[arg(long, default_value_t = DEFAULT_TRANSIENT)]
    transient: usize,
    /// Window length for the local-exponent series.
    #[arg(long)]
    window: Option<usize>,
    /// Initial uncertainty: also report the predictability horizon.
    #[arg(long)]
    epsilon: Option<f64>,
}

#[derive(Args)]
pub struct BifurcateArgs {
    #[command(flatten)]
    select: MapSelect,
    #[arg(long, default_value_t = 2.8)]
    lo: f64,
    #[arg(long, default_value_t = 4.0)]
    hi: f64,
    #[arg(long = "n-params", default_value_t = 601)]
    n_params: usize,
    #[arg(long, default_value_t = DEFAULT_TRANSIENT)]
    settle: usize,
    #[arg(long, default_value_t = 200)]
    keep: usize,
    #[arg(long, default_value_t = DEFAULT_X0)]
    x0: f64,
}

#[derive(Args)]
pub struct DensityArgs {
    #[command(flatten)]
    select: MapSelect,
    #[arg(long, default_value_t = DEFAULT_X0)]
    x0: f64,
    #[arg(long, default_value_t = 1_000_000)]
    n: usize,
    #[arg(long, default_value_t = DEFAULT_TRANSIENT)]
    transient: usize,
    #[arg(long, default_value_t = 50)]
    bins: usize,
    /// Reference density for the L1 comparison.
    #[arg(long, value_parser = ["arcsine", "uniform", "none"], default_value = "arcsine")]
    reference: String,
    /// Apply the arcsine-to-uniform conjugacy before binning.
    #[arg(long)]
    transform: bool,
}

#[derive(Serialize)]
struct MapRunConfig {
    spec: MapSpec,
    x0: f64,
    n: usize,
    transient: usize,
}

pub fn run(command: MapCommand, emit: &Emit) -> Result<()> {
    emit.ensure_dir()?;
    match command {
        MapCommand::Orbit(args) => orbit(args, emit),
        MapCommand::Lyapunov(args) => lyapunov_cmd(args, emit),
        MapCommand::Bifurcate(args) => bifurcate(args, emit),
        MapCommand::Density(args) => density(args, emit),
    }
}

fn orbit(args: OrbitArgs, emit: &Emit) -> Result<()> {
    let spec = args.select.spec()?;
    let orbit = iterate(&spec, args.x0, args.n, args.transient)?;
    emit.table(
        "orbit",
        "t,x",
        orbit
            .samples
            .iter()
            .enumerate()
            .map(|(t, x)| format!("{t},{}", float(*x))),
    )?;
    #[derive(Serialize)]
    struct Results {
        len: usize,
        first: f64,
        last: f64,
        samples: Option<Vec<f64>>,
    }
    let results = Results {
        len: orbit.samples.len(),
        first: orbit.samples[0],
        last: *orbit.samples.last().unwrap(),
        samples: matches!(emit.format, crate::output::OutputFormat::Json)
            .then(|| orbit.samples.clone()),
    };
    emit.report(
        "map orbit",
        MapRunConfig {
            spec,
            x0: args.x0,
            n: args.n,
            transient: args.transient,
        },
        results,
    )?;
    println!(
        "orbit: {} samples of {} in {}",
        orbit.samples.len(),
        spec.kind(),
        emit.out.display()
    );
    Ok(())
}

fn lyapunov_cmd(args: LyapunovArgs, emit: &Emit) -> Result<()> {
    let spec = args.select.spec()?;
    let estimate = lyapunov(&spec, args.x0, args.n, args.transient, args.window)?;
    let horizon = match args.epsilon {
        Some(eps) => Some(lyapunov_horizon(estimate.lambda, eps)?),
        None => None,
    };
    if let Some(series) = &estimate.window_series {
        emit.table(
            "local_lyapunov",
            "start,lambda_local",
            series
                .iter()
                .enumerate()
                .map(|(i, l)| format!("{i},{}", float(*l))),
        )?;
    }
    #[derive(Serialize)]
    struct Results {
        lambda: f64,
        n_iterates: usize,
        clamped: usize,
        horizon: Option<f64>,
        window: Option<usize>,
    }
    emit.report(
        "map lyapunov",
        MapRunConfig {
            spec,
            x0: args.x0,
            n: args.n,
            transient: args.transient,
        },
        Results {
            lambda: estimate.lambda,
            n_iterates: estimate.n_iterates,
            clamped: estimate.clamped,
            horizon,
            window: args.window,
        },
    )?;
    println!(
        "lambda = {:.6} nats/step ({} iterates, {} clamped)",
        estimate.lambda, estimate.n_iterates, estimate.clamped
    );
    if let Some(h) = horizon {
        println!(
            "horizon = {h:.4} steps at epsilon = {}",
            args.epsilon.unwrap()
        );
    }
    Ok(())
}

fn bifurcate(args: BifurcateArgs, emit: &Emit) -> Result<()> {
    let spec = args.select.spec()?;
    let points = bifurcation_scan(
        &spec,
        args.lo,
        args.hi,
        args.n_params,
        args.settle,
        args.keep,
        args.x0,
    )?;
    emit.table(
        "scan",
        "param,x",
        points.iter().flat_map(|p| {
            p.samples
                .iter()
                .map(move |x| format!("{},{}", float(p.param), float(*x)))
        }),
    )?;
    emit.table(
        "scan_lambda",
        "param,lambda,clamped",
        points
            .iter()
            .map(|p| format!("{},{},{}", float(p.param), float(p.lambda), p.clamped)),
    )?;
    let positive = points.iter().filter(|p| p.lambda > 0.0).count();
    #[derive(Serialize)]
    struct Config {
        spec: MapSpec,
        lo: f64,
        hi: f64,
        n_params: usize,
        settle: usize,
        keep: usize,
        x0: f64,
    }
    #[derive(Serialize)]
    struct Results {
        n_params: usize,
        positive_lambda: usize,
    }
    emit.report(
        "map bifurcate",
        Config {
            spec,
            lo: args.lo,
            hi: args.hi,
            n_params: args.n_params,
            settle: args.settle,
            keep: args.keep,
            x0: args.x0,
        },
        Results {
            n_params: points.len(),
            positive_lambda: positive,
        },
    )?;
    println!(
        "scanned {} parameters, {} with positive lambda",
        points.len(),
        positive
    );
    Ok(())
}

fn density(args: DensityArgs, emit: &Emit) -> Result<()> {
    let spec = args.select.spec()?;
    let orbit = iterate(&spec, args.x0, args.n, args.transient)?;
    let samples = if args.transform {
        if !matches!(spec, MapSpec::Logistic { .. }) {
            bail!("--transform applies the arcsine conjugacy, defined on [0, 1] orbits");
        }
        arcsine_transform(&orbit.samples)
    } else {
        orbit.samples.clone()
    };
    let (lo, hi) = match spec {
        MapSpec::Logistic { .. } => (0.0, 1.0),
        MapSpec::Ricker { .. } => (
            0.0,
            samples.iter().cloned().fold(0.0, f64::max) * (1.0 + 1e-12),
        ),
    };
    let histogram = density_histogram(&samples, args.bins, lo, hi)?;
    let reference = match args.reference.as_str() {
        "arcsine" => {
            if !matches!(spec, MapSpec::Logistic { .. }) || args.transform {
                bail!("arcsine reference applies to untransformed logistic orbits; use --reference uniform or none");
            }
            Some(arcsine_bin_masses(args.bins))
        }
        "uniform" => Some(uniform_bin_masses(args.bins)),
        _ => None,
    };
    let l1 = reference
        .as_ref()
        .map(|r| l1_distance(&histogram.masses, r));

    let width = (hi - lo) / args.bins as f64;
    emit.table(
        "density",
        "bin_lo,bin_hi,mass,reference",
        histogram.masses.iter().enumerate().map(|(i, mass)| {
            let r = reference.as_ref().map(|r| r[i]);
            format!(
                "{},{},{},{}",
                float(lo + width * i as f64),
                float(lo + width * (i + 1) as f64),
                float(*mass),
                crate::output::opt_float(r),
            )
        }),
    )?;
    #[derive(Serialize)]
    struct Config {
        spec: MapSpec,
        x0: f64,
        n: usize,
        transient: usize,
        bins: usize,
        reference: String,
        transform: bool,
    }
    #[derive(Serialize)]
    struct Results {
        l1_distance: Option<f64>,
        occupied_bins: usize,
    }
    emit.report(
        "map density",
        Config {
            spec,
            x0: args.x0,
            n: args.n,
            transient: args.transient,
            bins: args.bins,
            reference: args.reference.clone(),
            transform: args.transform,
        },
        Results {
            l1_distance: l1,
            occupied_bins: histogram.masses.iter().filter(|m| **m > 0.0).count(),
        },
    )?;
    match l1 {
        Some(l1) => println!("L1 distance to {} reference: {l1:.5}", args.reference),
        None => println!("histogram over {} bins written", args.bins),
    }
    Ok(())
}
