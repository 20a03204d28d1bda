//! `chaoslab forecast ...`: rho curves, embedding search, linear
//! baseline, classification, aggregation experiments.

use anyhow::{bail, Context, Result};
use clap::{Args, Subcommand};
use serde::Serialize;

use chaoslab::forecasting::{
    aggregate_series, ar_rho_curve, classify, grid_search, logistic_ensemble, logistic_series,
    rho_curve, sine_series, uniform_noise_series, ClassifyThresholds, EmbeddingConfig, Protocol,
    RhoCurve, Series,
};
use chaoslab::runio::read_series_column;

use crate::output::{float, opt_float, Emit};

#[derive(Subcommand)]
pub enum ForecastCommand {
    /// Simplex-projection correlation curve rho(T_p).
    Rho(RhoArgs),
    /// Search (E, tau) for the best rho at an evaluation horizon.
    Search(SearchArgs),
    /// Linear autoregressive baseline curve.
    Baseline(BaselineArgs),
    /// Simplex curve, baseline, and verdict in one pass.
    Classify(ClassifyArgs),
    /// Sum independent chaotic components and measure the skill loss.
    Aggregate(AggregateArgs),
}

#[derive(Args, Clone)]
pub struct SeriesSource {
    /// Single-column CSV of observations (optional header).
    #[arg(long)]
    input: Option<std::path::PathBuf>,

    /// Built-in series when no input file is given.
    #[arg(long, value_parser = ["logistic", "noise", "sine"], default_value = "logistic")]
    demo: String,

    /// Length of the built-in series.
    #[arg(long = "demo-len", default_value_t = 1000)]
    demo_len: usize,

    /// Logistic parameter for the built-in chaotic series.
    #[arg(long, default_value_t = 4.0)]
    a: f64,

    /// Samples per cycle for the built-in sine.
    #[arg(long = "samples-per-period", default_value_t = 20.0)]
    samples_per_period: f64,
}

impl SeriesSource {
    fn load(&self, seed: u64) -> Result<Series> {
        if let Some(path) = &self.input {
            let values =
                read_series_column(path).with_context(|| format!("reading {}", path.display()))?;
            return Ok(Series::new(path.display().to_string(), values)?);
        }
        let series = match self.demo.as_str() {
            "logistic" => logistic_series(self.a, 0.3, self.demo_len, 1000)?,
            "noise" => uniform_noise_series(self.demo_len, seed)?,
            "sine" => sine_series(self.demo_len, self.samples_per_period)?,
            other => bail!("unknown demo series '{other}'"),
        };
        Ok(series)
    }

    fn describe(&self) -> String {
        match &self.input {
            Some(path) => path.display().to_string(),
            None => format!("demo:{}", self.demo),
        }
    }
}

#[derive(Args, Clone)]
pub struct EmbeddingArgs {
    /// Embedding dimension.
    #[arg(long, default_value_t = 3)]
    e: usize,
    /// Lag between delay coordinates.
    #[arg(long, default_value_t = 1)]
    tau: usize,
    /// Library exclusion half-width around each predictee.
    #[arg(long, default_value_t = 0)]
    exclusion: usize,
    /// Out-of-sample protocol.
    #[arg(long, value_parser = ["half-split-forward", "half-split-backward", "full-with-exclusion"],
          default_value = "half-split-forward")]
    protocol: String,
}

impl EmbeddingArgs {
    fn config(&self) -> Result<EmbeddingConfig> {
        let protocol = Protocol::parse(&self.protocol)
            .ok_or_else(|| anyhow::anyhow!("unknown protocol '{}'", self.protocol))?;
        Ok(EmbeddingConfig::new(
            self.e,
            self.tau,
            self.exclusion,
            protocol,
        ))
    }
}

#[derive(Args)]
pub struct RhoArgs {
    #[command(flatten)]
    source: SeriesSource,
    #[command(flatten)]
    embedding: EmbeddingArgs,
    #[arg(long = "p-max", default_value_t = 10)]
    p_max: usize,
}

#[derive(Args)]
pub struct SearchArgs {
    #[command(flatten)]
    source: SeriesSource,
    #[arg(long = "e-min", default_value_t = 1)]
    e_min: usize,
    #[arg(long = "e-max", default_value_t = 10)]
    e_max: usize,
    #[arg(long = "tau-min", default_value_t = 1)]
    tau_min: usize,
    #[arg(long = "tau-max", default_value_t = 4)]
    tau_max: usize,
    #[arg(long = "p-eval", default_value_t = 1)]
    p_eval: usize,
    #[arg(long, default_value_t = 0)]
    exclusion: usize,
    #[arg(long, value_parser = ["half-split-forward", "half-split-backward", "full-with-exclusion"],
          default_value = "half-split-forward")]
    protocol: String,
}

#[derive(Args)]
pub struct BaselineArgs {
    #[command(flatten)]
    source: SeriesSource,
    /// Autoregression order.
    #[arg(long, default_value_t = 3)]
    order: usize,
    #[arg(long = "p-max", default_value_t = 10)]
    p_max: usize,
    #[arg(long, value_parser = ["half-split-forward", "half-split-backward", "full-with-exclusion"],
          default_value = "half-split-forward")]
    protocol: String,
}

#[derive(Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    source: SeriesSource,
    #[command(flatten)]
    embedding: EmbeddingArgs,
    #[arg(long = "p-max", default_value_t = 10)]
    p_max: usize,
    /// Baseline autoregression order.
    #[arg(long, default_value_t = 3)]
    order: usize,
    #[arg(long = "strong-rho", default_value_t = 0.5)]
    strong_rho: f64,
    #[arg(long = "chaos-drop", default_value_t = 0.3)]
    chaos_drop: f64,
    #[arg(long = "noise-ceiling", default_value_t = 0.2)]
    noise_ceiling: f64,
    #[arg(long = "flat-range", default_value_t = 0.1)]
    flat_range: f64,
}

#[derive(Args)]
pub struct AggregateArgs {
    /// Components in the sum.
    #[arg(long, default_value_t = 50)]
    k: usize,
    /// Comma-separated k values to sweep instead of a single k.
    #[arg(long = "k-grid", value_delimiter = ',')]
    k_grid: Option<Vec<usize>>,
    #[arg(long, default_value_t = 4.0)]
    a: f64,
    #[arg(long, default_value_t = 1000)]
    len: usize,
    #[arg(long, default_value_t = 1000)]
    transient: usize,
    #[command(flatten)]
    embedding: EmbeddingArgs,
    #[arg(long = "p-max", default_value_t = 10)]
    p_max: usize,
}

pub fn run(command: ForecastCommand, emit: &Emit) -> Result<()> {
    emit.ensure_dir()?;
    match command {
        ForecastCommand::Rho(args) => rho(args, emit),
        ForecastCommand::Search(args) => search(args, emit),
        ForecastCommand::Baseline(args) => baseline(args, emit),
        ForecastCommand::Classify(args) => classify_cmd(args, emit),
        ForecastCommand::Aggregate(args) => aggregate(args, emit),
    }
}

fn curve_rows(curve: &RhoCurve) -> impl Iterator<Item = String> + '_ {
    curve
        .points
        .iter()
        .map(|p| format!("{},{},{}", p.tp, opt_float(p.rho), p.n))
}

#[derive(Serialize)]
struct CurveResults {
    rho: Vec<Option<f64>>,
    n: Vec<usize>,
    decay_rate: Option<f64>,
}

impl CurveResults {
    fn from(curve: &RhoCurve) -> Self {
        Self {
            rho: curve.points.iter().map(|p| p.rho).collect(),
            n: curve.points.iter().map(|p| p.n).collect(),
            decay_rate: curve.decay_rate,
        }
    }
}

fn print_curve(label: &str, curve: &RhoCurve) {
    let summary: Vec<String> = curve
        .points
        .iter()
        .map(|p| match p.rho {
            Some(r) => format!("{:.3}", r),
            None => "undef".to_string(),
        })
        .collect();
    println!(
        "{label}: rho(1..{}) = [{}]",
        curve.p_max(),
        summary.join(", ")
    );
}

fn rho(args: RhoArgs, emit: &Emit) -> Result<()> {
    let series = args.source.load(emit.seed)?;
    let config = args.embedding.config()?;
    let curve = rho_curve(&series, &config, args.p_max)?;
    emit.table("rho", "T_p,rho,n", curve_rows(&curve))?;
    #[derive(Serialize)]
    struct Config {
        series: String,
        embedding: EmbeddingConfig,
        p_max: usize,
    }
    emit.report(
        "forecast rho",
        Config {
            series: args.source.describe(),
            embedding: config,
            p_max: args.p_max,
        },
        CurveResults::from(&curve),
    )?;
    print_curve(series.label(), &curve);
    Ok(())
}

fn search(args: SearchArgs, emit: &Emit) -> Result<()> {
    let series = args.source.load(emit.seed)?;
    let protocol = Protocol::parse(&args.protocol)
        .ok_or_else(|| anyhow::anyhow!("unknown protocol '{}'", args.protocol))?;
    let best = grid_search(
        &series,
        (args.e_min, args.e_max),
        (args.tau_min, args.tau_max),
        protocol,
        args.exclusion,
        args.p_eval,
    )?;
    #[derive(Serialize)]
    struct Config {
        series: String,
        e_min: usize,
        e_max: usize,
        tau_min: usize,
        tau_max: usize,
        p_eval: usize,
        exclusion: usize,
        protocol: &'static str,
    }
    #[derive(Serialize)]
    struct Results {
        e: usize,
        tau: usize,
        rho: f64,
    }
    emit.report(
        "forecast search",
        Config {
            series: args.source.describe(),
            e_min: args.e_min,
            e_max: args.e_max,
            tau_min: args.tau_min,
            tau_max: args.tau_max,
            p_eval: args.p_eval,
            exclusion: args.exclusion,
            protocol: protocol.name(),
        },
        Results {
            e: best.e,
            tau: best.tau,
            rho: best.rho,
        },
    )?;
    println!(
        "best embedding: E = {}, tau = {} with rho({}) = {:.4}",
        best.e, best.tau, args.p_eval, best.rho
    );
    Ok(())
}

fn baseline(args: BaselineArgs, emit: &Emit) -> Result<()> {
    let series = args.source.load(emit.seed)?;
    let protocol = Protocol::parse(&args.protocol)
        .ok_or_else(|| anyhow::anyhow!("unknown protocol '{}'", args.protocol))?;
    let curve = ar_rho_curve(&series, args.order, protocol, args.p_max)?;
    emit.table("rho_ar", "T_p,rho,n", curve_rows(&curve))?;
    #[derive(Serialize)]
    struct Config {
        series: String,
        order: usize,
        protocol: &'static str,
        p_max: usize,
    }
    emit.report(
        "forecast baseline",
        Config {
            series: args.source.describe(),
            order: args.order,
            protocol: protocol.name(),
            p_max: args.p_max,
        },
        CurveResults::from(&curve),
    )?;
    print_curve(&format!("AR({})", args.order), &curve);
    Ok(())
}

fn classify_cmd(args: ClassifyArgs, emit: &Emit) -> Result<()> {
    let series = args.source.load(emit.seed)?;
    let config = args.embedding.config()?;
    let curve = rho_curve(&series, &config, args.p_max)?;
    let baseline = ar_rho_curve(&series, args.order, config.protocol, args.p_max).ok();
    let thresholds = ClassifyThresholds {
        strong_rho: args.strong_rho,
        chaos_drop: args.chaos_drop,
        noise_ceiling: args.noise_ceiling,
        flat_range: args.flat_range,
    };
    let classification = classify(&curve, baseline.as_ref(), &thresholds)?;
    let verdict = classification.verdict;

    emit.table("rho", "T_p,rho,n", curve_rows(&curve))?;
    if let Some(baseline) = &baseline {
        emit.table("rho_ar", "T_p,rho,n", curve_rows(baseline))?;
    }
    #[derive(Serialize)]
    struct Config {
        series: String,
        embedding: EmbeddingConfig,
        p_max: usize,
        order: usize,
        thresholds: ClassifyThresholds,
    }
    #[derive(Serialize)]
    struct Results {
        verdict: &'static str,
        classification: chaoslab::forecasting::Classification,
        simplex: CurveResults,
        baseline: Option<CurveResults>,
    }
    emit.report(
        "forecast classify",
        Config {
            series: args.source.describe(),
            embedding: config,
            p_max: args.p_max,
            order: args.order,
            thresholds,
        },
        Results {
            verdict: verdict.name(),
            simplex: CurveResults::from(&curve),
            baseline: baseline.as_ref().map(CurveResults::from),
            classification,
        },
    )?;
    print_curve(series.label(), &curve);
    println!("verdict: {}", verdict.name());
    Ok(())
}

fn aggregate(args: AggregateArgs, emit: &Emit) -> Result<()> {
    let config = args.embedding.config()?;
    let ks = args.k_grid.clone().unwrap_or_else(|| vec![args.k]);
    if ks.is_empty() {
        bail!("k grid is empty");
    }
    let mut rows = Vec::new();
    let mut rho1s = Vec::new();
    for &k in &ks {
        let components = logistic_ensemble(args.a, k, emit.seed);
        let series = aggregate_series(&components, args.len, args.transient)?;
        let curve = rho_curve(&series, &config, args.p_max)?;
        let rho1 = curve.rho_at(1);
        rows.push(format!("{k},{}", opt_float(rho1)));
        rho1s.push(rho1);
        if ks.len() == 1 {
            emit.table(
                "aggregate_series",
                "t,x",
                series
                    .values()
                    .iter()
                    .enumerate()
                    .map(|(t, x)| format!("{t},{}", float(*x))),
            )?;
            emit.table("rho", "T_p,rho,n", curve_rows(&curve))?;
        }
    }
    emit.table("rho1_vs_k", "k,rho1", rows.iter().cloned())?;
    #[derive(Serialize)]
    struct Config {
        k: Vec<usize>,
        a: f64,
        len: usize,
        transient: usize,
        embedding: EmbeddingConfig,
        p_max: usize,
    }
    #[derive(Serialize)]
    struct Results {
        rho1: Vec<Option<f64>>,
    }
    emit.report(
        "forecast aggregate",
        Config {
            k: ks.clone(),
            a: args.a,
            len: args.len,
            transient: args.transient,
            embedding: config,
            p_max: args.p_max,
        },
        Results {
            rho1: rho1s.clone(),
        },
    )?;
    for (k, rho1) in ks.iter().zip(&rho1s) {
        println!("k = {k}: rho(1) = {}", opt_float(*rho1));
    }
    Ok(())
}
