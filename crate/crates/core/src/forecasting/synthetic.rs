//! Synthetic series: map orbits, noise, sinusoids, and aggregated
//! ensembles of chaotic components.

use crate::maps::{iterate, MapSpec};
use crate::runio::{streams, RngStream};

use super::{ForecastError, Series};

/// One component of an aggregated series.
#[derive(Clone, Copy, Debug)]
pub struct ComponentSpec {
    pub spec: MapSpec,
    pub x0: f64,
}

/// Elementwise sum of independently iterated component orbits.
///
/// Each component contributes `len` samples after its own `transient`;
/// summing many independently initialized chaotic orbits buries the
/// low-dimensional structure any single component would show.
pub fn aggregate_series(
    components: &[ComponentSpec],
    len: usize,
    transient: usize,
) -> Result<Series, ForecastError> {
    if components.is_empty() {
        return Err(ForecastError::EmptyEnsemble);
    }
    let mut sum = vec![0.0; len];
    for component in components {
        let orbit = iterate(&component.spec, component.x0, len, transient)?;
        for (acc, v) in sum.iter_mut().zip(&orbit.samples) {
            *acc += v;
        }
    }
    Series::new(format!("sum of {} components", components.len()), sum)
}

/// `k` logistic components with seeded initial states in (0.05, 0.95).
pub fn logistic_ensemble(a: f64, k: usize, seed: u64) -> Vec<ComponentSpec> {
    let stream = RngStream::new(seed, streams::AGGREGATE_X0);
    (0..k)
        .map(|i| ComponentSpec {
            spec: MapSpec::Logistic { a },
            x0: stream.range_at(0.05, 0.95, i as u64),
        })
        .collect()
}

/// A logistic orbit as a labelled series.
pub fn logistic_series(
    a: f64,
    x0: f64,
    len: usize,
    transient: usize,
) -> Result<Series, ForecastError> {
    let orbit = iterate(&MapSpec::Logistic { a }, x0, len, transient)?;
    Series::new(format!("logistic a={a}"), orbit.samples)
}

/// Seeded iid uniform noise on [0, 1).
pub fn uniform_noise_series(len: usize, seed: u64) -> Result<Series, ForecastError> {
    let stream = RngStream::new(seed, streams::NOISE_SERIES);
    Series::new(
        "iid uniform noise",
        (0..len).map(|i| stream.at(i as u64)).collect(),
    )
}

/// Unit-amplitude sine sampled `samples_per_period` times per cycle.
pub fn sine_series(len: usize, samples_per_period: f64) -> Result<Series, ForecastError> {
    let omega = std::f64::consts::TAU / samples_per_period;
    Series::new("sine", (0..len).map(|i| (omega * i as f64).sin()).collect())
}
